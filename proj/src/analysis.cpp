#include "rotsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include <fftw3.h>

#include "rotsim/constants.hpp"

namespace rotsim {

AlignmentTrace smooth_trace(const AlignmentTrace& trace, int window) {
  if (window < 1 || window % 2 == 0)
    throw std::invalid_argument("smooth_trace: window must be odd and >= 1");
  const std::size_t n = trace.values.size();
  if (std::size_t(window) > n)
    throw std::invalid_argument("smooth_trace: window exceeds trace length");
  AlignmentTrace out = trace;
  const int half = window / 2;
  for (std::size_t i = 0; i < n; ++i) {
    // shrink the window near the edges, keeping it centered
    const int reach = std::min<long>(
        {long(half), long(i), long(n - 1 - i)});
    double s = 0.0;
    for (long k = -reach; k <= reach; ++k) s += trace.values[i + k];
    out.values[i] = s / double(2 * reach + 1);
  }
  return out;
}

namespace {

std::mutex fftw_plan_mutex;

// magnitude of the r2c transform of y zero-padded to pad_size
std::vector<double> padded_fft_magnitude(const std::vector<double>& y,
                                         std::size_t pad_size) {
  std::vector<double> in(pad_size, 0.0);
  std::copy(y.begin(), y.end(), in.begin());
  const std::size_t nout = pad_size / 2 + 1;
  std::vector<double> mag(nout);
  fftw_complex* out = fftw_alloc_complex(nout);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    plan = fftw_plan_dft_r2c_1d(int(pad_size), in.data(), out, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    fftw_destroy_plan(plan);
  }
  for (std::size_t k = 0; k < nout; ++k)
    mag[k] = std::hypot(out[k][0], out[k][1]);
  fftw_free(out);
  return mag;
}

}  // namespace

BeatSpectrum beat_spectrum(const AlignmentTrace& trace, double start_fs,
                           double stop_fs, const MoleculeSpec& molecule) {
  if (!(stop_fs > start_fs))
    throw std::invalid_argument("beat_spectrum: empty window");
  std::vector<double> t, y;
  for (std::size_t i = 0; i < trace.times_fs.size(); ++i) {
    if (trace.times_fs[i] >= start_fs && trace.times_fs[i] <= stop_fs) {
      t.push_back(trace.times_fs[i]);
      y.push_back(trace.values[i]);
    }
  }
  const std::size_t m = y.size();
  if (m < 16)
    throw std::invalid_argument("beat_spectrum: fewer than 16 samples in window");
  const double dt = t[1] - t[0];
  for (std::size_t i = 1; i < m; ++i)
    if (std::abs((t[i] - t[i - 1]) - dt) > 1e-9 * dt)
      throw std::invalid_argument("beat_spectrum: nonuniform time grid");

  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / double(m);
  for (std::size_t i = 0; i < m; ++i)
    y[i] = (y[i] - mean) *
           0.5 * (1.0 - std::cos(2.0 * pi * double(i) / double(m - 1)));

  const std::size_t pad = 8 * m;
  BeatSpectrum sp;
  sp.amplitude = padded_fft_magnitude(y, pad);
  sp.bin_thz = 1e3 / (double(pad) * dt);  // fs grid -> THz axis
  sp.freq_thz.resize(sp.amplitude.size());
  for (std::size_t k = 0; k < sp.freq_thz.size(); ++k)
    sp.freq_thz[k] = double(k) * sp.bin_thz;

  const double bc_thz = rotational_constant_per_fs(
                            molecule.rotational_constant_cm1) * 1e3;
  sp.resolution_warning =
      (stop_fs - start_fs) < 2.0 * revival_period_fs(
                                       molecule.rotational_constant_cm1);

  // peak picking: local maxima above 2% of the strongest feature, ignoring
  // the low-frequency leakage region; anything too close to a stronger peak
  // is a window sidelobe
  const double bin_unpadded = 1e3 / (double(m) * dt);
  const double f_min = 3.0 * bin_unpadded;
  const double min_sep = std::max(1.32 * bc_thz, 4.0 * bin_unpadded);

  double amax = 0.0;
  for (std::size_t k = 0; k < sp.amplitude.size(); ++k)
    if (sp.freq_thz[k] >= f_min) amax = std::max(amax, sp.amplitude[k]);

  std::vector<std::size_t> candidates;
  for (std::size_t k = 1; k + 1 < sp.amplitude.size(); ++k) {
    if (sp.freq_thz[k] < f_min) continue;
    if (sp.amplitude[k] < 0.02 * amax) continue;
    if (sp.amplitude[k] > sp.amplitude[k - 1] &&
        sp.amplitude[k] >= sp.amplitude[k + 1])
      candidates.push_back(k);
  }
  std::sort(candidates.begin(), candidates.end(),
            [&](std::size_t a, std::size_t b) {
              if (sp.amplitude[a] != sp.amplitude[b])
                return sp.amplitude[a] > sp.amplitude[b];
              return a < b;
            });
  std::vector<std::size_t> accepted;
  for (std::size_t k : candidates) {
    bool clear = true;
    for (std::size_t a : accepted)
      if (std::abs(sp.freq_thz[k] - sp.freq_thz[a]) < min_sep) {
        clear = false;
        break;
      }
    if (clear) accepted.push_back(k);
  }
  std::sort(accepted.begin(), accepted.end());
  for (std::size_t k : accepted)
    sp.peaks.push_back({sp.freq_thz[k], sp.amplitude[k], -1, false});
  return sp;
}

void assign_beats(BeatSpectrum& spectrum, const MoleculeSpec& molecule) {
  const double bc_thz = rotational_constant_per_fs(
                            molecule.rotational_constant_cm1) * 1e3;
  for (auto& peak : spectrum.peaks) {
    // coherence J <-> J+2 beats at Bc (4J + 6)
    const int j = std::max(0, int(std::lround((peak.freq_thz / bc_thz - 6.0)
                                              / 4.0)));
    const double f_line = bc_thz * (4.0 * j + 6.0);
    if (std::abs(peak.freq_thz - f_line) <= 2.0 * spectrum.bin_thz) {
      peak.j_lower = j;
      peak.assigned = true;
    } else {
      peak.j_lower = -1;
      peak.assigned = false;
    }
  }
}

std::vector<RevivalTime> revival_times(const MoleculeSpec& molecule,
                                       int count) {
  if (count < 1) throw std::invalid_argument("revival_times: count must be >= 1");
  const double t_rev = revival_period_fs(molecule.rotational_constant_cm1);
  std::vector<RevivalTime> out;
  for (int k = 1; k <= 4 * count; ++k) {
    RevivalTime rt;
    rt.quarter = k;
    const int g = std::gcd(k, 4);
    const int num = k / g, den = 4 / g;
    rt.label = den == 1 ? std::to_string(num)
                        : std::to_string(num) + "/" + std::to_string(den);
    rt.time_fs = t_rev * double(k) / 4.0;
    out.push_back(rt);
  }
  return out;
}

TraceExtrema find_extrema(const AlignmentTrace& trace, double t_lo_fs,
                          double t_hi_fs) {
  std::size_t first = trace.times_fs.size(), last = 0;
  for (std::size_t i = 0; i < trace.times_fs.size(); ++i) {
    if (trace.times_fs[i] >= t_lo_fs && trace.times_fs[i] <= t_hi_fs) {
      if (first == trace.times_fs.size()) first = i;
      last = i;
    }
  }
  if (first == trace.times_fs.size())
    throw std::invalid_argument("find_extrema: no samples in window");

  std::size_t imax = first, imin = first;
  for (std::size_t i = first; i <= last; ++i) {
    if (trace.values[i] > trace.values[imax]) imax = i;
    if (trace.values[i] < trace.values[imin]) imin = i;
  }

  // parabolic refinement through the neighboring samples when available
  auto refine = [&](std::size_t i, double& tq, double& vq) {
    tq = trace.times_fs[i];
    vq = trace.values[i];
    if (i == 0 || i + 1 >= trace.values.size()) return;
    const double a = trace.values[i - 1], b = trace.values[i],
                 c = trace.values[i + 1];
    const double den = a - 2.0 * b + c;
    if (den == 0.0) return;
    const double d = 0.5 * (a - c) / den;
    if (std::abs(d) > 1.0) return;
    const double step = trace.times_fs[i + 1] - trace.times_fs[i];
    tq = trace.times_fs[i] + d * step;
    vq = b - 0.25 * (a - c) * d;
  };

  TraceExtrema ex;
  refine(imax, ex.t_max_fs, ex.max_value);
  refine(imin, ex.t_min_fs, ex.min_value);
  return ex;
}

}  // namespace rotsim

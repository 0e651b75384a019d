#include "rotsim/observables.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "rotsim/constants.hpp"
#include "rotsim/kernels.hpp"
#include "rotsim/rotor.hpp"
#include "rotsim/threading.hpp"

namespace rotsim {

double expectation_cos2(const RotorState& state, const Cos2Band& band) {
  if (band.m != state.m)
    throw std::invalid_argument("expectation_cos2: band M mismatch");
  if (band.j_max < state.j_top())
    throw std::invalid_argument("expectation_cos2: band too short");
  const std::size_t n = state.size();
  double v = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const int j = state.j_at(k);
    v += band.diag_at(j) * (state.re[k] * state.re[k] +
                            state.im[k] * state.im[k]);
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    // 2 Re(conj(F_k) F_{k+1}) <J+2|cos^2|J>
    const double cr = state.re[k] * state.re[k + 1] +
                      state.im[k] * state.im[k + 1];
    v += 2.0 * band.couple_at(state.j_at(k)) * cr;
  }
  return v;
}

double angular_density(const RotorState& state, double theta_rad) {
  const std::size_t n = state.size();
  std::vector<double> p(n);
  normalized_legendre_ladder(state.m, state.j_min, int(n),
                             std::cos(theta_rad), p.data());
  double fr = 0.0, fi = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    fr += state.re[k] * p[k];
    fi += state.im[k] * p[k];
  }
  return (fr * fr + fi * fi) / (2.0 * pi);
}

std::vector<double> theta_grid(int n) {
  if (n < 64 || n % 2 != 0)
    throw std::invalid_argument("theta_grid: n must be even and >= 64");
  std::vector<double> g(std::size_t(n), 0.0);
  const double h = 2.0 * pi / n;
  for (int i = 0; i < n; ++i) g[std::size_t(i)] = -pi + (i + 0.5) * h;
  return g;
}

namespace {

// frequency differences delta_k = w(J_k+2) - w(J_k) and the coherence
// products that make the field-free trace a pure beat sum
struct MemberTrace {
  double weight;
  double diag_sum;              // time independent part
  std::vector<double> zr, zi;   // c_k conj(F_k) F_{k+1} at the snapshot
  std::vector<double> delta;    // rad/fs
};

MemberTrace member_trace_terms(const EnsembleMember& mem,
                               const Cos2Band& band,
                               const MoleculeSpec& mol) {
  const RotorState& st = mem.state;
  const std::size_t n = st.size();
  MemberTrace mt;
  mt.weight = mem.weight;
  mt.diag_sum = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    mt.diag_sum += band.diag_at(st.j_at(k)) *
                   (st.re[k] * st.re[k] + st.im[k] * st.im[k]);
  const double b = mol.rotational_constant_cm1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const int j = st.j_at(k);
    const double c = band.couple_at(j);
    mt.zr.push_back(c * (st.re[k] * st.re[k + 1] + st.im[k] * st.im[k + 1]));
    mt.zi.push_back(c * (st.re[k] * st.im[k + 1] - st.im[k] * st.re[k + 1]));
    mt.delta.push_back(rotational_frequency(j + 2, b) -
                       rotational_frequency(j, b));
  }
  return mt;
}

double interp_samples(const std::vector<double>& xs,
                      const std::vector<double>& ys, double x) {
  auto hi = std::upper_bound(xs.begin(), xs.end(), x);
  if (hi == xs.begin()) return ys.front();
  if (hi == xs.end()) return ys.back();
  const std::size_t i = std::size_t(hi - xs.begin());
  const double f = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + f * (ys[i] - ys[i - 1]);
}

std::string ensemble_provenance(const ThermalEnsemble& ens,
                                const MoleculeSpec& mol) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s ensemble, %zu members, snapshot %.6g fs",
                mol.name.c_str(), ens.members.size(), ens.snapshot_time_fs);
  return buf;
}

}  // namespace

AlignmentTrace alignment_trace(const ThermalEnsemble& ensemble,
                               const MoleculeSpec& molecule,
                               const std::vector<double>& times_fs) {
  if (ensemble.members.empty())
    throw std::invalid_argument("alignment_trace: empty ensemble");
  for (std::size_t i = 1; i < times_fs.size(); ++i)
    if (!(times_fs[i] > times_fs[i - 1]))
      throw std::invalid_argument(
          "alignment_trace: times must be strictly increasing");
  std::map<int, Cos2Band> bands;
  int j_top = 0;
  for (const auto& mem : ensemble.members)
    j_top = std::max(j_top, mem.state.j_top());
  for (const auto& mem : ensemble.members)
    if (!bands.count(mem.state.m))
      bands.emplace(mem.state.m, cos2_band(mem.state.m, j_top));

  std::vector<MemberTrace> terms;
  terms.reserve(ensemble.members.size());
  for (const auto& mem : ensemble.members)
    terms.push_back(
        member_trace_terms(mem, bands.at(mem.state.m), molecule));

  AlignmentTrace trace;
  trace.times_fs = times_fs;
  trace.values.assign(times_fs.size(), 0.0);
  trace.provenance = ensemble_provenance(ensemble, molecule);

  const bool have_pulse_samples = !ensemble.pulse_times_fs.empty();
  parallel_for(times_fs.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double t = times_fs[i];
      if (t < ensemble.pulse_start_fs) {
        trace.values[i] = 1.0 / 3.0;  // isotropic thermal state
        continue;
      }
      if (t < ensemble.snapshot_time_fs && have_pulse_samples) {
        trace.values[i] =
            interp_samples(ensemble.pulse_times_fs, ensemble.pulse_cos2, t);
        continue;
      }
      const double dt = t - ensemble.snapshot_time_fs;
      double v = 0.0;
      for (const auto& mt : terms) {
        double s = mt.diag_sum;
        for (std::size_t k = 0; k < mt.delta.size(); ++k) {
          const double ph = mt.delta[k] * dt;
          s += 2.0 * (mt.zr[k] * std::cos(ph) + mt.zi[k] * std::sin(ph));
        }
        v += mt.weight * s;
      }
      trace.values[i] = v;
    }
  });
  return trace;
}

namespace {

void check_theta_grid(const std::vector<double>& thetas) {
  const int n = int(thetas.size());
  const std::vector<double> ref = theta_grid(n);  // also checks n
  for (int i = 0; i < n; ++i)
    if (std::abs(thetas[std::size_t(i)] - ref[std::size_t(i)]) > 1e-12)
      throw std::invalid_argument(
          "quantum_carpet: thetas must come from theta_grid()");
}

// right-half nodes are Chebyshev (first kind) abscissas in x = cos theta,
// so Fejer weights integrate the densities exactly
std::vector<double> fejer_half_weights(int n_half) {
  std::vector<double> w(std::size_t(n_half), 0.0);
  for (int k = 0; k < n_half; ++k) {
    const double th = (2 * k + 1) * pi / (2 * n_half);
    double s = 0.0;
    for (int m = 1; m <= n_half / 2; ++m)
      s += std::cos(2 * m * th) / (4.0 * m * m - 1.0);
    w[std::size_t(k)] = (2.0 / n_half) * (1.0 - 2.0 * s);
  }
  return w;
}

}  // namespace

std::vector<double> carpet_quadrature_weights(int n) {
  if (n < 64 || n % 2 != 0)
    throw std::invalid_argument(
        "carpet_quadrature_weights: n must be even and >= 64");
  const std::vector<double> half = fejer_half_weights(n / 2);
  std::vector<double> w(std::size_t(n), 0.0);
  for (int k = 0; k < n / 2; ++k) {
    w[std::size_t(n / 2 + k)] = 0.5 * half[std::size_t(k)];
    w[std::size_t(n / 2 - 1 - k)] = 0.5 * half[std::size_t(k)];
  }
  return w;
}

QuantumCarpet quantum_carpet(const ThermalEnsemble& ensemble,
                             const MoleculeSpec& molecule,
                             const std::vector<double>& times_fs,
                             const std::vector<double>& thetas_rad) {
  if (ensemble.members.empty())
    throw std::invalid_argument("quantum_carpet: empty ensemble");
  check_theta_grid(thetas_rad);
  const int n = int(thetas_rad.size());
  // unique quadrant: global indices N/2 .. (3N-2)/4, everything else is a
  // mirror under theta -> -theta or theta -> pi - theta
  const int nq = (3 * n - 2) / 4 - n / 2 + 1;

  std::vector<double> xq(std::size_t(nq), 0.0);
  for (int q = 0; q < nq; ++q)
    xq[std::size_t(q)] = std::cos(thetas_rad[std::size_t(n / 2 + q)]);

  // Legendre tables per (m, parity) ladder, rows contiguous over theta
  std::map<std::pair<int, int>, std::vector<double>> tables;
  for (const auto& mem : ensemble.members) {
    const auto key = std::make_pair(mem.state.m, mem.state.j_min);
    auto [it, fresh] = tables.try_emplace(key);
    if (!fresh) continue;
    const std::size_t nj = mem.state.size();
    it->second.resize(nj * std::size_t(nq));
    std::vector<double> col(nj);
    for (int q = 0; q < nq; ++q) {
      normalized_legendre_ladder(mem.state.m, mem.state.j_min, int(nj),
                                 xq[std::size_t(q)], col.data());
      for (std::size_t j = 0; j < nj; ++j)
        it->second[j * std::size_t(nq) + std::size_t(q)] = col[j];
    }
  }

  QuantumCarpet carpet;
  carpet.times_fs = times_fs;
  carpet.thetas_rad = thetas_rad;
  carpet.density.assign(times_fs.size() * std::size_t(n), 0.0);

  const double b = molecule.rotational_constant_cm1;
  parallel_for(times_fs.size(), [&](std::size_t begin, std::size_t end) {
    const auto& ops = kernels::ops();
    std::vector<double> cr, ci, cphi, sphi;
    std::vector<double> fr(std::size_t(nq), 0.0), fi(std::size_t(nq), 0.0);
    std::vector<double> colq(std::size_t(nq), 0.0);
    for (std::size_t it = begin; it < end; ++it) {
      const double dt = times_fs[it] - ensemble.snapshot_time_fs;
      std::fill(colq.begin(), colq.end(), 0.0);
      for (const auto& mem : ensemble.members) {
        const RotorState& st = mem.state;
        const std::size_t nj = st.size();
        cr.assign(st.re.begin(), st.re.end());
        ci.assign(st.im.begin(), st.im.end());
        cphi.resize(nj);
        sphi.resize(nj);
        for (std::size_t k = 0; k < nj; ++k) {
          const double phi = rotational_frequency(st.j_at(k), b) * dt;
          cphi[k] = std::cos(phi);
          sphi[k] = -std::sin(phi);
        }
        ops.phase_rotate(nj, cphi.data(), sphi.data(), cr.data(), ci.data());
        std::fill(fr.begin(), fr.end(), 0.0);
        std::fill(fi.begin(), fi.end(), 0.0);
        const auto& table = tables.at({st.m, st.j_min});
        ops.basis_synthesis(nj, std::size_t(nq), table.data(), cr.data(),
                            ci.data(), fr.data(), fi.data());
        ops.weighted_modsq(std::size_t(nq), fr.data(), fi.data(), mem.weight,
                           colq.data());
      }
      double* col = carpet.density.data() + it * std::size_t(n);
      for (int q = 0; q < nq; ++q) {
        const double v = colq[std::size_t(q)] / (2.0 * pi);
        const int i1 = n / 2 + q;          // theta in (0, pi/2]
        const int i3 = 3 * n / 2 - 1 - i1; // pi - theta
        col[i1] = v;
        col[n - 1 - i1] = v;
        col[i3] = v;
        col[n - 1 - i3] = v;
      }
    }
  });
  return carpet;
}

double carpet_column_integral(const QuantumCarpet& carpet, std::size_t it) {
  const int n = int(carpet.thetas_rad.size());
  const std::vector<double> w = carpet_quadrature_weights(n);
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    s += w[std::size_t(i)] * carpet.at(it, std::size_t(i));
  return 2.0 * pi * s;
}

double carpet_column_cos2(const QuantumCarpet& carpet, std::size_t it) {
  const int n = int(carpet.thetas_rad.size());
  const std::vector<double> w = carpet_quadrature_weights(n);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double c = std::cos(carpet.thetas_rad[std::size_t(i)]);
    s += w[std::size_t(i)] * c * c * carpet.at(it, std::size_t(i));
  }
  return 2.0 * pi * s;
}

namespace {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(std::size_t(n));
  w.resize(std::size_t(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[std::size_t(i)] = -z;
    x[std::size_t(n - 1 - i)] = z;
    const double wi = 2.0 / ((1.0 - z * z) * pp * pp);
    w[std::size_t(i)] = wi;
    w[std::size_t(n - 1 - i)] = wi;
  }
}

}  // namespace

AlignmentTrace detector_signal(const QuantumCarpet& carpet,
                               double detector_theta_rad,
                               double half_angle_rad) {
  if (carpet.times_fs.empty())
    throw std::invalid_argument("detector_signal: empty carpet");
  if (!(half_angle_rad > 0.0) || half_angle_rad > pi)
    throw std::invalid_argument(
        "detector_signal: half angle must lie in (0, pi]");
  const int n = int(carpet.thetas_rad.size());
  const double th0 = carpet.thetas_rad.front();
  const double h = carpet.thetas_rad[1] - carpet.thetas_rad[0];

  // average over the cone: u = cos(alpha) by Gauss-Legendre, azimuth on a
  // uniform midpoint grid; node counts grow with the cone so the wide-open
  // limit stays accurate
  const int na = 8 + int(56.0 * half_angle_rad / pi);
  const int nb = 16 + 2 * int(24.0 * half_angle_rad / pi);
  std::vector<double> gx, gw;
  gauss_legendre(na, gx, gw);
  const double ulo = std::cos(half_angle_rad);
  const double cd = std::cos(detector_theta_rad);
  const double sd = std::sin(detector_theta_rad);

  struct Node {
    double pos;     // fractional index into the theta grid
    double weight;
  };
  std::vector<Node> nodes;
  nodes.reserve(std::size_t(na) * std::size_t(nb));
  for (int a = 0; a < na; ++a) {
    const double u = 0.5 * (ulo + 1.0) + 0.5 * (1.0 - ulo) * gx[std::size_t(a)];
    const double su = std::sqrt(std::max(0.0, 1.0 - u * u));
    const double wa = gw[std::size_t(a)] / double(nb);
    for (int bcount = 0; bcount < nb; ++bcount) {
      const double beta = 2.0 * pi * (bcount + 0.5) / nb;
      double cth = u * cd + su * sd * std::cos(beta);
      cth = std::clamp(cth, -1.0, 1.0);
      const double theta = std::acos(cth);
      double pos = (theta - th0) / h;
      pos = std::clamp(pos, 0.0, double(n - 1));
      nodes.push_back({pos, wa});
    }
  }

  AlignmentTrace signal;
  signal.times_fs = carpet.times_fs;
  signal.values.assign(carpet.times_fs.size(), 0.0);
  signal.provenance = "detector cone average";
  parallel_for(carpet.times_fs.size(), [&](std::size_t begin,
                                           std::size_t end) {
    for (std::size_t it = begin; it < end; ++it) {
      const double* col = carpet.density.data() + it * std::size_t(n);
      double s = 0.0;
      for (const auto& node : nodes) {
        const int i0 = std::min(n - 2, int(node.pos));
        const double f = node.pos - i0;
        s += node.weight * (col[i0] * (1.0 - f) + col[i0 + 1] * f);
      }
      signal.values[it] = s;
    }
  });

  double mean = 0.0;
  for (double v : signal.values) mean += v;
  mean /= double(signal.values.size());
  if (mean > 0.0)
    for (double& v : signal.values) v /= mean;
  return signal;
}

}  // namespace rotsim

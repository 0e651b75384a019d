#include "rotsim/rotor.hpp"

#include <cmath>
#include <sstream>

#include "rotsim/constants.hpp"
#include "rotsim/kernels.hpp"

namespace rotsim {

double rotational_frequency(int j, double b_cm1) {
  return 2.0 * pi * rotational_constant_per_fs(b_cm1) * double(j) *
         double(j + 1);
}

double RotorState::norm() const {
  double s = 0.0;
  for (std::size_t k = 0; k < re.size(); ++k)
    s += re[k] * re[k] + im[k] * im[k];
  return s;
}

RotorState initial_state(int j, int m, int j_max) {
  if (j < 0 || std::abs(m) > j)
    throw std::invalid_argument("initial_state: need 0 <= |m| <= j");
  if (j > j_max) throw std::invalid_argument("initial_state: j exceeds j_max");
  RotorState st;
  st.m = m;
  st.j_min = std::abs(m) + ((j - std::abs(m)) % 2);  // parity anchor
  const int j_top = j_max - (j_max - st.j_min) % 2;
  const std::size_t n = std::size_t((j_top - st.j_min) / 2) + 1;
  st.re.assign(n, 0.0);
  st.im.assign(n, 0.0);
  st.re[std::size_t((j - st.j_min) / 2)] = 1.0;
  return st;
}

PulseKernel PulseKernel::from_spec(const PulseSpec& spec) {
  PulseKernel k;
  k.peak_w_m2 = intensity_wcm2_to_wm2(spec.peak_intensity_w_cm2);
  k.fwhm_fs = spec.fwhm_fs;
  k.cutoff_fwhm = spec.envelope_cutoff_fwhm;
  return k;
}

double PulseKernel::intensity_at(double t_fs) const {
  if (std::abs(t_fs) > cutoff_fwhm * fwhm_fs) return 0.0;
  const double u = t_fs / fwhm_fs;
  return peak_w_m2 * std::exp(-4.0 * std::log(2.0) * u * u);
}

RotorState evolve_free(const RotorState& state, double dt_fs,
                       const MoleculeSpec& molecule) {
  RotorState out = state;
  const std::size_t n = state.size();
  std::vector<double> c(n), s(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double phi =
        rotational_frequency(state.j_at(k), molecule.rotational_constant_cm1) *
        dt_fs;
    c[k] = std::cos(phi);
    s[k] = -std::sin(phi);
  }
  kernels::ops().phase_rotate(n, c.data(), s.data(), out.re.data(),
                              out.im.data());
  out.time_fs = state.time_fs + dt_fs;
  return out;
}

namespace {

// RK4 in the interaction picture. State vector G_k = F_k e^{+i w_k t};
// dG/dt = -i u(t) A(t) G with A Hermitian tridiagonal:
//   A_kk = d_k,  A_{k,k+1} = c_k e^{-i delta_k t},
//   delta_k = w(J_k + 2) - w(J_k),
// u(t) the induced-dipole well depth over hbar (rad/fs, negative).
struct Integrator {
  std::size_t n;
  std::vector<double> d, cpl, delta;
  double u_peak, fwhm;
  std::vector<double> or_, oi, mr, mi;

  Integrator(const RotorState& st, const Cos2Band& band,
             const MoleculeSpec& mol, const PulseKernel& pulse)
      : n(st.size()), d(n), cpl(n > 0 ? n - 1 : 0), delta(cpl.size()),
        or_(cpl.size()), oi(cpl.size()), mr(n), mi(n) {
    const double b = mol.rotational_constant_cm1;
    for (std::size_t k = 0; k < n; ++k) d[k] = band.diag_at(st.j_at(k));
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const int j = st.j_at(k);
      cpl[k] = band.couple_at(j);
      delta[k] = rotational_frequency(j + 2, b) - rotational_frequency(j, b);
    }
    u_peak = interaction_rate_rad_fs(mol.delta_alpha_a3, pulse.peak_w_m2);
    fwhm = pulse.fwhm_fs;
  }

  double envelope(double t) const {
    const double u = t / fwhm;
    return std::exp(-4.0 * std::log(2.0) * u * u);
  }

  void deriv(double t, const double* xr, const double* xi, double* kr,
             double* ki) {
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double ph = delta[k] * t;
      or_[k] = cpl[k] * std::cos(ph);
      oi[k] = -cpl[k] * std::sin(ph);
    }
    kernels::ops().tridiag_matvec(n, d.data(), or_.data(), oi.data(), xr, xi,
                                  mr.data(), mi.data());
    const double u = u_peak * envelope(t);
    for (std::size_t k = 0; k < n; ++k) {  // multiply by -i u
      kr[k] = u * mi[k];
      ki[k] = -u * mr[k];
    }
  }

  // <cos^2> directly from G: coherence phases are the same e^{-i delta t}
  double cos2_at(double t, const double* gr, const double* gi) const {
    double v = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      v += d[k] * (gr[k] * gr[k] + gi[k] * gi[k]);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double ph = delta[k] * t;
      const double cr = gr[k] * gr[k + 1] + gi[k] * gi[k + 1];
      const double ci = gr[k] * gi[k + 1] - gi[k] * gr[k + 1];
      v += 2.0 * cpl[k] * (cr * std::cos(ph) + ci * std::sin(ph));
    }
    return v;
  }
};

}  // namespace

PropagationResult propagate_pulse(const RotorState& initial,
                                  const PulseKernel& pulse,
                                  const MoleculeSpec& molecule,
                                  const PropagationSettings& settings) {
  const std::size_t n = initial.size();
  if (n == 0) throw std::invalid_argument("propagate_pulse: empty state");
  const double t0 = pulse.start_fs();
  const double t1 = pulse.end_fs();
  const long nsteps = std::max(
      1L, std::lround(2.0 * pulse.cutoff_fwhm * settings.steps_per_fwhm));
  const double h = (t1 - t0) / double(nsteps);

  const Cos2Band band = cos2_band(initial.m, initial.j_top());
  Integrator in(initial, band, molecule, pulse);
  const double b = molecule.rotational_constant_cm1;

  // bring the input to the window start, then switch pictures:
  // G_k(t0) = F_k(t0) e^{+i w_k t0}
  const RotorState at_start = evolve_free(initial, t0 - initial.time_fs,
                                          molecule);
  std::vector<double> gr(n), gi(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double phi = rotational_frequency(at_start.j_at(k), b) * t0;
    const double c = std::cos(phi), s = std::sin(phi);
    gr[k] = at_start.re[k] * c - at_start.im[k] * s;
    gi[k] = at_start.re[k] * s + at_start.im[k] * c;
  }
  const double norm0 = initial.norm();

  const long stride =
      settings.record_target > 0
          ? std::max(1L, nsteps / settings.record_target)
          : 0;

  PropagationResult result;
  auto record = [&](long istep) {
    const double t = t0 + h * double(istep);
    result.sample_times_fs.push_back(t);
    result.sample_cos2.push_back(in.cos2_at(t, gr.data(), gi.data()));
  };
  if (stride > 0) record(0);

  std::vector<double> k1r(n), k1i(n), k2r(n), k2i(n), k3r(n), k3i(n), k4r(n),
      k4i(n), tr(n), ti(n);
  const auto& ops = kernels::ops();
  for (long i = 0; i < nsteps; ++i) {
    const double t = t0 + h * double(i);
    in.deriv(t, gr.data(), gi.data(), k1r.data(), k1i.data());
    for (std::size_t k = 0; k < n; ++k) {
      tr[k] = gr[k] + 0.5 * h * k1r[k];
      ti[k] = gi[k] + 0.5 * h * k1i[k];
    }
    in.deriv(t + 0.5 * h, tr.data(), ti.data(), k2r.data(), k2i.data());
    for (std::size_t k = 0; k < n; ++k) {
      tr[k] = gr[k] + 0.5 * h * k2r[k];
      ti[k] = gi[k] + 0.5 * h * k2i[k];
    }
    in.deriv(t + 0.5 * h, tr.data(), ti.data(), k3r.data(), k3i.data());
    for (std::size_t k = 0; k < n; ++k) {
      tr[k] = gr[k] + h * k3r[k];
      ti[k] = gi[k] + h * k3i[k];
    }
    in.deriv(t + h, tr.data(), ti.data(), k4r.data(), k4i.data());
    ops.rk4_combine(n, gr.data(), gi.data(), k1r.data(), k1i.data(),
                    k2r.data(), k2i.data(), k3r.data(), k3i.data(), k4r.data(),
                    k4i.data(), h / 6.0);
    if (stride > 0 && ((i + 1) % stride == 0 || i + 1 == nsteps))
      record(i + 1);
  }

  double norm1 = 0.0, top = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double p = gr[k] * gr[k] + gi[k] * gi[k];
    norm1 += p;
    if (k + 2 >= n) top += p;
  }
  result.norm_drift = std::abs(norm1 - norm0);
  result.top_occupancy = top;
  if (result.norm_drift > settings.norm_tolerance) {
    std::ostringstream msg;
    msg << "propagate_pulse: norm drifted by " << result.norm_drift
        << " (tolerance " << settings.norm_tolerance
        << "); decrease the step via ode_steps_per_fwhm";
    throw ConvergenceError(msg.str());
  }
  if (result.top_occupancy > settings.truncation_tolerance) {
    std::ostringstream msg;
    msg << "propagate_pulse: top shells J=" << initial.j_at(n - 1);
    if (n >= 2) msg << "," << initial.j_at(n - 2);
    msg << " hold " << result.top_occupancy << " (tolerance "
        << settings.truncation_tolerance << "); raise j_max";
    throw ConvergenceError(msg.str());
  }

  // back to the Schroedinger picture at the window end
  RotorState out;
  out.m = initial.m;
  out.j_min = initial.j_min;
  out.time_fs = t1;
  out.re.resize(n);
  out.im.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double phi = rotational_frequency(out.j_min + 2 * int(k), b) * t1;
    const double c = std::cos(phi), s = std::sin(phi);
    out.re[k] = gr[k] * c + gi[k] * s;
    out.im[k] = -gr[k] * s + gi[k] * c;
  }
  result.state = std::move(out);
  return result;
}

}  // namespace rotsim

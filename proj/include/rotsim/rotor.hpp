#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotsim/angular.hpp"
#include "rotsim/config.hpp"

// Rigid-rotor wavepacket in the |J,M> basis and its propagation through a
// nonresonant Gaussian pulse. M and the parity of J are conserved, so a
// state stores one single-parity ladder J = j_min, j_min+2, ... and the
// interaction Hamiltonian is tridiagonal in the packed index.

namespace rotsim {

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Free-rotor angular frequency omega_J = 2 pi Bc J(J+1) in rad/fs.
double rotational_frequency(int j, double b_cm1);

struct RotorState {
  int m = 0;
  int j_min = 0;  // parity anchor: |m| or |m|+1
  std::vector<double> re, im;
  double time_fs = 0.0;  // phases are meaningful relative to this instant

  std::size_t size() const { return re.size(); }
  int j_at(std::size_t k) const { return j_min + 2 * int(k); }
  int j_top() const { return j_at(size() - 1); }
  std::complex<double> amp(std::size_t k) const { return {re[k], im[k]}; }
  double norm() const;  // sum of |amplitude|^2
};

/// Pure |J,M> with amplitude 1, carried in a basis reaching up to j_max
/// (same parity as j).
RotorState initial_state(int j, int m, int j_max);

/// Gaussian intensity envelope with a hard cutoff, peak at t = 0.
struct PulseKernel {
  double peak_w_m2 = 0.0;
  double fwhm_fs = 12.0;
  double cutoff_fwhm = 3.0;

  static PulseKernel from_spec(const PulseSpec& spec);

  double start_fs() const { return -cutoff_fwhm * fwhm_fs; }
  double end_fs() const { return cutoff_fwhm * fwhm_fs; }
  double intensity_at(double t_fs) const;
};

struct PropagationSettings {
  int steps_per_fwhm = 1200;
  double norm_tolerance = 1e-8;
  double truncation_tolerance = 1e-10;  // occupancy of the top two shells
  int record_target = 720;              // in-pulse sample count (0 = none)
};

struct PropagationResult {
  RotorState state;           // at the pulse end, time_fs = end of window
  double norm_drift = 0.0;    // |norm(end) - norm(start)|
  double top_occupancy = 0.0; // population of the two highest J shells
  // in-pulse <cos^2 theta> samples, shared time grid across states
  std::vector<double> sample_times_fs;
  std::vector<double> sample_cos2;
};

/// Integrates the pulse window with fixed-step RK4 in the interaction
/// picture. Throws ConvergenceError when the norm drifts past tolerance or
/// the basis top fills up beyond the truncation tolerance.
PropagationResult propagate_pulse(const RotorState& initial,
                                  const PulseKernel& pulse,
                                  const MoleculeSpec& molecule,
                                  const PropagationSettings& settings);

/// Field-free evolution by dt_fs: each amplitude rotates by its own
/// e^{-i omega_J dt}. Norm is preserved exactly.
RotorState evolve_free(const RotorState& state, double dt_fs,
                       const MoleculeSpec& molecule);

}  // namespace rotsim

#pragma once

#include <string>
#include <vector>

#include "rotsim/angular.hpp"
#include "rotsim/ensemble.hpp"

// Observables of the ensemble: <cos^2 theta> traces, angular probability
// densities on a theta grid (quantum carpets) and cone-averaged detector
// signals.

namespace rotsim {

/// <cos^2 theta> of one state. The band must match the state's M and
/// reach its top J.
double expectation_cos2(const RotorState& state, const Cos2Band& band);

/// Angular probability density per steradian at (theta, any phi):
/// |sum_J F_J P~_J^M(cos theta)|^2 / (2 pi).
double angular_density(const RotorState& state, double theta_rad);

struct AlignmentTrace {
  std::vector<double> times_fs;
  std::vector<double> values;
  std::string provenance;  // molecule/pulse/temperature summary
};

/// Thermal <cos^2 theta>(t) on a strictly increasing time grid. Times
/// before the pulse window give the isotropic 1/3 exactly; times inside
/// the window are interpolated from the samples recorded during
/// propagation; later times use free evolution from the snapshot.
AlignmentTrace alignment_trace(const ThermalEnsemble& ensemble,
                               const MoleculeSpec& molecule,
                               const std::vector<double>& times_fs);

/// Cell-centered symmetric grid over [-pi, pi): theta_i = -pi + (i+1/2) h
/// with h = 2 pi / n. n must be even and >= 64. The layout is symmetric
/// under theta -> -theta and theta -> pi - theta, which the carpet
/// exploits to enforce both symmetries exactly.
std::vector<double> theta_grid(int n);

struct QuantumCarpet {
  std::vector<double> times_fs;
  std::vector<double> thetas_rad;
  std::vector<double> density;  // time-major: density[it * nthetas + ith]

  double at(std::size_t it, std::size_t ith) const {
    return density[it * thetas_rad.size() + ith];
  }
};

/// Thermal angular density on the (time x theta) grid. thetas must come
/// from theta_grid(). Every column integrates to 1 over the sphere.
QuantumCarpet quantum_carpet(const ThermalEnsemble& ensemble,
                             const MoleculeSpec& molecule,
                             const std::vector<double>& times_fs,
                             const std::vector<double>& thetas_rad);

/// Quadrature weights w_i for the carpet grid such that
/// 2 pi sum_i w_i f(theta_i) integrates f over the sphere exactly for
/// densities built from J <= n/2 - 1 (Fejer rule in cos theta on each
/// half, here returned per full-grid index).
std::vector<double> carpet_quadrature_weights(int n);

/// Integral of one carpet column over the sphere (should be 1).
double carpet_column_integral(const QuantumCarpet& carpet, std::size_t it);

/// <cos^2 theta> recomputed from one carpet column.
double carpet_column_cos2(const QuantumCarpet& carpet, std::size_t it);

/// Ion yield proxy: the density averaged over a cone of given half angle
/// about a detector axis tilted by detector_theta_rad from the pump
/// polarization, normalized to its own time average.
AlignmentTrace detector_signal(const QuantumCarpet& carpet,
                               double detector_theta_rad,
                               double half_angle_rad);

}  // namespace rotsim

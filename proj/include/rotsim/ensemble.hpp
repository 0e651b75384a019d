#pragma once

#include <vector>

#include "rotsim/config.hpp"
#include "rotsim/rotor.hpp"

// Thermal averaging: Boltzmann populations with nuclear-spin weights and
// the incoherent ensemble of propagated (J,M) wavepackets.

namespace rotsim {

struct PopulationTable {
  double temperature_k = 0.0;
  int j_cut = 0;
  std::vector<double> population;  // index J, sums to 1 over 0..j_cut
  std::vector<int> spin_weight;    // g(J): even/odd alternation
  double tail_mass = 0.0;          // thermal weight truncated above j_cut

  /// Weight of one (J,M) sublevel: population[J] / (2J+1).
  double per_m_weight(int j) const {
    return population[std::size_t(j)] / double(2 * j + 1);
  }
};

/// Populations P(J) ~ g(J) (2J+1) exp(-h c B J(J+1) / kB T), normalized
/// over J <= j_cut. Throws ConfigError when the truncated tail exceeds
/// tail_tolerance.
PopulationTable boltzmann_populations(const MoleculeSpec& molecule,
                                      double temperature_k, int j_cut,
                                      double tail_tolerance);

struct EnsembleMember {
  int j_init = 0;
  int m_init = 0;     // stored M >= 0; weight covers the -M twin
  double weight = 0.0;
  RotorState state;   // post-pulse snapshot
};

struct EnsembleDiagnostics {
  double max_norm_drift = 0.0;
  double max_top_occupancy = 0.0;
  double population_tail = 0.0;
};

struct ThermalEnsemble {
  std::vector<EnsembleMember> members;  // sorted by (J, M)
  double snapshot_time_fs = 0.0;        // end of the pulse window
  double pulse_start_fs = 0.0;
  // weighted in-pulse <cos^2 theta>, common time grid
  std::vector<double> pulse_times_fs;
  std::vector<double> pulse_cos2;
  EnsembleDiagnostics diag;
};

/// Propagates every thermally occupied (J, M >= 0) pair through the pulse.
/// +-M symmetry halves the work: M > 0 members carry doubled weight.
/// Propagations run in parallel; assembly order is deterministic.
ThermalEnsemble build_ensemble(const PopulationTable& populations,
                               const PulseKernel& pulse,
                               const MoleculeSpec& molecule,
                               const RunConfig& run);

}  // namespace rotsim

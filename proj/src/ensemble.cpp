#include "rotsim/ensemble.hpp"

#include <cmath>
#include <exception>
#include <sstream>

#include "rotsim/constants.hpp"
#include "rotsim/threading.hpp"

namespace rotsim {

PopulationTable boltzmann_populations(const MoleculeSpec& molecule,
                                      double temperature_k, int j_cut,
                                      double tail_tolerance) {
  if (temperature_k <= 0)
    throw ConfigError("boltzmann_populations: temperature must be > 0");
  if (j_cut < 0) throw ConfigError("boltzmann_populations: j_cut must be >= 0");

  // E_J / kB T with E_J = h c B J(J+1)
  const double scale = si::planck * si::speed_of_light_cm_s *
                       molecule.rotational_constant_cm1 /
                       (si::boltzmann * temperature_k);
  auto weight = [&](int j) {
    const int g = (j % 2 == 0) ? molecule.spin_weight_even
                               : molecule.spin_weight_odd;
    return double(g) * double(2 * j + 1) *
           std::exp(-scale * double(j) * double(j + 1));
  };

  PopulationTable table;
  table.temperature_k = temperature_k;
  table.j_cut = j_cut;
  double kept = 0.0;
  for (int j = 0; j <= j_cut; ++j) {
    const double w = weight(j);
    table.population.push_back(w);
    table.spin_weight.push_back(j % 2 == 0 ? molecule.spin_weight_even
                                           : molecule.spin_weight_odd);
    kept += w;
  }
  double tail = 0.0;
  for (int j = j_cut + 1; j <= j_cut + 4000; ++j) {
    const double w = weight(j);
    tail += w;
    if (w < 1e-300 * kept) break;
  }
  table.tail_mass = tail / (kept + tail);
  if (table.tail_mass > tail_tolerance) {
    std::ostringstream msg;
    msg << "boltzmann_populations: thermal weight above J=" << j_cut << " is "
        << table.tail_mass << " (tolerance " << tail_tolerance
        << "); raise j_init_cut";
    throw ConfigError(msg.str());
  }
  for (auto& p : table.population) p /= kept;
  return table;
}

ThermalEnsemble build_ensemble(const PopulationTable& populations,
                               const PulseKernel& pulse,
                               const MoleculeSpec& molecule,
                               const RunConfig& run) {
  struct Job {
    int j, m;
    double weight;
  };
  std::vector<Job> jobs;
  for (int j = 0; j <= populations.j_cut; ++j)
    for (int m = 0; m <= j; ++m)  // -M gives identical dynamics
      jobs.push_back({j, m, populations.per_m_weight(j) * (m == 0 ? 1.0 : 2.0)});

  PropagationSettings settings;
  settings.steps_per_fwhm = run.ode_steps_per_fwhm;
  settings.norm_tolerance = run.tol.norm_drift;
  settings.truncation_tolerance = run.tol.truncation_occupancy;
  settings.record_target = 720;

  std::vector<PropagationResult> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        results[i] = propagate_pulse(initial_state(jobs[i].j, jobs[i].m,
                                                   run.j_max),
                                     pulse, molecule, settings);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  });
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  ThermalEnsemble ens;
  ens.snapshot_time_fs = pulse.end_fs();
  ens.pulse_start_fs = pulse.start_fs();
  ens.diag.population_tail = populations.tail_mass;
  ens.pulse_times_fs = results.front().sample_times_fs;
  ens.pulse_cos2.assign(ens.pulse_times_fs.size(), 0.0);
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    auto& r = results[i];
    ens.members.push_back(
        {jobs[i].j, jobs[i].m, jobs[i].weight, std::move(r.state)});
    ens.diag.max_norm_drift = std::max(ens.diag.max_norm_drift, r.norm_drift);
    ens.diag.max_top_occupancy =
        std::max(ens.diag.max_top_occupancy, r.top_occupancy);
    for (std::size_t t = 0; t < ens.pulse_cos2.size(); ++t)
      ens.pulse_cos2[t] += jobs[i].weight * r.sample_cos2[t];
  }
  return ens;
}

}  // namespace rotsim

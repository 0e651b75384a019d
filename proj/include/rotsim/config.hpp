#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rotsim {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MoleculeSpec {
  std::string name = "D2";
  double rotational_constant_cm1 = 30.4436;
  double delta_alpha_a3 = 0.30;  // polarizability anisotropy volume
  int spin_weight_even = 6;      // ortho-D2
  int spin_weight_odd = 3;       // para-D2
};

struct PulseSpec {
  double wavelength_nm = 800.0;
  double fwhm_fs = 12.0;
  double peak_intensity_w_cm2 = 2e14;
  double polarization_angle_rad = 1.5707963267948966;  // relative to probe
  double envelope_cutoff_fwhm = 3.0;  // pulse window is +-cutoff*fwhm
};

struct TimeGrid {
  double start_fs = 0.0;
  double stop_fs = 800.0;
  double step_fs = 1.0;

  std::size_t size() const {
    return static_cast<std::size_t>((stop_fs - start_fs) / step_fs + 0.5) + 1;
  }
  double at(std::size_t i) const { return start_fs + step_fs * double(i); }
  std::vector<double> points() const;
};

struct Tolerances {
  double norm_drift = 1e-8;            // per propagation
  double truncation_occupancy = 1e-10; // top two J shells
  double population_tail = 1e-5;       // thermal mass above j_init_cut
};

struct RunConfig {
  double temperature_k = 295.0;
  int j_init_cut = 8;   // highest thermally occupied J propagated
  int j_max = 38;       // basis cap for every propagation
  int theta_points = 256;
  int smoothing_window = 11;
  int ode_steps_per_fwhm = 1200;
  double detector_half_angle_rad = 0.034906585039886591;  // 2 degrees
  TimeGrid time;
  Tolerances tol;
};

struct SpectrumConfig {
  double start_fs = 200.0;
  double stop_fs = 3000.0;
  std::string source = "ensemble";  // or "two_level"
};

struct Scenario {
  MoleculeSpec molecule;
  PulseSpec pulse;
  RunConfig run;
  SpectrumConfig spectrum;
};

/// Parses the "section.key = value" document format. '#' starts a comment,
/// blank lines are skipped, unknown keys are rejected. Keys under
/// "diagnostics." or "meta." are ignored so emitted manifests load back.
Scenario load_config(std::string_view text);

/// Applies one "section.key=value" override on top of a parsed scenario.
void apply_override(Scenario& sc, std::string_view assignment);

/// Re-checks cross-field constraints (called by load_config; public so
/// overrides can be validated after the fact).
void validate(const Scenario& sc);

/// Canonical serialization in the config grammar. Floats are written with
/// 17 significant digits so a round trip through load_config is exact.
std::string serialize_config(const Scenario& sc);

}  // namespace rotsim

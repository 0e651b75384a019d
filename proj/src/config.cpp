#include "rotsim/config.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "rotsim/constants.hpp"
#include "rotsim/io.hpp"

namespace rotsim {

std::vector<double> TimeGrid::points() const {
  std::vector<double> t(size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = at(i);
  return t;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  std::size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  return std::string(s.substr(a, b - a + 1));
}

double parse_double(const std::string& key, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v))
    throw ConfigError(key + ": not a finite number: '" + text + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0')
    throw ConfigError(key + ": not an integer: '" + text + "'");
  return static_cast<int>(v);
}

using Setter = std::function<void(Scenario&, const std::string&,
                                  const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"molecule.name",
       [](Scenario& s, const std::string&, const std::string& v) {
         s.molecule.name = v;
       }},
      {"molecule.rotational_constant_cm1",
       [](Scenario& s, const std::string& k, const std::string& v) {
         s.molecule.rotational_constant_cm1 = parse_double(k, v);
       }},
      {"molecule.delta_alpha_A3",
       [](Scenario& s, const std::string& k, const std::string& v) {
         s.molecule.delta_alpha_a3 = parse_double(k, v);
       }},
      {"molecule.spin_weight_even",
       [](Scenario& s, const std::string& k, const std::string& v) {
         s.molecule.spin_weight_even = parse_int(k, v);
       }},
      {"molecule.spin_weight_odd",
       [](Scenario& s, const std::string& k, const std::string& v) {
         s.molecule.spin_weight_odd = parse_int(k, v);
       }},
      {"pulse.wavelength_nm",
       [](Scenario& s, const std::string& k, const std::string& v) {
         s.pulse.wavelength_nm = parse_double(k, v);
       }},
      {"pulse.fwhm_fs",
       [](Scenario& s, const std::string& k, const std::string& v) {
         s.pulse.fwhm_fs = parse_double(k, v);
       }},
      {"pulse.peak_intensity_W_cm2",
       [](Scenario& s, const std::string& k, const std::string& v) {
         s.pulse.peak_intensity_w_cm2 = parse_double(k, v);
       }},
      {"pulse.polarization_angle_rad",
       [](Scenario& s, const std::string& k, const std::string& v) {
         s.pulse.polarization_angle_rad = parse_double(k, v);
       }},
      {"pulse.envelope_cutoff_fwhm",
       [](Scenario& s, const std::string& k, const std::string& v) {
         s.pulse.envelope_cutoff_fwhm = parse_double(k, v);
       }},
      {"run.temperature_K",
       [](Scenario& s, const std::string& k, const std::string& v) {
         s.run.temperature_k = parse_double(k, v);
       }},
      {"run.j_init_cut",
       [](Scenario& s, const std::string& k, const std::string& v) {
         s.run.j_init_cut = parse_int(k, v);
       }},
      {"run.j_max",
       [](Scenario& s, const std::string& k, const std::string& v) {
         s.run.j_max = parse_int(k, v);
       }},
      {"run.theta_points",
       [](Scenario& s, const std::string& k, const std::string& v) {
         s.run.theta_points = parse_int(k, v);
       }},
      {"run.smoothing_window",
       [](Scenario& s, const std::string& k, const std::string& v) {
         s.run.smoothing_window = parse_int(k, v);
       }},
      {"run.ode_steps_per_fwhm",
       [](Scenario& s, const std::string& k, const std::string& v) {
         s.run.ode_steps_per_fwhm = parse_int(k, v);
       }},
      {"run.detector_half_angle_rad",
       [](Scenario& s, const std::string& k, const std::string& v) {
         s.run.detector_half_angle_rad = parse_double(k, v);
       }},
      {"run.time_start_fs",
       [](Scenario& s, const std::string& k, const std::string& v) {
         s.run.time.start_fs = parse_double(k, v);
       }},
      {"run.time_stop_fs",
       [](Scenario& s, const std::string& k, const std::string& v) {
         s.run.time.stop_fs = parse_double(k, v);
       }},
      {"run.time_step_fs",
       [](Scenario& s, const std::string& k, const std::string& v) {
         s.run.time.step_fs = parse_double(k, v);
       }},
      {"run.norm_tolerance",
       [](Scenario& s, const std::string& k, const std::string& v) {
         s.run.tol.norm_drift = parse_double(k, v);
       }},
      {"run.truncation_tolerance",
       [](Scenario& s, const std::string& k, const std::string& v) {
         s.run.tol.truncation_occupancy = parse_double(k, v);
       }},
      {"run.tail_tolerance",
       [](Scenario& s, const std::string& k, const std::string& v) {
         s.run.tol.population_tail = parse_double(k, v);
       }},
      {"spectrum.start_fs",
       [](Scenario& s, const std::string& k, const std::string& v) {
         s.spectrum.start_fs = parse_double(k, v);
       }},
      {"spectrum.stop_fs",
       [](Scenario& s, const std::string& k, const std::string& v) {
         s.spectrum.stop_fs = parse_double(k, v);
       }},
      {"spectrum.source",
       [](Scenario& s, const std::string& k, const std::string& v) {
         if (v != "ensemble" && v != "two_level")
           throw ConfigError(k + ": expected 'ensemble' or 'two_level', got '" +
                             v + "'");
         s.spectrum.source = v;
       }},
  };
  return table;
}

bool ignorable_key(const std::string& key) {
  return key.rfind("diagnostics.", 0) == 0 || key.rfind("meta.", 0) == 0;
}

void apply_line(Scenario& sc, const std::string& key, const std::string& value,
                std::set<std::string>* seen) {
  if (ignorable_key(key)) return;
  auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown key: " + key);
  it->second(sc, key, value);
  if (seen) seen->insert(key);
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

void validate(const Scenario& sc) {
  const auto& m = sc.molecule;
  require(!m.name.empty(), "molecule.name: empty");
  require(m.rotational_constant_cm1 > 0,
          "molecule.rotational_constant_cm1: must be > 0");
  require(m.delta_alpha_a3 >= 0, "molecule.delta_alpha_A3: must be >= 0");
  require(m.spin_weight_even >= 1 && m.spin_weight_odd >= 1,
          "molecule.spin_weight_*: must be >= 1");

  const auto& p = sc.pulse;
  require(p.wavelength_nm > 0, "pulse.wavelength_nm: must be > 0");
  require(p.fwhm_fs > 0, "pulse.fwhm_fs: must be > 0");
  require(p.peak_intensity_w_cm2 >= 0,
          "pulse.peak_intensity_W_cm2: must be >= 0");
  require(std::abs(p.polarization_angle_rad) <= pi,
          "pulse.polarization_angle_rad: must lie in [-pi, pi]");
  require(p.envelope_cutoff_fwhm > 0, "pulse.envelope_cutoff_fwhm: must be > 0");

  const auto& r = sc.run;
  require(r.temperature_k > 0, "run.temperature_K: must be > 0");
  require(r.j_init_cut >= 0, "run.j_init_cut: must be >= 0");
  require(r.j_max >= r.j_init_cut + 8,
          "run.j_max: need at least j_init_cut + 8 for pulse headroom");
  require(r.theta_points >= 64 && r.theta_points % 2 == 0,
          "run.theta_points: must be even and >= 64");
  require(r.smoothing_window >= 1 && r.smoothing_window % 2 == 1,
          "run.smoothing_window: must be odd and >= 1");
  require(r.ode_steps_per_fwhm >= 16, "run.ode_steps_per_fwhm: must be >= 16");
  require(r.detector_half_angle_rad > 0 && r.detector_half_angle_rad <= pi,
          "run.detector_half_angle_rad: must lie in (0, pi]");
  require(r.time.step_fs > 0, "run.time_step_fs: must be > 0");
  require(r.time.stop_fs > r.time.start_fs,
          "run.time_stop_fs: must exceed run.time_start_fs");
  require(r.tol.norm_drift > 0 && r.tol.truncation_occupancy > 0 &&
              r.tol.population_tail > 0,
          "run tolerances: must be > 0");

  require(sc.spectrum.stop_fs > sc.spectrum.start_fs,
          "spectrum.stop_fs: must exceed spectrum.start_fs");
}

Scenario load_config(std::string_view text) {
  Scenario sc;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string body = trim(line);
    if (body.empty()) continue;
    std::size_t eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key = value");
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    apply_line(sc, key, value, &seen);
  }

  require(seen.count("molecule.name") == 1, "molecule.name: required");
  if (sc.molecule.name != "D2") {
    for (const char* k :
         {"molecule.rotational_constant_cm1", "molecule.delta_alpha_A3",
          "molecule.spin_weight_even", "molecule.spin_weight_odd"})
      require(seen.count(k) == 1,
              std::string(k) + ": required for molecules other than D2");
  }
  validate(sc);
  return sc;
}

void apply_override(Scenario& sc, std::string_view assignment) {
  std::string body = trim(assignment);
  std::size_t eq = body.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override '" + body + "': expected key=value");
  std::string key = trim(body.substr(0, eq));
  std::string value = trim(body.substr(eq + 1));
  if (key.empty()) throw ConfigError("override: empty key");
  apply_line(sc, key, value, nullptr);
}

std::string serialize_config(const Scenario& sc) {
  std::ostringstream out;
  auto d = [&](const char* key, double v) {
    out << key << " = " << format_exact(v) << "\n";
  };
  auto i = [&](const char* key, int v) { out << key << " = " << v << "\n"; };

  out << "molecule.name = " << sc.molecule.name << "\n";
  d("molecule.rotational_constant_cm1", sc.molecule.rotational_constant_cm1);
  d("molecule.delta_alpha_A3", sc.molecule.delta_alpha_a3);
  i("molecule.spin_weight_even", sc.molecule.spin_weight_even);
  i("molecule.spin_weight_odd", sc.molecule.spin_weight_odd);
  d("pulse.wavelength_nm", sc.pulse.wavelength_nm);
  d("pulse.fwhm_fs", sc.pulse.fwhm_fs);
  d("pulse.peak_intensity_W_cm2", sc.pulse.peak_intensity_w_cm2);
  d("pulse.polarization_angle_rad", sc.pulse.polarization_angle_rad);
  d("pulse.envelope_cutoff_fwhm", sc.pulse.envelope_cutoff_fwhm);
  d("run.temperature_K", sc.run.temperature_k);
  i("run.j_init_cut", sc.run.j_init_cut);
  i("run.j_max", sc.run.j_max);
  i("run.theta_points", sc.run.theta_points);
  i("run.smoothing_window", sc.run.smoothing_window);
  i("run.ode_steps_per_fwhm", sc.run.ode_steps_per_fwhm);
  d("run.detector_half_angle_rad", sc.run.detector_half_angle_rad);
  d("run.time_start_fs", sc.run.time.start_fs);
  d("run.time_stop_fs", sc.run.time.stop_fs);
  d("run.time_step_fs", sc.run.time.step_fs);
  d("run.norm_tolerance", sc.run.tol.norm_drift);
  d("run.truncation_tolerance", sc.run.tol.truncation_occupancy);
  d("run.tail_tolerance", sc.run.tol.population_tail);
  d("spectrum.start_fs", sc.spectrum.start_fs);
  d("spectrum.stop_fs", sc.spectrum.stop_fs);
  out << "spectrum.source = " << sc.spectrum.source << "\n";
  return out.str();
}

}  // namespace rotsim

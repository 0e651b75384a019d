#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rotsim/analysis.hpp"
#include "rotsim/ensemble.hpp"
#include "rotsim/io.hpp"
#include "rotsim/kernels.hpp"
#include "rotsim/observables.hpp"
#include "rotsim/threading.hpp"
#include "rotsim/version.hpp"

namespace {

using namespace rotsim;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output;
};

Scenario load_scenario(const CommonArgs& args) {
  std::ifstream in(args.config_path, std::ios::binary);
  if (!in) throw IoError("cannot read config: " + args.config_path);
  std::stringstream buf;
  buf << in.rdbuf();
  Scenario sc = load_config(buf.str());
  for (const auto& ov : args.overrides) apply_override(sc, ov);
  validate(sc);
  return sc;
}

std::string basename_of(const std::string& path) {
  const std::size_t slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

struct Run {
  Scenario sc;
  RunManifest manifest;
  std::chrono::steady_clock::time_point started;

  explicit Run(const CommonArgs& args, const std::string& command)
      : sc(load_scenario(args)), started(std::chrono::steady_clock::now()) {
    manifest.scenario = sc;
    manifest.command = command;
    manifest.tool_version = version;
    manifest.diagnostics["simd_backend"] =
        kernels::backend_name(kernels::active_backend());
    manifest.diagnostics["threads"] = std::to_string(thread_count());
  }

  void finish(const std::string& csv, const std::string& out_path) {
    const auto elapsed = std::chrono::steady_clock::now() - started;
    manifest.diagnostics["wall_time_ms"] = std::to_string(
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed)
            .count());
    const std::string mpath = manifest_path_for(out_path);
    write_text_file(out_path,
                    "# manifest: " + basename_of(mpath) + "\n" + csv);
    write_text_file(mpath, manifest.serialize());
  }
};

PopulationTable populations_for(const Scenario& sc) {
  return boltzmann_populations(sc.molecule, sc.run.temperature_k,
                               sc.run.j_init_cut, sc.run.tol.population_tail);
}

ThermalEnsemble ensemble_for(const Scenario& sc, RunManifest& manifest) {
  const PopulationTable pops = populations_for(sc);
  const ThermalEnsemble ens = build_ensemble(
      pops, PulseKernel::from_spec(sc.pulse), sc.molecule, sc.run);
  manifest.diagnostics["population_tail_mass"] =
      format_exact(ens.diag.population_tail);
  manifest.diagnostics["max_norm_drift"] =
      format_exact(ens.diag.max_norm_drift);
  manifest.diagnostics["max_truncation_occupancy"] =
      format_exact(ens.diag.max_top_occupancy);
  return ens;
}

int cmd_populations(const CommonArgs& args) {
  Run run(args, "populations");
  const PopulationTable pops = populations_for(run.sc);
  run.manifest.diagnostics["population_tail_mass"] =
      format_exact(pops.tail_mass);
  std::string csv = "J,population,spin_weight,per_M_weight\n";
  for (int j = 0; j <= pops.j_cut; ++j) {
    csv += std::to_string(j) + "," +
           format_float(pops.population[std::size_t(j)]) + "," +
           std::to_string(pops.spin_weight[std::size_t(j)]) + "," +
           format_float(pops.per_m_weight(j)) + "\n";
  }
  run.finish(csv, args.output);
  return 0;
}

int cmd_trace(const CommonArgs& args) {
  Run run(args, "trace");
  const ThermalEnsemble ens = ensemble_for(run.sc, run.manifest);
  const std::vector<double> times = run.sc.run.time.points();
  const AlignmentTrace raw = alignment_trace(ens, run.sc.molecule, times);
  const AlignmentTrace smoothed =
      smooth_trace(raw, run.sc.run.smoothing_window);
  std::string csv = "t_fs,cos2_raw,cos2_smoothed\n";
  for (std::size_t i = 0; i < times.size(); ++i)
    csv += format_float(times[i]) + "," + format_float(raw.values[i]) + "," +
           format_float(smoothed.values[i]) + "\n";
  run.finish(csv, args.output);
  return 0;
}

int cmd_carpet(const CommonArgs& args) {
  Run run(args, "carpet");
  const ThermalEnsemble ens = ensemble_for(run.sc, run.manifest);
  const std::vector<double> times = run.sc.run.time.points();
  const std::vector<double> thetas = theta_grid(run.sc.run.theta_points);
  const QuantumCarpet carpet =
      quantum_carpet(ens, run.sc.molecule, times, thetas);
  std::vector<std::string> theta_text(thetas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i)
    theta_text[i] = format_float(thetas[i]);
  std::string csv = "t_fs,theta_rad,density\n";
  for (std::size_t it = 0; it < times.size(); ++it) {
    const std::string t_text = format_float(times[it]);
    for (std::size_t ith = 0; ith < thetas.size(); ++ith)
      csv += t_text + "," + theta_text[ith] + "," +
             format_float(carpet.at(it, ith)) + "\n";
  }
  run.finish(csv, args.output);
  return 0;
}

AlignmentTrace spectrum_source_trace(const Scenario& sc,
                                     RunManifest& manifest) {
  std::vector<double> times;
  for (double t = sc.spectrum.start_fs; t <= sc.spectrum.stop_fs + 1e-9;
       t += sc.run.time.step_fs)
    times.push_back(t);
  if (sc.spectrum.source == "two_level") {
    // equal superposition of J=0 and J=2 (M=0): a single beat line
    ThermalEnsemble ens;
    EnsembleMember mem;
    mem.j_init = 0;
    mem.m_init = 0;
    mem.weight = 1.0;
    mem.state = initial_state(0, 0, 2);
    mem.state.re[0] = mem.state.re[1] = std::sqrt(0.5);
    ens.members.push_back(mem);
    ens.snapshot_time_fs = 0.0;
    ens.pulse_start_fs = -1e300;
    return alignment_trace(ens, sc.molecule, times);
  }
  const ThermalEnsemble ens = ensemble_for(sc, manifest);
  return alignment_trace(ens, sc.molecule, times);
}

int cmd_spectrum(const CommonArgs& args) {
  Run run(args, "spectrum");
  const AlignmentTrace trace = spectrum_source_trace(run.sc, run.manifest);
  BeatSpectrum sp = beat_spectrum(trace, run.sc.spectrum.start_fs,
                                  run.sc.spectrum.stop_fs, run.sc.molecule);
  assign_beats(sp, run.sc.molecule);
  run.manifest.diagnostics["resolution_warning"] =
      sp.resolution_warning ? "true" : "false";
  if (sp.resolution_warning)
    std::cerr << "warning: window shorter than two revivals; "
                 "peaks may be badly resolved\n";
  std::string csv = "freq_THz,amplitude\n";
  for (std::size_t k = 0; k < sp.freq_thz.size(); ++k)
    csv += format_float(sp.freq_thz[k]) + "," + format_float(sp.amplitude[k]) +
           "\n";
  csv += "#peaks\n#freq_THz,amplitude,J_lower,label\n";
  for (const auto& peak : sp.peaks) {
    const std::string label =
        peak.assigned ? std::to_string(peak.j_lower) + "<->" +
                            std::to_string(peak.j_lower + 2)
                      : "unassigned";
    csv += "#" + format_float(peak.freq_thz) + "," +
           format_float(peak.amplitude) + "," + std::to_string(peak.j_lower) +
           "," + label + "\n";
  }
  run.finish(csv, args.output);
  return 0;
}

int cmd_revivals(const CommonArgs& args, int count) {
  const Scenario sc = load_scenario(args);
  std::string out = "fraction,t_fs\n";
  for (const auto& rt : revival_times(sc.molecule, count))
    out += rt.label + "," + format_float(rt.time_fs) + "\n";
  std::cout << out;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thermal rotational-wavepacket alignment simulator"};
  app.require_subcommand(1);

  CommonArgs args;
  int revival_count = 1;

  auto add_common = [&](CLI::App* sub, bool with_output) {
    sub->add_option("config", args.config_path, "configuration file")
        ->required();
    sub->add_option("--set", args.overrides,
                    "override a config entry (section.key=value)");
    if (with_output)
      sub->add_option("-o,--output", args.output,
                      "output CSV path (default: <command>.csv)");
  };

  CLI::App* populations =
      app.add_subcommand("populations", "thermal initial populations");
  add_common(populations, true);
  CLI::App* trace =
      app.add_subcommand("trace", "alignment trace <cos^2 theta>(t)");
  add_common(trace, true);
  CLI::App* carpet =
      app.add_subcommand("carpet", "angular density over time and theta");
  add_common(carpet, true);
  CLI::App* spectrum =
      app.add_subcommand("spectrum", "Fourier beat spectrum of the trace");
  add_common(spectrum, true);
  CLI::App* revivals =
      app.add_subcommand("revivals", "quarter-revival times to stdout");
  add_common(revivals, false);
  revivals->add_option("--count", revival_count,
                       "number of full revival periods");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  auto output_or = [&](const char* fallback) {
    return args.output.empty() ? std::string(fallback) : args.output;
  };

  try {
    if (app.got_subcommand(populations)) {
      args.output = output_or("populations.csv");
      return cmd_populations(args);
    }
    if (app.got_subcommand(trace)) {
      args.output = output_or("trace.csv");
      return cmd_trace(args);
    }
    if (app.got_subcommand(carpet)) {
      args.output = output_or("carpet.csv");
      return cmd_carpet(args);
    }
    if (app.got_subcommand(spectrum)) {
      args.output = output_or("spectrum.csv");
      return cmd_spectrum(args);
    }
    if (app.got_subcommand(revivals)) return cmd_revivals(args, revival_count);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

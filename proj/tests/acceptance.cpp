// End-to-end acceptance checks. Each criterion prints a single PASS/FAIL
// line with the measured numbers; the process exits nonzero when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "quadrature_oracle.hpp"
#include "rotsim/analysis.hpp"
#include "rotsim/constants.hpp"
#include "rotsim/ensemble.hpp"
#include "rotsim/observables.hpp"

using namespace rotsim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ROTSIM_CLI_PATH) + " " + args +
                          " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return rc < 0 ? rc : WEXITSTATUS(rc);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// shared default-scenario ensemble, built once
const Scenario& default_scenario() {
  static const Scenario sc = load_config("molecule.name = D2\n");
  return sc;
}

const ThermalEnsemble& default_ensemble() {
  static const ThermalEnsemble ens = [] {
    const Scenario& sc = default_scenario();
    const PopulationTable pops =
        boltzmann_populations(sc.molecule, sc.run.temperature_k,
                              sc.run.j_init_cut, sc.run.tol.population_tail);
    return build_ensemble(pops, PulseKernel::from_spec(sc.pulse), sc.molecule,
                          sc.run);
  }();
  return ens;
}

const AlignmentTrace& default_trace() {  // 0..800 fs, 1 fs
  static const AlignmentTrace tr = alignment_trace(
      default_ensemble(), default_scenario().molecule,
      default_scenario().run.time.points());
  return tr;
}

const QuantumCarpet& default_carpet() {
  static const QuantumCarpet carpet = quantum_carpet(
      default_ensemble(), default_scenario().molecule,
      default_scenario().run.time.points(),
      theta_grid(default_scenario().run.theta_points));
  return carpet;
}

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "rotsim_acceptance";
    fs::create_directories(d);
    const fs::path cfg = d / "d2.cfg";
    std::ofstream(cfg) << "molecule.name = D2\n";
    return d;
  }();
  return dir;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// ---- criterion 1: population table through the CLI ------------------------

Outcome criterion_populations() {
  const fs::path out = work_dir() / "populations.csv";
  const double t0 = now_seconds();
  const int rc = run_cli("populations " + (work_dir() / "d2.cfg").string() +
                         " -o " + out.string());
  const double dt = now_seconds() - t0;
  if (rc != 0) return {false, "cli exited with " + std::to_string(rc)};

  std::ifstream in(out);
  std::string line;
  std::getline(in, line);  // manifest reference
  std::getline(in, line);  // header
  std::vector<double> pops;
  while (std::getline(in, line)) {
    const std::size_t c1 = line.find(','), c2 = line.find(',', c1 + 1);
    pops.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
  }
  const double paper[] = {0.185, 0.208, 0.386, 0.112, 0.0899, 0.0128,
                          0.00522};
  if (pops.size() < 7) return {false, "expected at least 7 rows"};
  double dev = 0.0;
  for (int j = 0; j < 7; ++j)
    dev = std::max(dev, std::abs(pops[std::size_t(j)] - paper[j]));
  const bool pass = dev <= 0.01 && dt < 1.0;
  return {pass, "max deviation " + fmt(dev) + " (tol 0.01), runtime " +
                    fmt(dt) + " s (limit 1)"};
}

// ---- criterion 2: beat frequencies ----------------------------------------

Outcome criterion_beats() {
  const double t0 = now_seconds();
  const Scenario& sc = default_scenario();
  std::vector<double> times;
  for (double t = 200.0; t <= 3000.0 + 1e-9; t += 1.0) times.push_back(t);
  const AlignmentTrace tr =
      alignment_trace(default_ensemble(), sc.molecule, times);
  BeatSpectrum sp = beat_spectrum(tr, 200.0, 3000.0, sc.molecule);
  assign_beats(sp, sc.molecule);

  const double expected[] = {5.5, 9.1, 12.8};
  const int expected_j[] = {0, 1, 2};
  std::string detail;
  bool pass = true;
  for (int i = 0; i < 3; ++i) {
    bool found = false;
    for (const auto& p : sp.peaks) {
      if (p.assigned && p.j_lower == expected_j[i] &&
          std::abs(p.freq_thz - expected[i]) <= 0.3) {
        detail += (i ? ", " : "") + fmt(p.freq_thz) + " THz (" +
                  std::to_string(p.j_lower) + "<->" +
                  std::to_string(p.j_lower + 2) + ")";
        found = true;
        break;
      }
    }
    pass = pass && found;
    if (!found) detail += (i ? ", " : "") + fmt(expected[i]) + " THz MISSING";
  }
  double even_sum = 0.0, odd_sum = 0.0;
  for (const auto& p : sp.peaks)
    if (p.assigned) (p.j_lower % 2 == 0 ? even_sum : odd_sum) += p.amplitude;
  pass = pass && even_sum > odd_sum;
  const double dt = now_seconds() - t0;
  pass = pass && dt < 120.0;
  detail += "; even/odd amplitude " + fmt(even_sum) + "/" + fmt(odd_sum) +
            ", runtime " + fmt(dt) + " s (limit 120)";
  return {pass, detail};
}

// ---- criterion 3: revival timing ------------------------------------------

Outcome criterion_revivals() {
  const Scenario& sc = default_scenario();
  const AlignmentTrace& tr = default_trace();
  const TraceExtrema ex = find_extrema(tr, 0.0, 800.0);
  const bool max_ok = ex.t_max_fs >= 250.0 && ex.t_max_fs <= 290.0;

  // periodicity at one revival, evaluated on off-grid shifted times
  const double t_rev = revival_period_fs(sc.molecule.rotational_constant_cm1);
  std::vector<double> base, shifted;
  for (double t = 100.0; t <= 240.0; t += 0.7) {
    base.push_back(t);
    shifted.push_back(t + t_rev);
  }
  const AlignmentTrace a =
      alignment_trace(default_ensemble(), sc.molecule, base);
  const AlignmentTrace b =
      alignment_trace(default_ensemble(), sc.molecule, shifted);
  double rel = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i)
    rel = std::max(rel,
                   std::abs(a.values[i] - b.values[i]) / std::abs(a.values[i]));
  const bool periodic_ok = rel <= 1e-9;

  const bool quoted_ok = std::abs(t_rev - 558.0) / 558.0 <= 0.025 &&
                         std::abs(t_rev - 560.0) / 560.0 <= 0.025;
  const bool pass = max_ok && periodic_ok && quoted_ok;
  return {pass, "trace max at " + fmt(ex.t_max_fs) +
                    " fs (window 250-290), periodicity residual " + fmt(rel) +
                    " (tol 1e-9), T_rev " + fmt(t_rev) +
                    " fs vs quoted 558/560 (tol 2.5%)"};
}

// ---- criterion 4: quantum carpet ------------------------------------------

Outcome criterion_carpet() {
  const QuantumCarpet& carpet = default_carpet();
  const int n = int(carpet.thetas_rad.size());
  const std::size_t nt = carpet.times_fs.size();

  double worst_norm = 0.0;
  for (std::size_t it = 0; it < nt; ++it)
    worst_norm = std::max(worst_norm,
                          std::abs(carpet_column_integral(carpet, it) - 1.0));
  const bool norm_ok = worst_norm <= 1e-6;

  double sym = 0.0;
  for (std::size_t it = 0; it < nt; it += 50) {
    for (int i = n / 2; i < n; ++i) {
      sym = std::max(sym, std::abs(carpet.at(it, std::size_t(i)) -
                                   carpet.at(it, std::size_t(n - 1 - i))));
      const int mir = 3 * n / 2 - 1 - i;
      if (mir >= n / 2)
        sym = std::max(sym, std::abs(carpet.at(it, std::size_t(i)) -
                                     carpet.at(it, std::size_t(mir))));
    }
  }
  const bool sym_ok = sym == 0.0;

  // contrast rho(0)/rho(pi/2); the pi/2 pair straddles the axis with equal
  // values by symmetry
  const int i0 = n / 2;
  const int i90 = 3 * n / 4 - 1;
  std::size_t best = 0;
  double best_contrast = -1.0;
  for (std::size_t it = 0; it < nt; ++it) {
    const double c = carpet.at(it, std::size_t(i0)) /
                     carpet.at(it, std::size_t(i90));
    if (c > best_contrast) {
      best_contrast = c;
      best = it;
    }
  }
  const double t_best = carpet.times_fs[best];
  const bool contrast_ok = t_best >= 250.0 && t_best <= 280.0;

  const bool pass = norm_ok && sym_ok && contrast_ok;
  return {pass, "max |column integral - 1| " + fmt(worst_norm) +
                    " (tol 1e-6), mirror residual " + fmt(sym) +
                    " (exact), peak contrast " + fmt(best_contrast) + " at " +
                    fmt(t_best) + " fs (window 250-280)"};
}

// ---- criterion 5: detector-signal phase opposition ------------------------

Outcome criterion_detector() {
  const Scenario& sc = default_scenario();
  const QuantumCarpet& carpet = default_carpet();
  const double half = sc.run.detector_half_angle_rad;
  const AlignmentTrace s0 = detector_signal(carpet, 0.0, half);
  const AlignmentTrace s90 = detector_signal(carpet, pi / 2.0, half);
  const AlignmentTrace& tr = default_trace();

  // window around the half revival
  std::vector<double> w0, w90, wt;
  double t_min90 = 0.0, v_min90 = 1e300, t_maxtr = 0.0, v_maxtr = -1e300;
  for (std::size_t i = 0; i < tr.times_fs.size(); ++i) {
    const double t = tr.times_fs[i];
    if (t < 230.0 || t > 330.0) continue;
    w0.push_back(s0.values[i]);
    w90.push_back(s90.values[i]);
    wt.push_back(tr.values[i]);
    if (s90.values[i] < v_min90) {
      v_min90 = s90.values[i];
      t_min90 = t;
    }
    if (tr.values[i] > v_maxtr) {
      v_maxtr = tr.values[i];
      t_maxtr = t;
    }
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / double(v.size());
  };
  const double m0 = mean(w0), m90 = mean(w90);
  double cov = 0.0, var0 = 0.0, var90 = 0.0;
  for (std::size_t i = 0; i < w0.size(); ++i) {
    cov += (w0[i] - m0) * (w90[i] - m90);
    var0 += (w0[i] - m0) * (w0[i] - m0);
    var90 += (w90[i] - m90) * (w90[i] - m90);
  }
  const double pearson = cov / std::sqrt(var0 * var90);

  const bool phase_ok = std::abs(t_min90 - t_maxtr) <= 5.0;
  const bool corr_ok = pearson < 0.0;
  return {phase_ok && corr_ok,
          "signal minimum at " + fmt(t_min90) + " fs vs trace maximum at " +
              fmt(t_maxtr) + " fs (tol 5 fs), Pearson " + fmt(pearson) +
              " (< 0)"};
}

// ---- criterion 6: oracle suites -------------------------------------------

Outcome criterion_oracles() {
  // closed forms vs quadrature
  double elem_dev = 0.0;
  for (int j = 0; j <= 20; ++j) {
    for (int m = -j; m <= j; ++m) {
      elem_dev = std::max(elem_dev, std::abs(cos2_diag(j, m) -
                                             oracle::cos2_element(j, j, m,
                                                                  48)));
      elem_dev = std::max(elem_dev,
                          std::abs(cos2_couple(j, m) -
                                   oracle::cos2_element(j, j + 2, m, 48)));
    }
  }
  const bool elems_ok = elem_dev <= 1e-10;

  // expectation against direct angular quadrature on random states
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double expec_dev = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int m = int(rng() % 5) - 2;
    const int j_min = std::abs(m) + int(rng() % 2);
    const int nc = 2 + int(rng() % 7);
    RotorState st;
    st.m = m;
    st.j_min = j_min;
    st.re.resize(std::size_t(nc));
    st.im.resize(std::size_t(nc));
    double norm = 0.0;
    for (int k = 0; k < nc; ++k) {
      st.re[std::size_t(k)] = u(rng);
      st.im[std::size_t(k)] = u(rng);
      norm += st.re[std::size_t(k)] * st.re[std::size_t(k)] +
              st.im[std::size_t(k)] * st.im[std::size_t(k)];
    }
    norm = std::sqrt(norm);
    for (int k = 0; k < nc; ++k) {
      st.re[std::size_t(k)] /= norm;
      st.im[std::size_t(k)] /= norm;
    }
    const Cos2Band band = cos2_band(m, st.j_top());
    const double closed = expectation_cos2(st, band);
    const double direct = oracle::integrate(
        [&](double x) {
          double fr = 0.0, fi = 0.0;
          for (int k = 0; k < nc; ++k) {
            const double p =
                oracle::normalized_legendre(j_min + 2 * k, m, x);
            fr += st.re[std::size_t(k)] * p;
            fi += st.im[std::size_t(k)] * p;
          }
          return (fr * fr + fi * fi) * x * x;
        },
        64);
    expec_dev = std::max(expec_dev, std::abs(closed - direct));
  }
  const bool expec_ok = expec_dev <= 1e-8;

  // norm drift and convergence order
  const MoleculeSpec& mol = default_scenario().molecule;
  const PulseKernel pulse = PulseKernel::from_spec(default_scenario().pulse);
  auto p2_at = [&](int steps) {
    PropagationSettings s;
    s.steps_per_fwhm = steps;
    s.record_target = 0;
    const PropagationResult r =
        propagate_pulse(initial_state(0, 0, 20), pulse, mol, s);
    return std::pair<double, double>(
        r.state.re[1] * r.state.re[1] + r.state.im[1] * r.state.im[1],
        r.norm_drift);
  };
  const auto [ref, drift_default] = p2_at(1200);
  const double e150 = std::abs(p2_at(150).first - p2_at(4800).first);
  const double e600 = std::abs(p2_at(600).first - p2_at(4800).first);
  const double order = std::log2(e150 / e600) / 2.0;
  const bool drift_ok = drift_default <= 1e-8;
  const bool order_ok = order >= 4.0;

  // weak-field quadratic scaling
  auto transferred = [&](double i_w_cm2) {
    PulseSpec ps;
    ps.peak_intensity_w_cm2 = i_w_cm2;
    PropagationSettings s;
    s.steps_per_fwhm = 600;
    s.record_target = 0;
    const PropagationResult r = propagate_pulse(
        initial_state(0, 0, 14), PulseKernel::from_spec(ps), mol, s);
    return 1.0 - (r.state.re[0] * r.state.re[0] +
                  r.state.im[0] * r.state.im[0]);
  };
  const double slope =
      std::log(transferred(4e11) / transferred(1e11)) / std::log(4.0);
  const bool slope_ok = std::abs(slope - 2.0) <= 0.1;

  const bool pass = elems_ok && expec_ok && drift_ok && order_ok && slope_ok;
  return {pass, "element dev " + fmt(elem_dev) + " (tol 1e-10), expectation " +
                    "dev " + fmt(expec_dev) + " (tol 1e-8), norm drift " +
                    fmt(drift_default) + " (tol 1e-8), order " + fmt(order) +
                    " (>= 4), intensity slope " + fmt(slope) + " (2 +- 0.1)"};
}

// ---- criterion 7: null cases and determinism -------------------------------

Outcome criterion_null() {
  const Scenario& sc = default_scenario();
  PulseSpec off = sc.pulse;
  off.peak_intensity_w_cm2 = 0.0;
  const PopulationTable pops =
      boltzmann_populations(sc.molecule, sc.run.temperature_k,
                            sc.run.j_init_cut, sc.run.tol.population_tail);
  const ThermalEnsemble ens =
      build_ensemble(pops, PulseKernel::from_spec(off), sc.molecule, sc.run);
  const AlignmentTrace tr =
      alignment_trace(ens, sc.molecule, sc.run.time.points());
  double trace_dev = 0.0;
  for (double v : tr.values)
    trace_dev = std::max(trace_dev, std::abs(v - 1.0 / 3.0));

  const std::vector<double> carpet_times = {0.0, 120.0, 547.0};
  const QuantumCarpet carpet = quantum_carpet(
      ens, sc.molecule, carpet_times, theta_grid(sc.run.theta_points));
  double carpet_dev = 0.0;
  for (double v : carpet.density)
    carpet_dev = std::max(carpet_dev, std::abs(v - 1.0 / (4.0 * pi)));
  const bool null_ok = trace_dev <= 1e-10 && carpet_dev <= 1e-10;

  // rerun determinism: the identical command must reproduce the bytes
  const fs::path out = work_dir() / "rerun.csv";
  const std::string command = "trace " + (work_dir() / "d2.cfg").string() +
                              " --set run.time_stop_fs=150 -o " + out.string();
  bool bytes_ok = run_cli(command) == 0;
  const std::string first = slurp(out);
  bytes_ok = bytes_ok && !first.empty() && run_cli(command) == 0 &&
             slurp(out) == first;

  const bool pass = null_ok && bytes_ok;
  return {pass, "trace dev " + fmt(trace_dev) + ", carpet dev " +
                    fmt(carpet_dev) + " (tol 1e-10), reruns " +
                    (bytes_ok ? "byte-identical" : "DIFFER")};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"1 populations vs reference table", criterion_populations},
      {"2 beat frequencies and parity weighting", criterion_beats},
      {"3 revival timing and periodicity", criterion_revivals},
      {"4 quantum carpet structure", criterion_carpet},
      {"5 detector signal phase opposition", criterion_detector},
      {"6 oracle agreement and convergence", criterion_oracles},
      {"7 null cases and deterministic reruns", criterion_null},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome oc;
    try {
      oc = fn();
    } catch (const std::exception& e) {
      oc = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (oc.pass ? "[PASS] " : "[FAIL] ") << name << ": "
              << oc.detail << "\n";
    if (!oc.pass) ++failures;
  }
  std::cout << (failures == 0 ? "acceptance: all criteria passed"
                              : "acceptance: " + std::to_string(failures) +
                                    " criterion(s) failed")
            << "\n";
  return failures == 0 ? 0 : 1;
}

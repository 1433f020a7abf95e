// Command-line front end: experiment sweeps, single-instance recovery,
// empirical isometry checks, adversarial pair construction, and the
// property self-test. Exit codes: 0 success, 1 configuration error,
// 2 I/O error, 3 internal solver fault.

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pocs/diagnostics.hpp"
#include "pocs/harness.hpp"
#include "pocs/linearization.hpp"
#include "pocs/measurement.hpp"
#include "pocs/properties.hpp"
#include "pocs/recovery.hpp"
#include "pocs/rng.hpp"
#include "pocs/solver.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitSolver = 3;

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw pocs::IoError("cannot open for writing: " + path);
  out << text;
  if (!out.flush()) throw pocs::IoError("write failed: " + path);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pocs::IoError("cannot open: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid JSON in ") + path + ": " + e.what());
  }
}

// ---------------------------------------------------------------- experiment

struct ExperimentFlags {
  std::string config_path;
  std::optional<std::int64_t> n, m, s, trials, threads;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> channel, epsilon_mode, estimator, signal, out, format;
  std::optional<double> power_q;
  std::vector<double> tau0_grid, zeta0m_grid;
  bool fixed_matrix = false;
};

int run_experiment_cmd(const ExperimentFlags& f) {
  pocs::ExperimentConfig cfg;
  if (!f.config_path.empty()) cfg = pocs::load_config(f.config_path);

  // Flags override the config file field by field.
  json overrides = json::object();
  if (f.n) overrides["n"] = *f.n;
  if (f.m) overrides["m"] = *f.m;
  if (f.s) overrides["s"] = *f.s;
  if (f.trials) overrides["trials"] = *f.trials;
  if (f.seed) overrides["base_seed"] = *f.seed;
  if (f.channel) overrides["channel"] = *f.channel;
  if (!f.tau0_grid.empty()) overrides["tau0_grid"] = f.tau0_grid;
  if (!f.zeta0m_grid.empty()) overrides["zeta0m_grid"] = f.zeta0m_grid;
  if (f.epsilon_mode) overrides["epsilon_mode"] = *f.epsilon_mode;
  if (f.estimator) overrides["estimator"] = *f.estimator;
  if (f.signal) overrides["signal"] = *f.signal;
  if (f.power_q) overrides["power_q"] = *f.power_q;
  if (f.threads) overrides["threads"] = *f.threads;
  if (f.out) overrides["out"] = *f.out;
  if (f.format) overrides["format"] = *f.format;
  if (!overrides.empty()) {
    json merged = json::parse(pocs::config_to_json_text(cfg));
    for (const auto& item : overrides.items()) merged[item.key()] = item.value();
    cfg = pocs::config_from_json_text(merged.dump());
  }
  if (f.fixed_matrix) cfg.fixed_matrix = true;
  if (cfg.out.empty())
    throw std::invalid_argument("experiment: an output path is required (--out or config out)");

  const std::vector<pocs::TrialRecord> records = pocs::run_experiment(cfg);
  const pocs::ExperimentSummary summary = pocs::summarize(records);
  pocs::emit(records, summary, cfg, cfg.out, cfg.format);

  std::cout << "wrote " << records.size() << " records to " << cfg.out << "\n";
  for (const pocs::GridSummary& g : summary.per_point)
    std::cout << "  grid " << g.grid_param << ": mean " << g.mean << " median " << g.median
              << " over " << g.count << " trials\n";
  if (summary.slope) std::cout << "  log-log slope " << *summary.slope << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------- recover

int run_recover_cmd(const std::string& input_path, const std::string& out_path,
                    double tol) {
  const json j = read_json_file(input_path);
  if (!j.is_object()) throw std::invalid_argument("recover: input must be a JSON object");
  const std::set<std::string> known{"phi_re", "phi_im", "z_re", "z_im", "s", "epsilon"};
  for (const auto& item : j.items())
    if (known.count(item.key()) == 0)
      throw std::invalid_argument("recover: unknown key \"" + item.key() + "\"");
  for (const char* key : {"phi_re", "phi_im", "z_re", "z_im", "s"})
    if (!j.contains(key))
      throw std::invalid_argument(std::string("recover: missing key \"") + key + "\"");

  const auto& re = j["phi_re"];
  const auto& im = j["phi_im"];
  if (!re.is_array() || !im.is_array() || re.empty() || re.size() != im.size())
    throw std::invalid_argument("recover: phi_re / phi_im must be equal-size row arrays");
  const pocs::Index m = static_cast<pocs::Index>(re.size());
  const pocs::Index n = static_cast<pocs::Index>(re[0].size());

  pocs::SensingMatrix phi;
  phi.phi.resize(m, n);
  for (pocs::Index i = 0; i < m; ++i) {
    if (static_cast<pocs::Index>(re[i].size()) != n ||
        static_cast<pocs::Index>(im[i].size()) != n)
      throw std::invalid_argument("recover: ragged phi rows");
    for (pocs::Index k = 0; k < n; ++k)
      phi.phi(i, k) = pocs::Complex(re[i][k].get<double>(), im[i][k].get<double>());
  }
  if (static_cast<pocs::Index>(j["z_re"].size()) != m ||
      static_cast<pocs::Index>(j["z_im"].size()) != m)
    throw std::invalid_argument("recover: z_re / z_im must have one entry per row of phi");

  pocs::ObservedPhases observed;
  observed.values.resize(m);
  for (pocs::Index i = 0; i < m; ++i)
    observed.values[i] =
        pocs::Complex(j["z_re"][i].get<double>(), j["z_im"][i].get<double>());

  const int s = j["s"].get<int>();
  const double epsilon = j.contains("epsilon") ? j["epsilon"].get<double>() : 0.0;
  if (epsilon < 0.0) throw std::invalid_argument("recover: epsilon must be nonnegative");

  const pocs::LinearizedSystem sys = pocs::build_linearized(observed.values, phi, epsilon);
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(sys.rows());
  e1[0] = 1.0;
  pocs::SolverOptions opts;
  opts.tol_primal = tol;
  opts.tol_dual = tol;
  const pocs::SolveReport report = pocs::qcbp(sys.A, e1, epsilon, opts);

  Eigen::VectorXd x_sharp = Eigen::VectorXd::Zero(report.solution.size());
  const double nrm = report.solution.norm();
  if (nrm > 1e-9) x_sharp = report.solution / nrm;

  json out;
  out["x_hat"] = std::vector<double>(report.solution.data(),
                                     report.solution.data() + report.solution.size());
  out["x_sharp"] = std::vector<double>(x_sharp.data(), x_sharp.data() + x_sharp.size());
  out["objective"] = report.objective;
  out["iterations"] = report.iterations;
  out["converged"] = report.converged;
  out["epsilon"] = epsilon;
  out["s"] = s;
  write_text(out_path, out.dump(2) + "\n");

  if (report.infeasible || !report.converged) {
    std::cerr << "recover: solver did not converge\n";
    return kExitSolver;
  }
  return kExitOk;
}

// ----------------------------------------------------------------- rip-check

int run_rip_check_cmd(std::int64_t n, std::int64_t m, std::int64_t s, std::int64_t t,
                      std::int64_t samples, std::uint64_t seed, bool exhaustive,
                      const std::string& out_path) {
  const pocs::SensingMatrix phi =
      pocs::draw_sensing_matrix(m, n, pocs::derive_seed(seed, {0}));
  pocs::Rng signal_rng(pocs::derive_seed(seed, {1}));
  const pocs::SignalVector x =
      pocs::draw_sparse_signal(n, static_cast<int>(s), signal_rng);
  const pocs::ObservedPhases z = pocs::observe(phi, x);
  const pocs::LinearizedSystem sys = pocs::build_linearized(z.values, phi);

  const pocs::RipEstimate est =
      exhaustive
          ? pocs::rip_exhaustive(sys.A, static_cast<int>(t))
          : pocs::rip_monte_carlo(sys.A, static_cast<int>(t), samples,
                                  pocs::derive_seed(seed, {7}));
  json out;
  out["t"] = est.t;
  out["delta_lower"] = est.delta_lower;
  out["certified"] = est.certified;
  out["samples"] = est.samples;
  out["method"] = est.certified ? "exhaustive" : "monte_carlo";
  write_text(out_path, out.dump(2) + "\n");
  return kExitOk;
}

// ----------------------------------------------------------------- adversary

int run_adversary_cmd(std::int64_t n, std::int64_t m, std::int64_t s, double tau0,
                      const std::string& mode, std::uint64_t seed,
                      const std::string& out_path) {
  if (mode != "pre" && mode != "post")
    throw std::invalid_argument("adversary: --mode must be pre or post");
  const pocs::SensingMatrix phi =
      pocs::draw_sensing_matrix(m, n, pocs::derive_seed(seed, {0}));
  pocs::Rng signal_rng(pocs::derive_seed(seed, {1}));
  const pocs::SignalVector x =
      pocs::draw_sparse_signal(n, static_cast<int>(s), signal_rng);
  pocs::Rng pair_rng(pocs::derive_seed(seed, {2}));
  const pocs::AdversaryPair pair = pocs::construct_indistinguishable_pair(
      phi, x, tau0,
      mode == "pre" ? pocs::AdversaryMode::kPre : pocs::AdversaryMode::kPost, pair_rng);

  json out;
  out["feasible"] = pair.feasible;
  out["tau_star"] = pair.tau_star;
  out["l2_distance"] = pair.l2_distance;
  out["phi_linf_distance"] = pair.phi_linf_distance;
  out["sign_linf_distance"] = pair.sign_linf_distance;
  out["small_set_size"] = pair.small_set_size;
  if (pair.feasible)
    out["x_prime"] =
        std::vector<double>(pair.x_prime.data(), pair.x_prime.data() + pair.x_prime.size());
  write_text(out_path, out.dump(2) + "\n");
  return kExitOk;
}

// ------------------------------------------------------------------ selftest

int run_selftest_cmd(std::uint64_t seed) {
  int failures = 0;
  for (const pocs::PropertyResult& r : pocs::run_property_suites(seed)) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << " (observed " << r.value << ")\n";
    if (!r.pass) ++failures;
  }
  if (failures > 0) {
    std::cerr << failures << " selftest suites failed\n";
    return kExitSolver;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phase-only compressed sensing laboratory"};
  app.require_subcommand(1);

  ExperimentFlags ef;
  CLI::App* experiment = app.add_subcommand("experiment", "run an error-vs-noise sweep");
  experiment->add_option("--config", ef.config_path, "JSON config file");
  experiment->add_option("--n", ef.n, "signal dimension");
  experiment->add_option("--m", ef.m, "measurement count");
  experiment->add_option("--s", ef.s, "sparsity level");
  experiment->add_option("--trials", ef.trials, "trials per grid point");
  experiment->add_option("--seed", ef.seed, "base seed");
  experiment->add_option("--channel", ef.channel,
                         "clean | post_sign | pre_sign | corruption | combined");
  experiment->add_option("--tau0-grid", ef.tau0_grid, "dense-noise grid")->delimiter(',');
  experiment->add_option("--zeta0m-grid", ef.zeta0m_grid, "corruption-count grid")
      ->delimiter(',');
  experiment->add_option("--epsilon-mode", ef.epsilon_mode, "theorem | oracle");
  experiment->add_option("--estimator", ef.estimator, "standard | extended");
  experiment->add_option("--signal", ef.signal, "sparse | power_law");
  experiment->add_option("--power-q", ef.power_q, "power-law decay exponent");
  experiment->add_option("--threads", ef.threads, "worker threads");
  experiment->add_flag("--fixed-matrix", ef.fixed_matrix,
                       "one sensing matrix for the whole sweep");
  experiment->add_option("--out", ef.out, "output path");
  experiment->add_option("--format", ef.format, "csv | json");

  std::string rec_input, rec_out;
  double rec_tol = 1e-9;
  CLI::App* recover = app.add_subcommand("recover", "recover one instance from a JSON file");
  recover->add_option("--input", rec_input, "instance JSON: phi_re, phi_im, z_re, z_im, s, epsilon")
      ->required();
  recover->add_option("--out", rec_out, "result path (default stdout)");
  recover->add_option("--tol", rec_tol, "solver tolerance");

  std::int64_t rc_n = 500, rc_m = 300, rc_s = 5, rc_t = 10, rc_samples = 2000;
  std::uint64_t rc_seed = 1;
  bool rc_exhaustive = false;
  std::string rc_out;
  CLI::App* ripcheck = app.add_subcommand("rip-check", "estimate isometry distortion of A_z");
  ripcheck->add_option("--n", rc_n, "signal dimension");
  ripcheck->add_option("--m", rc_m, "measurement count");
  ripcheck->add_option("--s", rc_s, "signal sparsity for the phases");
  ripcheck->add_option("--t", rc_t, "cone sparsity");
  ripcheck->add_option("--samples", rc_samples, "Monte-Carlo probes");
  ripcheck->add_option("--seed", rc_seed, "seed");
  ripcheck->add_flag("--exhaustive", rc_exhaustive, "certified sweep over all supports");
  ripcheck->add_option("--out", rc_out, "result path (default stdout)");

  std::int64_t ad_n = 200, ad_m = 400, ad_s = 8;
  double ad_tau0 = 0.1;
  std::string ad_mode = "pre", ad_out;
  std::uint64_t ad_seed = 1;
  CLI::App* adversary =
      app.add_subcommand("adversary", "construct a nearly indistinguishable signal pair");
  adversary->add_option("--n", ad_n, "signal dimension");
  adversary->add_option("--m", ad_m, "measurement count");
  adversary->add_option("--s", ad_s, "sparsity level");
  adversary->add_option("--tau0", ad_tau0, "noise amplitude");
  adversary->add_option("--mode", ad_mode, "pre | post");
  adversary->add_option("--seed", ad_seed, "seed");
  adversary->add_option("--out", ad_out, "result path (default stdout)");

  std::uint64_t st_seed = 1;
  CLI::App* selftest = app.add_subcommand("selftest", "run the property suites");
  selftest->add_option("--seed", st_seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (experiment->parsed()) return run_experiment_cmd(ef);
    if (recover->parsed()) return run_recover_cmd(rec_input, rec_out, rec_tol);
    if (ripcheck->parsed())
      return run_rip_check_cmd(rc_n, rc_m, rc_s, rc_t, rc_samples, rc_seed, rc_exhaustive,
                               rc_out);
    if (adversary->parsed())
      return run_adversary_cmd(ad_n, ad_m, ad_s, ad_tau0, ad_mode, ad_seed, ad_out);
    if (selftest->parsed()) return run_selftest_cmd(st_seed);
  } catch (const pocs::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "solver fault: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitConfig;
}

// Acceptance gate: eleven pass/fail checks at the reference scale
// (n=500, m=300, s=5, 50 trials per grid point).  One line per criterion
// with the observed statistics and the pinned gates; exit 0 iff every
// selected criterion passes.  `--criterion N` runs one of them, no flag
// runs all eleven.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "pocs/diagnostics.hpp"
#include "pocs/harness.hpp"
#include "pocs/linearization.hpp"
#include "pocs/measurement.hpp"
#include "pocs/properties.hpp"
#include "pocs/recovery.hpp"
#include "pocs/rng.hpp"
#include "pocs/solver.hpp"

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << v;
  return ss.str();
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> errors_at(const std::vector<pocs::TrialRecord>& recs, double grid) {
  std::vector<double> out;
  for (const pocs::TrialRecord& r : recs)
    if (r.grid_param == grid) out.push_back(r.l2_error);
  return out;
}

pocs::SolverOptions solver_opts(double tol, int max_iter = 50000) {
  pocs::SolverOptions o;
  o.tol_primal = tol;
  o.tol_dual = tol;
  o.max_iter = max_iter;
  return o;
}

// ----------------------------------------------------------------------------
// 1. Noiseless exact recovery: clean phases, median error <= 1e-6, >= 90% of
//    trials below 1e-5, under five minutes.

Verdict criterion_noiseless() {
  const auto t0 = Clock::now();
  pocs::ExperimentConfig cfg;
  cfg.channel = pocs::ChannelKind::kClean;
  cfg.base_seed = 101;
  cfg.solver = solver_opts(1e-9);
  const std::vector<pocs::TrialRecord> recs = pocs::run_experiment(cfg);

  std::vector<double> errors;
  int below = 0;
  for (const pocs::TrialRecord& r : recs) {
    errors.push_back(r.l2_error);
    if (r.l2_error < 1e-5) ++below;
  }
  const double med = median_of(errors);
  const double frac = static_cast<double>(below) / errors.size();
  const double elapsed = seconds_since(t0);

  Verdict v;
  v.pass = med <= 1e-6 && frac >= 0.9 && elapsed <= 300.0;
  v.detail = "median=" + fmt(med) + " (gate 1e-06), below_1e-05=" + fmt(frac) +
             " (gate 0.9), elapsed=" + fmt(elapsed) + "s (gate 300)";
  return v;
}

// ----------------------------------------------------------------------------
// 2. Ground-truth identity: residual(A_z, x_star) <= 1e-10 on 100 instances.

Verdict criterion_ground_truth() {
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const pocs::SensingMatrix phi = pocs::draw_sensing_matrix(300, 500, 20200 + t);
    pocs::Rng rng(pocs::derive_seed(202, {static_cast<std::uint64_t>(t)}));
    const pocs::SignalVector x = pocs::draw_sparse_signal(500, 5, rng);
    const pocs::ObservedPhases z = pocs::observe(phi, x);
    const pocs::LinearizedSystem sys = pocs::build_linearized(z.values, phi);
    const pocs::GroundTruth gt = pocs::ground_truth_scaled(phi, x);
    worst = std::max(worst, pocs::residual(sys, gt.x_star));
  }
  Verdict v;
  v.pass = worst <= 1e-10;
  v.detail = "max residual=" + fmt(worst) + " over 100 instances (gate 1e-10)";
  return v;
}

// ----------------------------------------------------------------------------
// 3. Post-sign robustness: oracle radius, mean error <= 36 tau0 at every grid
//    point, linear fit of mean vs tau0 with R^2 >= 0.9.

Verdict criterion_post_sign() {
  pocs::ExperimentConfig cfg;
  cfg.channel = pocs::ChannelKind::kPostSign;
  cfg.epsilon_mode = pocs::EpsilonMode::kOracle;
  cfg.base_seed = 303;
  cfg.solver = solver_opts(1e-7, 20000);
  const std::vector<pocs::TrialRecord> recs = pocs::run_experiment(cfg);
  const pocs::ExperimentSummary sum = pocs::summarize(recs);

  double worst_ratio = 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int k = static_cast<int>(sum.per_point.size());
  for (const pocs::GridSummary& g : sum.per_point) {
    worst_ratio = std::max(worst_ratio, g.mean / g.grid_param);
    sx += g.grid_param;
    sy += g.mean;
    sxx += g.grid_param * g.grid_param;
    sxy += g.grid_param * g.mean;
  }
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / k;
  double ss_res = 0, ss_tot = 0;
  for (const pocs::GridSummary& g : sum.per_point) {
    const double fit = intercept + slope * g.grid_param;
    ss_res += (g.mean - fit) * (g.mean - fit);
    ss_tot += (g.mean - sy / k) * (g.mean - sy / k);
  }
  const double r2 = 1.0 - ss_res / ss_tot;

  Verdict v;
  v.pass = worst_ratio <= 36.0 && r2 >= 0.9;
  v.detail = "max mean/tau0=" + fmt(worst_ratio) + " (gate 36), R2=" + fmt(r2) +
             " (gate 0.9) over " + fmt(double(k)) + " grid points";
  return v;
}

// ----------------------------------------------------------------------------
// 4. Pre-sign robustness: oracle radius, mean error <= 57 tau0 everywhere and
//    mean error below 2 at the harshest amplitude.

Verdict criterion_pre_sign() {
  pocs::ExperimentConfig cfg;
  cfg.channel = pocs::ChannelKind::kPreSign;
  cfg.epsilon_mode = pocs::EpsilonMode::kOracle;
  cfg.base_seed = 404;
  cfg.solver = solver_opts(1e-7, 20000);
  const std::vector<pocs::TrialRecord> recs = pocs::run_experiment(cfg);
  const pocs::ExperimentSummary sum = pocs::summarize(recs);

  double worst_ratio = 0.0;
  double last_mean = 0.0;
  for (const pocs::GridSummary& g : sum.per_point) {
    worst_ratio = std::max(worst_ratio, g.mean / g.grid_param);
    if (g.grid_param == 0.84) last_mean = g.mean;
  }
  Verdict v;
  v.pass = worst_ratio <= 57.0 && last_mean < 2.0 && last_mean > 0.0;
  v.detail = "max mean/tau0=" + fmt(worst_ratio) + " (gate 57), mean@0.84=" +
             fmt(last_mean) + " (gate 2)";
  return v;
}

// ----------------------------------------------------------------------------
// 5. Corruption scaling: largest-rotate-i corruption with the oracle radius;
//    log-log slope of mean error vs zeta0 in [0.35, 0.65] and mean error
//    <= 71 sqrt(zeta0 log(e/zeta0)) at every grid point.

Verdict criterion_corruption_scaling() {
  pocs::ExperimentConfig cfg;
  cfg.channel = pocs::ChannelKind::kCorruption;
  cfg.epsilon_mode = pocs::EpsilonMode::kOracle;
  cfg.base_seed = 505;
  cfg.solver = solver_opts(1e-7, 20000);
  const std::vector<pocs::TrialRecord> recs = pocs::run_experiment(cfg);
  const pocs::ExperimentSummary sum = pocs::summarize(recs);

  double worst_ratio = 0.0;
  for (const pocs::GridSummary& g : sum.per_point) {
    const double zeta0 = g.grid_param / static_cast<double>(cfg.m);
    const double gate = 71.0 * std::sqrt(zeta0 * std::log(std::numbers::e / zeta0));
    worst_ratio = std::max(worst_ratio, g.mean / gate);
  }
  const double slope = sum.slope.value_or(-1.0);

  Verdict v;
  v.pass = slope >= 0.35 && slope <= 0.65 && worst_ratio <= 1.0;
  v.detail = "slope=" + fmt(slope) + " (gate [0.35,0.65]), max mean/envelope=" +
             fmt(worst_ratio) + " (gate 1)";
  return v;
}

// ----------------------------------------------------------------------------
// 6. Perfect recovery under corruption: the extended estimator drives the
//    error to numerical zero at zeta0 m in {1, 5, 13}.

Verdict criterion_extended() {
  pocs::ExperimentConfig cfg;
  cfg.channel = pocs::ChannelKind::kCorruption;
  cfg.estimator = pocs::EstimatorKind::kExtended;
  cfg.zeta0m_grid = {1, 5, 13};
  cfg.base_seed = 606;
  cfg.solver = solver_opts(1e-9);
  const std::vector<pocs::TrialRecord> recs = pocs::run_experiment(cfg);

  bool pass = true;
  std::string parts;
  for (double g : cfg.zeta0m_grid) {
    const std::vector<double> errs = errors_at(recs, g);
    int below = 0;
    for (double e : errs)
      if (e <= 1e-5) ++below;
    const double frac = static_cast<double>(below) / errs.size();
    const double med = median_of(errs);
    pass = pass && frac >= 0.9 && med <= 1e-6;
    if (!parts.empty()) parts += ", ";
    parts += "k=" + fmt(g) + ": frac=" + fmt(frac) + " med=" + fmt(med);
  }
  Verdict v;
  v.pass = pass;
  v.detail = parts + " (gates: frac>=0.9 at 1e-05, median<=1e-06)";
  return v;
}

// ----------------------------------------------------------------------------
// 7. Combined-channel envelope: theorem-mode radius at tau0=0.05, zeta0 m=3;
//    mean error and >=90% of trials within 10 sigma/sqrt(s) + 15 eps
//    (sigma = 0 for exactly sparse signals).

Verdict criterion_combined() {
  pocs::ExperimentConfig cfg;
  cfg.channel = pocs::ChannelKind::kCombined;
  cfg.tau0_grid = {0.05};
  cfg.zeta0m_grid = {3};
  cfg.epsilon_mode = pocs::EpsilonMode::kTheorem;
  cfg.base_seed = 707;
  cfg.solver = solver_opts(1e-8);
  const std::vector<pocs::TrialRecord> recs = pocs::run_experiment(cfg);

  double mean = 0.0;
  double eps = 0.0;
  int failures = 0;
  for (const pocs::TrialRecord& r : recs) {
    mean += r.l2_error;
    eps = r.epsilon;
    if (r.l2_error > 15.0 * r.epsilon) ++failures;
  }
  mean /= recs.size();
  const double gate = 15.0 * eps;
  const double fail_rate = static_cast<double>(failures) / recs.size();

  Verdict v;
  v.pass = mean <= gate && fail_rate <= 0.1;
  v.detail = "mean=" + fmt(mean) + " (gate 15*eps=" + fmt(gate) + ", eps=" + fmt(eps) +
             "), fail_rate=" + fmt(fail_rate) + " (gate 0.1)";
  return v;
}

// ----------------------------------------------------------------------------
// 8. Instance optimality on compressible signals: power-law q=2 with clean
//    phases; error <= 10 sigma_l1(x, Sigma_s)/sqrt(s) in >= 90% of trials.

Verdict criterion_power_law() {
  pocs::ExperimentConfig cfg;
  cfg.channel = pocs::ChannelKind::kClean;
  cfg.signal = pocs::SignalKind::kPowerLaw;
  cfg.power_q = 2.0;
  cfg.base_seed = 808;
  cfg.solver = solver_opts(1e-9);

  // the magnitude profile i^{-2} is shared by every draw, so the defect and
  // the l1 budget are the same deterministic numbers across trials
  pocs::Rng rng(1);
  const pocs::SignalVector ref = pocs::draw_power_law_signal(cfg.n, cfg.power_q, rng);
  const double sigma = pocs::sparsity_defect(ref.values, cfg.s);
  const double bound = 10.0 * sigma / std::sqrt(static_cast<double>(cfg.s));
  const double l1 = ref.values.cwiseAbs().sum();
  const double l1_budget = std::sqrt(2.0 * cfg.s);

  const std::vector<pocs::TrialRecord> recs = pocs::run_experiment(cfg);
  int within = 0;
  for (const pocs::TrialRecord& r : recs)
    if (r.l2_error <= bound) ++within;
  const double frac = static_cast<double>(within) / recs.size();

  Verdict v;
  v.pass = frac >= 0.9 && l1 <= l1_budget;
  v.detail = "frac within bound=" + fmt(frac) + " (gate 0.9, bound=" + fmt(bound) +
             "), ||x||_1=" + fmt(l1) + " (budget " + fmt(l1_budget) + ")";
  return v;
}

// ----------------------------------------------------------------------------
// 9. Solver-oracle equivalence: 40 basis-pursuit and 10 weighted extended
//    instances; simplex objective matches the splitting solver within 1e-6.

Verdict criterion_solver_oracle() {
  double worst_gap = 0.0;
  int solved = 0;

  pocs::Rng rng(909);
  for (int t = 0; t < 40; ++t) {
    const pocs::Index m = 4 + (t % 7);   // rows 4..10
    const pocs::Index n = 8 + (t % 13);  // cols 8..20
    const int s = 1 + (t % 3);
    Eigen::MatrixXd A(m, n);
    for (pocs::Index i = 0; i < m; ++i)
      for (pocs::Index j = 0; j < n; ++j)
        A(i, j) = rng.gaussian() / std::sqrt(static_cast<double>(m));
    const pocs::SignalVector u0 = pocs::draw_sparse_signal(n, s, rng);
    const Eigen::VectorXd y = A * u0.values;

    const pocs::SolveReport rep = pocs::qcbp(A, y, 0.0, solver_opts(1e-11));
    if (!rep.converged) continue;
    const Eigen::VectorXd u = pocs::lp_oracle(A, y, Eigen::VectorXd::Ones(n));
    worst_gap = std::max(worst_gap, std::abs(rep.objective - u.cwiseAbs().sum()));
    ++solved;
  }

  for (int t = 0; t < 10; ++t) {
    const pocs::Index m = 6, n = 8;
    const pocs::SensingMatrix phi = pocs::draw_sensing_matrix(m, n, 91000 + t);
    pocs::Rng srng(pocs::derive_seed(909, {static_cast<std::uint64_t>(t)}));
    const pocs::SignalVector x = pocs::draw_sparse_signal(n, 1, srng);
    const pocs::ObservedPhases z = pocs::observe(phi, x);
    const pocs::ObservedPhases zb = pocs::apply_sparse_corruption(
        phi, x, z, 1.0 / m, pocs::CorruptionMechanism::kLargestRotateI);
    const pocs::ExtendedSystem ext = pocs::build_extended(zb.values, phi, 1, 1.0 / m);

    const pocs::SolveReport rep = pocs::weighted_bp_equality(ext, solver_opts(1e-11));
    if (!rep.converged) continue;
    Eigen::VectorXd weights(n + m);
    weights.head(n).setConstant(ext.weight_u);
    weights.tail(m).setConstant(ext.weight_w);
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(m + 1);
    e1[0] = 1.0;
    const Eigen::VectorXd u = pocs::lp_oracle(ext.dense(), e1, weights);
    const double oracle_obj = (weights.array() * u.array().abs()).sum();
    worst_gap = std::max(worst_gap, std::abs(rep.objective - oracle_obj));
    ++solved;
  }

  Verdict v;
  v.pass = solved == 50 && worst_gap <= 1e-6;
  v.detail = "solved=" + fmt(double(solved)) + "/50, max objective gap=" + fmt(worst_gap) +
             " (gate 1e-06)";
  return v;
}

// ----------------------------------------------------------------------------
// 10. Property suites.

Verdict criterion_properties() {
  const std::vector<pocs::PropertyResult> results = pocs::run_property_suites(1010);
  int passed = 0;
  double worst = 0.0;
  for (const pocs::PropertyResult& r : results) {
    if (r.pass) ++passed;
    worst = std::max(worst, r.value);
  }
  Verdict v;
  v.pass = passed == static_cast<int>(results.size());
  v.detail = fmt(double(passed)) + "/" + fmt(double(results.size())) +
             " suites passed, extreme observed value=" + fmt(worst);
  return v;
}

// ----------------------------------------------------------------------------
// 11. Indistinguishable pairs: pre mode achieves the measurement-space bound
//     and the signal-space separation in >= 90% of trials; post mode keeps the
//     phase distance within tau0 whenever the construction is feasible.

Verdict criterion_adversary() {
  const pocs::Index n = 200, m = 400;
  const int s = 8;
  const double tau0 = 0.1;
  const double separation = tau0 / (12.0 * std::sqrt(std::log(static_cast<double>(m))));

  int pre_ok = 0;
  for (int t = 0; t < 50; ++t) {
    const pocs::SensingMatrix phi = pocs::draw_sensing_matrix(m, n, 111000 + t);
    pocs::Rng srng(pocs::derive_seed(1111, {1, static_cast<std::uint64_t>(t)}));
    const pocs::SignalVector x = pocs::draw_sparse_signal(n, s, srng);
    pocs::Rng prng(pocs::derive_seed(1111, {2, static_cast<std::uint64_t>(t)}));
    const pocs::AdversaryPair pair = pocs::construct_indistinguishable_pair(
        phi, x, tau0, pocs::AdversaryMode::kPre, prng);
    if (pair.feasible && pair.phi_linf_distance <= tau0 && pair.l2_distance >= separation)
      ++pre_ok;
  }
  const double pre_rate = pre_ok / 50.0;

  int post_feasible = 0;
  bool post_ok = true;
  double worst_sign = 0.0;
  for (int t = 0; t < 50; ++t) {
    const pocs::SensingMatrix phi = pocs::draw_sensing_matrix(m, n, 112000 + t);
    pocs::Rng srng(pocs::derive_seed(1111, {3, static_cast<std::uint64_t>(t)}));
    const pocs::SignalVector x = pocs::draw_sparse_signal(n, s, srng);
    pocs::Rng prng(pocs::derive_seed(1111, {4, static_cast<std::uint64_t>(t)}));
    const pocs::AdversaryPair pair = pocs::construct_indistinguishable_pair(
        phi, x, tau0, pocs::AdversaryMode::kPost, prng);
    if (!pair.feasible) continue;
    ++post_feasible;
    worst_sign = std::max(worst_sign, pair.sign_linf_distance);
    post_ok = post_ok && pair.sign_linf_distance <= tau0;
  }

  Verdict v;
  v.pass = pre_rate >= 0.9 && post_ok;
  v.detail = "pre success=" + fmt(pre_rate) + " (gate 0.9), post max sign distance=" +
             fmt(worst_sign) + " over " + fmt(double(post_feasible)) +
             " feasible trials (gate " + fmt(tau0) + ")";
  return v;
}

// ----------------------------------------------------------------------------

struct Criterion {
  const char* name;
  Verdict (*run)();
};

const Criterion kCriteria[] = {
    {"01 noiseless exact recovery", criterion_noiseless},
    {"02 ground-truth identity", criterion_ground_truth},
    {"03 post-sign robustness", criterion_post_sign},
    {"04 pre-sign robustness", criterion_pre_sign},
    {"05 corruption scaling", criterion_corruption_scaling},
    {"06 extended perfect recovery", criterion_extended},
    {"07 combined-channel envelope", criterion_combined},
    {"08 instance optimality", criterion_power_law},
    {"09 solver-oracle equivalence", criterion_solver_oracle},
    {"10 property suites", criterion_properties},
    {"11 indistinguishable pairs", criterion_adversary},
};

}  // namespace

int main(int argc, char** argv) {
  int which = 0;  // 0 = all
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      which = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: pocs_acceptance [--criterion 1..11]\n";
      return 2;
    }
  }
  if (which < 0 || which > 11) {
    std::cerr << "criterion out of range: " << which << "\n";
    return 2;
  }

  int failures = 0;
  for (int idx = 1; idx <= 11; ++idx) {
    if (which != 0 && which != idx) continue;
    const Criterion& c = kCriteria[idx - 1];
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << v.detail << " ["
              << fmt(seconds_since(t0)) << "s]\n";
    if (!v.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}

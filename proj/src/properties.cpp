#include "pocs/properties.hpp"

#include <algorithm>
#include <cmath>

#include "pocs/diagnostics.hpp"
#include "pocs/linearization.hpp"
#include "pocs/measurement.hpp"
#include "pocs/rng.hpp"

namespace pocs {

std::vector<PropertyResult> run_property_suites(std::uint64_t seed) {
  std::vector<PropertyResult> results;

  {  // scalar phase perturbation: |sign(c+d)-sign(c)| <= min(2|d|/max(|c+d|,|c|), 2)
    Rng rng(derive_seed(seed, {1}));
    double worst = 0.0;
    for (int i = 0; i < 100000; ++i) {
      const Complex c = rng.gaussian_complex();
      const Complex d = rng.gaussian_complex();
      const double denom = std::max(std::abs(c + d), std::abs(c));
      const double bound = denom == 0.0 ? 2.0 : std::min(2.0 * std::abs(d) / denom, 2.0);
      worst = std::max(worst, std::abs(phase(c + d) - phase(c)) - bound);
    }
    results.push_back({"phase perturbation inequality, 1e5 pairs", worst <= 1e-12, worst});
  }

  {  // vector normalization: ||a/|a| - b/|b||| <= 2||a-b||/max(|a|,|b|)
    Rng rng(derive_seed(seed, {2}));
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      Eigen::VectorXd a(5), b(5);
      for (int k = 0; k < 5; ++k) {
        a[k] = rng.gaussian();
        b[k] = rng.gaussian();
      }
      if (a.norm() == 0.0 || b.norm() == 0.0) continue;
      const double lhs = (a / a.norm() - b / b.norm()).norm();
      const double rhs = 2.0 * (a - b).norm() / std::max(a.norm(), b.norm());
      worst = std::max(worst, lhs - rhs);
    }
    results.push_back(
        {"normalized-vector perturbation inequality, 1e4 pairs", worst <= 1e-12, worst});
  }

  {  // linearity of w -> A_w
    Rng rng(derive_seed(seed, {3}));
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const SensingMatrix phi = draw_sensing_matrix(6, 4, rng.next_u64());
      Eigen::VectorXcd w1(6), w2(6);
      for (int k = 0; k < 6; ++k) {
        w1[k] = rng.gaussian_complex();
        w2[k] = rng.gaussian_complex();
      }
      const double c1 = rng.gaussian();
      const double c2 = rng.gaussian();
      const Eigen::MatrixXd lhs = build_linearized(c1 * w1 + c2 * w2, phi).A;
      const Eigen::MatrixXd rhs =
          c1 * build_linearized(w1, phi).A + c2 * build_linearized(w2, phi).A;
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    results.push_back({"linearity of the linearized matrix, 100 triples", worst <= 1e-12, worst});
  }

  {  // Monte-Carlo distortion never exceeds the exhaustive value
    Rng rng(derive_seed(seed, {4}));
    double worst = -1.0;
    bool ok = true;
    for (int i = 0; i < 20; ++i) {
      Eigen::MatrixXd a(8, 12);
      for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 12; ++c) a(r, c) = rng.gaussian() / std::sqrt(8.0);
      const double exact = rip_exhaustive(a, 2).delta_lower;
      const double mc = rip_monte_carlo(a, 2, 500, rng.next_u64()).delta_lower;
      worst = std::max(worst, mc - exact);
      ok = ok && mc <= exact + 1e-12;
    }
    results.push_back({"sampled distortion below exhaustive distortion, 20 instances", ok, worst});
  }

  {  // small-measurement set: monotone in eta and rarely above eta * m
    Rng rng(derive_seed(seed, {5}));
    bool monotone = true;
    int within = 0;
    const int reps = 20;
    for (int i = 0; i < reps; ++i) {
      const SensingMatrix phi = draw_sensing_matrix(10000, 4, rng.next_u64());
      Rng srng(rng.next_u64());
      const SignalVector x = draw_sparse_signal(4, 2, srng);
      Index prev = 0;
      for (double eta : {0.0, 0.05, 0.1, 0.5, 2.0}) {
        const Index c = count_small_measurements(phi, x, eta);
        monotone = monotone && c >= prev;
        prev = c;
      }
      if (count_small_measurements(phi, x, 0.1) <= 0.1 * 10000) ++within;
    }
    const double freq = static_cast<double>(within) / reps;
    results.push_back(
        {"small-measurement counting monotone and within budget", monotone && freq >= 0.95, freq});
  }

  return results;
}

}  // namespace pocs

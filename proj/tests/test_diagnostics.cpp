#include <doctest.h>

#include <cmath>
#include <string>

#include "pocs/diagnostics.hpp"
#include "pocs/linearization.hpp"
#include "pocs/measurement.hpp"

using namespace pocs;

TEST_SUITE("diagnostics") {

TEST_CASE("orthonormal columns have no distortion") {
  Rng rng(2100);
  Eigen::MatrixXd G(12, 6);
  for (Index i = 0; i < 12; ++i)
    for (Index j = 0; j < 6; ++j) G(i, j) = rng.gaussian();
  const Eigen::MatrixXd Q =
      Eigen::HouseholderQR<Eigen::MatrixXd>(G).householderQ() *
      Eigen::MatrixXd::Identity(12, 6);
  const RipEstimate r = rip_exhaustive(Q, 3);
  CHECK(r.certified);
  CHECK(r.t == 3);
  CHECK(r.samples == 0);
  CHECK(r.delta_lower < 1e-12);
}

TEST_CASE("a stretched axis is detected exactly") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(2, 2);
  A(0, 0) = std::sqrt(2.0);
  const RipEstimate r = rip_exhaustive(A, 1);
  CHECK(r.certified);
  CHECK(std::abs(r.delta_lower - 1.0) < 1e-12);
}

TEST_CASE("sampled distortion never exceeds the certified value") {
  for (int t = 0; t < 5; ++t) {
    Rng rng(2200 + t);
    Eigen::MatrixXd A(20, 20);
    for (Index i = 0; i < 20; ++i)
      for (Index j = 0; j < 20; ++j) A(i, j) = rng.gaussian() / std::sqrt(20.0);
    const RipEstimate exact = rip_exhaustive(A, 4);
    const RipEstimate sampled = rip_monte_carlo(A, 4, 2000, 2300 + t);
    CHECK(exact.certified);
    CHECK_FALSE(sampled.certified);
    CHECK(sampled.samples == 2000);
    CHECK(sampled.delta_lower <= exact.delta_lower + 1e-12);
  }
}

TEST_CASE("exhaustive sweep rejects oversized cones with a redirect") {
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(60, 60);
  try {
    rip_exhaustive(A, 10);
    FAIL("expected a rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("monte") != std::string::npos);
  }
  CHECK_THROWS_AS(rip_monte_carlo(A, 10, 0, 1), std::invalid_argument);
}

TEST_CASE("linearized clean systems satisfy the one-third distortion bound") {
  int inside = 0;
  for (int t = 0; t < 20; ++t) {
    const SensingMatrix phi = draw_sensing_matrix(300, 500, 2400 + t);
    Rng rng(2450 + t);
    const SignalVector x = draw_sparse_signal(500, 5, rng);
    const ObservedPhases z = observe(phi, x);
    const LinearizedSystem sys = build_linearized(z.values, phi);
    const RipEstimate r = rip_monte_carlo(sys.A, 10, 300, 2500 + t);
    if (r.delta_lower <= 1.0 / 3.0) ++inside;
  }
  CHECK(inside >= 18);
}

TEST_CASE("small-measurement census endpoints and monotonicity") {
  const SensingMatrix phi = draw_sensing_matrix(50, 10, 2600);
  Rng rng(2601);
  const SignalVector x = draw_sparse_signal(10, 3, rng);
  CHECK(count_small_measurements(phi, x, 0.0) == 0);
  CHECK(count_small_measurements(phi, x, 1e9) == 50);
  Index prev = 0;
  for (double eta : {0.1, 0.5, 1.0, 2.0}) {
    const Index c = count_small_measurements(phi, x, eta);
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("small-measurement frequency matches the gaussian tail at scale") {
  // |phi_i^* x| for unit x has modulus density r e^{-r^2/2}; the mass below
  // eta = 0.1 is 1 - e^{-eta^2/2} < 0.5%, so at m = 1e4 the census should be
  // a small fraction.
  const Index m = 10000;
  const SensingMatrix phi = draw_sensing_matrix(m, 4, 2700);
  Rng rng(2701);
  const SignalVector x = draw_sparse_signal(4, 2, rng);
  const Index c = count_small_measurements(phi, x, 0.1);
  const double expect = (1.0 - std::exp(-0.005)) * static_cast<double>(m);
  CHECK(static_cast<double>(c) < 4.0 * (expect + 10.0));
  CHECK(c >= 0);
}

TEST_CASE("l1 concentration vanishes when every modulus equals kappa") {
  SensingMatrix phi;
  phi.phi.resize(3, 1);
  phi.phi(0, 0) = Complex(kKappa, 0.0);
  phi.phi(1, 0) = Complex(0.0, -kKappa);
  phi.phi(2, 0) = Complex(kKappa / std::sqrt(2.0), kKappa / std::sqrt(2.0));
  SignalVector x;
  x.values.resize(1);
  x.values[0] = 1.0;
  CHECK(l1_concentration(phi, x) < 1e-14);

  // scale invariance via the internal normalization
  SignalVector x2;
  x2.values.resize(1);
  x2.values[0] = -7.5;
  CHECK(l1_concentration(phi, x2) < 1e-14);

  SignalVector zero;
  zero.values = Eigen::VectorXd::Zero(1);
  CHECK_THROWS_AS(l1_concentration(phi, zero), std::invalid_argument);
}

TEST_CASE("l1 concentration is small at scale") {
  int inside = 0;
  for (int t = 0; t < 100; ++t) {
    const SensingMatrix phi = draw_sensing_matrix(10000, 3, 2800 + t);
    Rng rng(2900 + t);
    const SignalVector x = draw_sparse_signal(3, 2, rng);
    if (l1_concentration(phi, x) <= 0.05) ++inside;
  }
  CHECK(inside >= 95);
}

TEST_CASE("perturbation audit reports zero violation for clean data") {
  const SensingMatrix phi = draw_sensing_matrix(20, 5, 3000);
  Rng rng(3001);
  const SignalVector x = draw_sparse_signal(5, 2, rng);
  const ObservedPhases z = observe(phi, x);
  const Eigen::VectorXcd delta = Eigen::VectorXcd::Zero(20);
  const PerturbationAudit a = perturbation_audit(z.values, z.values, phi, x, delta);
  CHECK(a.entries == 20);
  CHECK(a.fallback_entries == 0);
  CHECK(a.max_violation <= 0.0);
}

TEST_CASE("perturbation audit validates the inequality on random noise") {
  const Index m = 10000;
  const SensingMatrix phi = draw_sensing_matrix(m, 6, 3100);
  Rng rng(3101);
  const SignalVector x = draw_sparse_signal(6, 3, rng);
  const Eigen::VectorXcd c = phi.phi * x.values.cast<Complex>();
  Eigen::VectorXcd delta(m);
  for (Index i = 0; i < m; ++i) delta[i] = 0.3 * rng.gaussian_complex();
  const Eigen::VectorXcd zb = phase(Eigen::VectorXcd(c + delta));
  const Eigen::VectorXcd z = phase(c);
  const PerturbationAudit a = perturbation_audit(zb, z, phi, x, delta);
  CHECK(a.entries == m);
  CHECK(a.max_violation <= 1e-12);
}

TEST_CASE("perturbation audit counts the vanishing-measurement fallback") {
  SensingMatrix phi;
  phi.phi.resize(2, 1);
  phi.phi(0, 0) = Complex(0.0, 0.0);
  phi.phi(1, 0) = Complex(1.0, 0.0);
  SignalVector x;
  x.values.resize(1);
  x.values[0] = 1.0;
  const Eigen::VectorXcd c = phi.phi * x.values.cast<Complex>();
  Eigen::VectorXcd delta(2);
  delta[0] = Complex(0.0, 0.0);
  delta[1] = Complex(0.1, 0.0);
  const Eigen::VectorXcd zb = phase(Eigen::VectorXcd(c + delta));
  const PerturbationAudit a = perturbation_audit(zb, phase(c), phi, x, delta);
  CHECK(a.fallback_entries == 1);
  CHECK(a.max_violation <= 0.0);
}

}  // TEST_SUITE

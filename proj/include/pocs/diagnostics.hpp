#pragma once

#include <cstdint>

#include "pocs/rng.hpp"
#include "pocs/types.hpp"

namespace pocs {

// Restricted-isometry distortion over the cone of t-sparse vectors.
// Exhaustive sweeps certify the exact value; Monte-Carlo sampling only
// certifies a lower bound.
struct RipEstimate {
  int t = 0;
  double delta_lower = 0.0;
  bool certified = false;
  long samples = 0;  // 0 for the exhaustive method
};

// Exact distortion max_S max(sigma_max^2 - 1, 1 - sigma_min^2) over all
// supports S of size t. Requires C(n, t) <= 2e5; larger cones are rejected
// with a hint to use the Monte-Carlo estimate.
RipEstimate rip_exhaustive(const Eigen::MatrixXd& A, int t);

// Lower bound on the same distortion from random unit t-sparse probes
// (uniform supports, Gaussian coefficients, normalized).
RipEstimate rip_monte_carlo(const Eigen::MatrixXd& A, int t, long samples, std::uint64_t seed);

// Cardinality of { i : |phi_i^* x| <= eta }.
Index count_small_measurements(const SensingMatrix& phi, const SignalVector& x, double eta);

// | ||phi x||_1 / (kappa m) - 1 | with x normalized internally; x = 0 rejected.
double l1_concentration(const SensingMatrix& phi, const SignalVector& x);

struct PerturbationAudit {
  double max_violation = 0.0;  // max over entries of |zb - z| minus its bound
  Index entries = 0;
  Index fallback_entries = 0;  // entries where |phi_i^* x| = 0 forced the constant-2 bound
};

// Checks the phase-perturbation inequality entrywise for a known pre-sign
// perturbation delta: |sign(c + d) - sign(c)| <= min(2|d| / max(|c+d|, |c|), 2),
// with the constant-2 fallback when both moduli vanish.
PerturbationAudit perturbation_audit(const Eigen::VectorXcd& z_breve, const Eigen::VectorXcd& z,
                                     const SensingMatrix& phi, const SignalVector& x,
                                     const Eigen::VectorXcd& delta);

}  // namespace pocs

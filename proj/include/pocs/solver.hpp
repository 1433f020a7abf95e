#pragma once

#include "pocs/linearization.hpp"
#include "pocs/types.hpp"

#include <vector>

namespace pocs {

struct SolverOptions {
  double rho = 1.0;              // initial ADMM penalty
  double tol_primal = 1e-9;      // absolute and relative primal tolerance
  double tol_dual = 1e-9;        // absolute and relative dual tolerance
  int max_iter = 50000;
  double over_relaxation = 1.6;  // alpha in [1, 1.9]
  // Residual-balancing of rho.  The cached factorization of (I + A^T A) is
  // penalty-free because both splitting blocks carry the same rho, so
  // balancing costs nothing; false reproduces the plain fixed-rho iteration.
  bool adaptive_penalty = true;
  // Record the best-so-far feasible objective at every convergence check
  // (testing hook; off in production runs).
  bool trace_objective = false;
};

struct SolveReport {
  Eigen::VectorXd solution;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool converged = false;
  double objective = 0.0;
  // Set only when the solve stalled and the least-squares residual of the
  // constraint system provably exceeds epsilon.
  bool infeasible = false;
  std::vector<double> best_objective_trace;
};

// Quadratically constrained basis pursuit: minimize ||u||_1 subject to
// ||A u - y||_2 <= epsilon.  epsilon = 0 projects the residual copy onto
// {0}, i.e. an exact equality constraint.
SolveReport qcbp(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                 double epsilon, const SolverOptions& opts = {});

// minimize ||u||_1 / sqrt(s) + ||w||_1 / sqrt(zeta0 m) subject to
// [A_w | (0; I_m)] (u; w) = e1, with the weights taken from the system.
SolveReport weighted_bp_equality(const ExtendedSystem& sys,
                                 const SolverOptions& opts = {});

// Exact weighted l1 minimizer of A u = y via the positive/negative-part LP,
// solved by a self-contained two-phase simplex with Bland's rule.  Desk-scale
// validation oracle: requires rows + cols <= 40 and stays independent of the
// ADMM path.
Eigen::VectorXd lp_oracle(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& weights);

}  // namespace pocs

#pragma once

#include "pocs/types.hpp"

namespace pocs {

// The linearized sensing matrix
//   A_w = [ Re(w^* Phi) / (kappa m) ; Im(diag(w)^* Phi) / sqrt(m) ]
// of shape (m+1) x n; the right-hand side is always e1.
struct LinearizedSystem {
  Eigen::MatrixXd A;
  double epsilon = 0.0;  // noise radius used by the solve

  Index rows() const { return A.rows(); }
  Index cols() const { return A.cols(); }
};

// Extended system [ A_w | (0; I_m) ] of shape (m+1) x (n+m).  The identity
// block is implicit: products and the solver's normal equations exploit the
// block structure instead of materializing an (m+1) x (n+m) matrix.
struct ExtendedSystem {
  Eigen::MatrixXd base;  // the A_w block, (m+1) x n
  double weight_u = 1.0; // 1/sqrt(s)
  double weight_w = 1.0; // 1/sqrt(zeta0 m)

  Index rows() const { return base.rows(); }
  Index cols() const { return base.cols() + base.rows() - 1; }

  // [A_w | (0; I_m)] (u; w)
  Eigen::VectorXd apply(const Eigen::VectorXd& uw) const;
  Eigen::VectorXd apply_adjoint(const Eigen::VectorXd& r) const;

  // Dense materialization, for oracles and tests at desk scale only.
  Eigen::MatrixXd dense() const;
};

struct GroundTruth {
  Eigen::VectorXd x_star;
  double scale = 0.0;  // kappa m / ||Phi x||_1
};

struct ExtendedGroundTruth {
  Eigen::VectorXd x_star_star;
  Eigen::VectorXd x_zeta;
  double scale = 0.0;  // kappa m / Re(zbreve^* Phi x)
};

LinearizedSystem build_linearized(const Eigen::VectorXcd& w,
                                  const SensingMatrix& phi,
                                  double epsilon = 0.0);

// s >= 1 and ceil(zeta0 m) >= 1 required (the corruption weight is
// 1/sqrt(zeta0 m)).
ExtendedSystem build_extended(const Eigen::VectorXcd& w,
                              const SensingMatrix& phi, int s, double zeta0);

// x_star = kappa m x / ||Phi x||_1 with ||Phi x||_1 the sum of complex
// moduli; satisfies A_z x_star = e1 for clean z.
GroundTruth ground_truth_scaled(const SensingMatrix& phi, const SignalVector& x);

// x_star_star = kappa m x / Re(zbreve^* Phi x) and the corruption shadow
// x_zeta = Im(diag(zeta) conj(Phi x_star_star)) / sqrt(m), chosen so that
// the stacked pair satisfies the extended identity A~_zbreve (x**, xz) = e1.
ExtendedGroundTruth ground_truth_extended(const SensingMatrix& phi,
                                          const SignalVector& x,
                                          const Eigen::VectorXcd& z_breve,
                                          const Eigen::VectorXcd& zeta);

double residual(const LinearizedSystem& sys, const Eigen::VectorXd& v);
double residual(const ExtendedSystem& sys, const Eigen::VectorXd& uw);

// sigma_l1(x, Sigma_s): sum of the n-s smallest magnitudes.
double sparsity_defect(const Eigen::VectorXd& x, int s);

}  // namespace pocs

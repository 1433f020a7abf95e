#include "pocs/linearization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pocs {

Eigen::VectorXd ExtendedSystem::apply(const Eigen::VectorXd& uw) const {
  const Index n = base.cols();
  const Index m = base.rows() - 1;
  if (uw.size() != n + m) throw std::invalid_argument("ExtendedSystem::apply: bad length");
  Eigen::VectorXd out = base * uw.head(n);
  out.tail(m) += uw.tail(m);
  return out;
}

Eigen::VectorXd ExtendedSystem::apply_adjoint(const Eigen::VectorXd& r) const {
  const Index n = base.cols();
  const Index m = base.rows() - 1;
  if (r.size() != m + 1) throw std::invalid_argument("ExtendedSystem::apply_adjoint: bad length");
  Eigen::VectorXd out(n + m);
  out.head(n).noalias() = base.transpose() * r;
  out.tail(m) = r.tail(m);
  return out;
}

Eigen::MatrixXd ExtendedSystem::dense() const {
  const Index n = base.cols();
  const Index m = base.rows() - 1;
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(m + 1, n + m);
  full.leftCols(n) = base;
  full.bottomRightCorner(m, m).setIdentity();
  return full;
}

LinearizedSystem build_linearized(const Eigen::VectorXcd& w,
                                  const SensingMatrix& phi, double epsilon) {
  const Index m = phi.rows();
  const Index n = phi.cols();
  if (w.size() != m) throw std::invalid_argument("build_linearized: w length must equal m");
  if (epsilon < 0.0) throw std::invalid_argument("build_linearized: epsilon must be nonnegative");

  const Eigen::MatrixXcd scaled = w.conjugate().asDiagonal() * phi.phi;  // diag(w)^* Phi
  LinearizedSystem sys;
  sys.A.resize(m + 1, n);
  sys.A.row(0) = scaled.real().colwise().sum() / (kKappa * static_cast<double>(m));
  sys.A.bottomRows(m) = scaled.imag() / std::sqrt(static_cast<double>(m));
  sys.epsilon = epsilon;
  return sys;
}

ExtendedSystem build_extended(const Eigen::VectorXcd& w,
                              const SensingMatrix& phi, int s, double zeta0) {
  if (s < 1) throw std::invalid_argument("build_extended: need s >= 1");
  const double zm = zeta0 * static_cast<double>(phi.rows());
  if (zm < 1.0 - 1e-9)
    throw std::invalid_argument("build_extended: need zeta0 * m >= 1 for the corruption weight");
  ExtendedSystem sys;
  sys.base = build_linearized(w, phi).A;
  sys.weight_u = 1.0 / std::sqrt(static_cast<double>(s));
  sys.weight_w = 1.0 / std::sqrt(zm);
  return sys;
}

GroundTruth ground_truth_scaled(const SensingMatrix& phi, const SignalVector& x) {
  if (x.values.size() != phi.cols())
    throw std::invalid_argument("ground_truth_scaled: dimension mismatch");
  const double l1 = (phi.phi * x.values.cast<Complex>()).cwiseAbs().sum();
  if (l1 <= 0.0) throw std::invalid_argument("ground_truth_scaled: ||Phi x||_1 vanishes (x = 0?)");
  GroundTruth gt;
  gt.scale = kKappa * static_cast<double>(phi.rows()) / l1;
  gt.x_star = gt.scale * x.values;
  return gt;
}

ExtendedGroundTruth ground_truth_extended(const SensingMatrix& phi,
                                          const SignalVector& x,
                                          const Eigen::VectorXcd& z_breve,
                                          const Eigen::VectorXcd& zeta) {
  const Index m = phi.rows();
  if (x.values.size() != phi.cols() || z_breve.size() != m || zeta.size() != m)
    throw std::invalid_argument("ground_truth_extended: dimension mismatch");
  const Eigen::VectorXcd w = phi.phi * x.values.cast<Complex>();
  const double denom = z_breve.dot(w).real();  // Re(zbreve^* Phi x)
  if (std::abs(denom) < 1e-12 * w.cwiseAbs().sum())
    throw std::invalid_argument("ground_truth_extended: Re(zbreve^* Phi x) vanishes");

  ExtendedGroundTruth gt;
  gt.scale = kKappa * static_cast<double>(m) / denom;
  gt.x_star_star = gt.scale * x.values;
  // Row block of the extended identity:
  //   Im(diag(zbreve)^* Phi) x** / sqrt(m) + x_zeta = 0,
  // and Im(diag(z)^* Phi x**) = 0 for the clean part, so x_zeta has to
  // cancel Im(conj(zeta) .* (Phi x**)); that is Im(zeta .* conj(Phi x**)).
  const Eigen::VectorXcd wss = gt.scale * w;
  gt.x_zeta.resize(m);
  for (Index i = 0; i < m; ++i)
    gt.x_zeta[i] = (zeta[i] * std::conj(wss[i])).imag() / std::sqrt(static_cast<double>(m));
  return gt;
}

double residual(const LinearizedSystem& sys, const Eigen::VectorXd& v) {
  if (v.size() != sys.A.cols()) throw std::invalid_argument("residual: dimension mismatch");
  Eigen::VectorXd r = sys.A * v;
  r[0] -= 1.0;
  return r.norm();
}

double residual(const ExtendedSystem& sys, const Eigen::VectorXd& uw) {
  Eigen::VectorXd r = sys.apply(uw);
  r[0] -= 1.0;
  return r.norm();
}

double sparsity_defect(const Eigen::VectorXd& x, int s) {
  const Index n = x.size();
  if (s < 0 || s > n) throw std::invalid_argument("sparsity_defect: need 0 <= s <= n");
  if (s == n) return 0.0;
  Eigen::VectorXd mags = x.cwiseAbs();
  std::sort(mags.data(), mags.data() + n);  // ascending
  return mags.head(n - s).sum();
}

}  // namespace pocs

#include "pocs/diagnostics.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pocs {
namespace {

constexpr double kSupportCap = 2e5;

double binomial(Index n, int t) {
  double c = 1.0;
  for (int i = 1; i <= t; ++i) {
    c *= static_cast<double>(n - t + i) / static_cast<double>(i);
    if (c > 1e18) return c;  // far past any cap; stop before losing precision matters
  }
  return c;
}

double support_distortion(const Eigen::MatrixXd& A, const std::vector<Index>& support) {
  const Index t = static_cast<Index>(support.size());
  Eigen::MatrixXd sub(A.rows(), t);
  for (Index j = 0; j < t; ++j) sub.col(j) = A.col(support[static_cast<size_t>(j)]);
  Eigen::MatrixXd gram = sub.transpose() * sub;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  return std::max(hi - 1.0, 1.0 - lo);
}

}  // namespace

RipEstimate rip_exhaustive(const Eigen::MatrixXd& A, int t) {
  const Index n = A.cols();
  if (t < 1 || t > n) throw std::invalid_argument("rip_exhaustive: need 1 <= t <= n");
  if (binomial(n, t) > kSupportCap)
    throw std::invalid_argument(
        "rip_exhaustive: C(n,t) exceeds the 2e5 support cap; use rip_monte_carlo");

  std::vector<Index> support(static_cast<size_t>(t));
  for (int j = 0; j < t; ++j) support[static_cast<size_t>(j)] = j;

  RipEstimate est;
  est.t = t;
  est.certified = true;
  while (true) {
    est.delta_lower = std::max(est.delta_lower, support_distortion(A, support));
    // next lexicographic combination
    int j = t - 1;
    while (j >= 0 && support[static_cast<size_t>(j)] == n - t + j) --j;
    if (j < 0) break;
    ++support[static_cast<size_t>(j)];
    for (int i = j + 1; i < t; ++i)
      support[static_cast<size_t>(i)] = support[static_cast<size_t>(i - 1)] + 1;
  }
  return est;
}

RipEstimate rip_monte_carlo(const Eigen::MatrixXd& A, int t, long samples, std::uint64_t seed) {
  const Index n = A.cols();
  if (t < 1 || t > n) throw std::invalid_argument("rip_monte_carlo: need 1 <= t <= n");
  if (samples < 1) throw std::invalid_argument("rip_monte_carlo: need samples >= 1");

  Rng rng(seed);
  std::vector<Index> support;
  Eigen::VectorXd coeff(t);
  Eigen::VectorXd image(A.rows());

  RipEstimate est;
  est.t = t;
  est.certified = false;
  est.samples = samples;
  for (long k = 0; k < samples; ++k) {
    support.clear();
    while (static_cast<int>(support.size()) < t) {
      const Index cand = static_cast<Index>(rng.uniform() * static_cast<double>(n));
      const Index idx = std::min(cand, n - 1);
      bool fresh = true;
      for (Index taken : support) fresh = fresh && (taken != idx);
      if (fresh) support.push_back(idx);
    }
    for (int j = 0; j < t; ++j) coeff[j] = rng.gaussian();
    const double nrm = coeff.norm();
    if (nrm == 0.0) continue;
    coeff /= nrm;
    image.setZero();
    for (int j = 0; j < t; ++j) image += coeff[j] * A.col(support[static_cast<size_t>(j)]);
    est.delta_lower = std::max(est.delta_lower, std::abs(image.squaredNorm() - 1.0));
  }
  return est;
}

Index count_small_measurements(const SensingMatrix& phi, const SignalVector& x, double eta) {
  if (eta < 0.0) throw std::invalid_argument("count_small_measurements: eta must be nonnegative");
  if (x.values.size() != phi.cols())
    throw std::invalid_argument("count_small_measurements: dimension mismatch");
  const Eigen::VectorXd mods = (phi.phi * x.values.cast<Complex>()).cwiseAbs();
  return (mods.array() <= eta).count();
}

double l1_concentration(const SensingMatrix& phi, const SignalVector& x) {
  if (x.values.size() != phi.cols())
    throw std::invalid_argument("l1_concentration: dimension mismatch");
  const double nrm = x.values.norm();
  if (nrm == 0.0) throw std::invalid_argument("l1_concentration: zero signal");
  const double l1 = (phi.phi * (x.values / nrm).cast<Complex>()).cwiseAbs().sum();
  return std::abs(l1 / (kKappa * static_cast<double>(phi.rows())) - 1.0);
}

PerturbationAudit perturbation_audit(const Eigen::VectorXcd& z_breve, const Eigen::VectorXcd& z,
                                     const SensingMatrix& phi, const SignalVector& x,
                                     const Eigen::VectorXcd& delta) {
  const Index m = phi.rows();
  if (z_breve.size() != m || z.size() != m || delta.size() != m ||
      x.values.size() != phi.cols())
    throw std::invalid_argument("perturbation_audit: dimension mismatch");

  const Eigen::VectorXcd c = phi.phi * x.values.cast<Complex>();
  PerturbationAudit audit;
  audit.entries = m;
  bool first = true;
  for (Index i = 0; i < m; ++i) {
    const double base = std::abs(c[i]);
    const double moved = std::abs(c[i] + delta[i]);
    if (base == 0.0) ++audit.fallback_entries;
    const double denom = std::max(base, moved);
    const double bound = denom == 0.0 ? 2.0 : std::min(2.0 * std::abs(delta[i]) / denom, 2.0);
    const double violation = std::abs(z_breve[i] - z[i]) - bound;
    audit.max_violation = first ? violation : std::max(audit.max_violation, violation);
    first = false;
  }
  if (first) audit.max_violation = 0.0;
  return audit;
}

}  // namespace pocs

#include "pocs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pocs {
namespace {

constexpr int kCheckEvery = 5;       // residual checks and penalty balancing
constexpr double kRhoGrow = 2.0;     // residual-balancing factor
constexpr double kBalanceRatio = 10.0;

// Linear operator with a cached factorization of (I + A^T A).  The two
// backends are the dense (m+1) x n system and the extended system whose
// trailing identity block is folded into an n x n Schur complement.
class Operator {
 public:
  virtual ~Operator() = default;
  virtual Index rows() const = 0;
  virtual Index cols() const = 0;
  virtual void apply(const Eigen::VectorXd& x, Eigen::VectorXd& out) const = 0;
  virtual void apply_adjoint(const Eigen::VectorXd& r, Eigen::VectorXd& out) const = 0;
  virtual void solve_ridge(const Eigen::VectorXd& rhs, Eigen::VectorXd& out) const = 0;
  virtual Eigen::MatrixXd dense() const = 0;  // diagnostics only
};

class DenseOperator final : public Operator {
 public:
  explicit DenseOperator(const Eigen::MatrixXd& a) : a_(a) {
    Eigen::MatrixXd gram = Eigen::MatrixXd::Identity(a.cols(), a.cols());
    gram.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
    llt_.compute(gram);
    if (llt_.info() != Eigen::Success)
      throw std::runtime_error("qcbp: factorization of I + A^T A failed");
  }
  Index rows() const override { return a_.rows(); }
  Index cols() const override { return a_.cols(); }
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& out) const override {
    out.noalias() = a_ * x;
  }
  void apply_adjoint(const Eigen::VectorXd& r, Eigen::VectorXd& out) const override {
    out.noalias() = a_.transpose() * r;
  }
  void solve_ridge(const Eigen::VectorXd& rhs, Eigen::VectorXd& out) const override {
    out = rhs;
    llt_.solveInPlace(out);
  }
  Eigen::MatrixXd dense() const override { return a_; }

 private:
  const Eigen::MatrixXd& a_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

class ExtendedOperator final : public Operator {
 public:
  explicit ExtendedOperator(const ExtendedSystem& sys)
      : base_(sys.base), n_(sys.base.cols()), m_(sys.base.rows() - 1) {
    // I + A^T A = [[I + B^T B, L^T], [L, 2 I]] with L the lower m x n block
    // of B; eliminating the w-block leaves M = I + r0^T r0 + L^T L / 2.
    Eigen::MatrixXd schur = Eigen::MatrixXd::Identity(n_, n_);
    schur.selfadjointView<Eigen::Lower>().rankUpdate(base_.row(0).transpose());
    schur.selfadjointView<Eigen::Lower>().rankUpdate(base_.bottomRows(m_).transpose(), 0.5);
    llt_.compute(schur);
    if (llt_.info() != Eigen::Success)
      throw std::runtime_error("weighted_bp_equality: Schur factorization failed");
  }
  Index rows() const override { return m_ + 1; }
  Index cols() const override { return n_ + m_; }
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& out) const override {
    out.noalias() = base_ * x.head(n_);
    out.tail(m_) += x.tail(m_);
  }
  void apply_adjoint(const Eigen::VectorXd& r, Eigen::VectorXd& out) const override {
    out.head(n_).noalias() = base_.transpose() * r;
    out.tail(m_) = r.tail(m_);
  }
  void solve_ridge(const Eigen::VectorXd& rhs, Eigen::VectorXd& out) const override {
    Eigen::VectorXd t = rhs.head(n_);
    t.noalias() -= 0.5 * (base_.bottomRows(m_).transpose() * rhs.tail(m_));
    llt_.solveInPlace(t);
    out.resize(n_ + m_);
    out.head(n_) = t;
    out.tail(m_).noalias() = -0.5 * (base_.bottomRows(m_) * t);
    out.tail(m_) += 0.5 * rhs.tail(m_);
  }
  Eigen::MatrixXd dense() const override {
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(m_ + 1, n_ + m_);
    full.leftCols(n_) = base_;
    full.bottomRightCorner(m_, m_).setIdentity();
    return full;
  }

 private:
  const Eigen::MatrixXd& base_;
  Index n_, m_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

void soft_threshold(const Eigen::VectorXd& t, const Eigen::VectorXd& kappa,
                    Eigen::VectorXd& out) {
  out = (t.array().abs() - kappa.array()).max(0.0) * t.array().sign();
}

void project_ball(Eigen::VectorXd& r, double radius) {
  if (radius <= 0.0) {
    r.setZero();
    return;
  }
  const double nrm = r.norm();
  if (nrm > radius) r *= radius / nrm;
}

double weighted_l1(const Eigen::VectorXd& u, const Eigen::VectorXd& weights) {
  return u.cwiseAbs().dot(weights);
}

// ADMM on: minimize sum_j weights_j |u_j| subject to ||A u - y||_2 <= eps.
// Splitting u = zc (l1 copy) and A u - y = v (ball copy); both couplings
// carry the same penalty, so the ridge factorization never depends on rho.
SolveReport admm_weighted_ball(const Operator& op, const Eigen::VectorXd& y,
                               double eps, const Eigen::VectorXd& weights,
                               const SolverOptions& opts) {
  if (eps < 0.0) throw std::invalid_argument("solver: epsilon must be nonnegative");
  if (opts.rho <= 0.0 || opts.tol_primal <= 0.0 || opts.tol_dual <= 0.0 || opts.max_iter < 1)
    throw std::invalid_argument("solver: invalid options");
  if (opts.over_relaxation < 1.0 || opts.over_relaxation > 1.9)
    throw std::invalid_argument("solver: over_relaxation must lie in [1, 1.9]");

  const Index n = op.cols();
  const Index mr = op.rows();
  const double alpha = opts.over_relaxation;
  double rho = opts.rho;

  Eigen::VectorXd x(n), zc(n), zc_old(n), v(mr), v_old(mr);
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);   // scaled dual, u - zc
  Eigen::VectorXd b = Eigen::VectorXd::Zero(mr);  // scaled dual, Au - y - v
  Eigen::VectorXd ax(mr), rhs(n), rhs_m(mr), adj(n), xh(n), rh(mr), kappa(n), tmp_n(n);

  // Warm start at the ridge solution of A u ~ y; deterministic in the inputs.
  op.apply_adjoint(y, rhs);
  op.solve_ridge(rhs, x);
  zc = x;
  op.apply(x, ax);
  v = ax - y;
  project_ball(v, eps);
  kappa = weights / rho;

  // Candidate-acceptance slack; must dominate the absolute term of the primal
  // stopping rule or a converged iterate could be rejected as infeasible.
  const double feas_slack =
      10.0 * opts.tol_primal * std::sqrt(static_cast<double>(n + mr));
  // Penalty rebalancing happens with exponential backoff: the gap between
  // consecutive changes doubles, so the total number of changes is O(log
  // max_iter) and the iteration eventually runs at a fixed rho.  Without the
  // backoff the rho update can limit-cycle on degenerate instances.
  int next_adapt = 0;
  double best_objective = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x;

  SolveReport report;
  double prim = std::numeric_limits<double>::infinity();
  double dual = std::numeric_limits<double>::infinity();

  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    // u-update: (I + A^T A) u = (zc - a) + A^T (y + v - b)
    rhs_m = y + v - b;
    op.apply_adjoint(rhs_m, adj);
    rhs = zc - a + adj;
    op.solve_ridge(rhs, x);
    op.apply(x, ax);

    xh = alpha * x + (1.0 - alpha) * zc;
    rh = alpha * (ax - y) + (1.0 - alpha) * v;

    zc_old.swap(zc);
    tmp_n = xh + a;
    soft_threshold(tmp_n, kappa, zc);

    v_old.swap(v);
    v = rh + b;
    project_ball(v, eps);

    a += xh - zc;
    b += rh - v;

    const bool check = (iter % kCheckEvery == 0) || (iter + 1 == opts.max_iter);
    if (!check) continue;

    const double feas_gap = std::max(0.0, (ax - y).norm() - eps);
    if (feas_gap <= feas_slack) {
      const double obj = weighted_l1(x, weights);
      if (obj < best_objective) {
        best_objective = obj;
        best_x = x;
      }
    }
    if (opts.trace_objective) report.best_objective_trace.push_back(best_objective);

    prim = std::sqrt((x - zc).squaredNorm() + (ax - y - v).squaredNorm());
    op.apply_adjoint(v - v_old, adj);
    dual = rho * std::sqrt((zc - zc_old + adj).squaredNorm());

    const double scale_pri =
        std::max({std::sqrt(x.squaredNorm() + ax.squaredNorm()),
                  std::sqrt(zc.squaredNorm() + v.squaredNorm()), y.norm()});
    op.apply_adjoint(b, adj);
    const double scale_dual = rho * std::sqrt((a + adj).squaredNorm());
    const double eps_pri =
        std::sqrt(static_cast<double>(n + mr)) * opts.tol_primal + opts.tol_primal * scale_pri;
    const double eps_dual =
        std::sqrt(static_cast<double>(n)) * opts.tol_dual + opts.tol_dual * scale_dual;

    if (prim <= eps_pri && dual <= eps_dual) {
      report.converged = true;
      ++iter;
      break;
    }

    if (opts.adaptive_penalty && iter >= next_adapt) {
      if (prim > kBalanceRatio * dual && rho < 1e4) {
        rho *= kRhoGrow;
        a /= kRhoGrow;
        b /= kRhoGrow;
        kappa = weights / rho;
        next_adapt = 2 * (iter + 1);
      } else if (dual > kBalanceRatio * prim && rho > 1e-4) {
        rho /= kRhoGrow;
        a *= kRhoGrow;
        b *= kRhoGrow;
        kappa = weights / rho;
        next_adapt = 2 * (iter + 1);
      }
    }
  }

  report.iterations = iter;
  report.primal_residual = prim;
  report.dual_residual = dual;

  // Candidate selection: the tracked best feasible iterate, the final
  // thresholded copy, and the final ridge iterate, by weighted objective.
  Eigen::VectorXd azc(mr);
  op.apply(zc, azc);
  const double zc_gap = std::max(0.0, (azc - y).norm() - eps);
  if (zc_gap <= feas_slack) {
    const double obj = weighted_l1(zc, weights);
    if (obj < best_objective) {
      best_objective = obj;
      best_x = zc;
    }
  }
  if (best_x.size() > 0) {
    report.solution = best_x;
    report.objective = best_objective;
  } else {
    report.solution = x;
    report.objective = weighted_l1(x, weights);
    report.converged = false;
    // The iterate never came close to the constraint set; certify whether
    // the instance itself is infeasible before blaming the iteration.
    const Eigen::MatrixXd full = op.dense();
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(full);
    const Eigen::VectorXd ls = cod.solve(y);
    if ((full * ls - y).norm() > eps + feas_slack) report.infeasible = true;
  }
  return report;
}

}  // namespace

SolveReport qcbp(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                 double epsilon, const SolverOptions& opts) {
  if (y.size() != A.rows()) throw std::invalid_argument("qcbp: dimension mismatch");
  DenseOperator op(A);
  return admm_weighted_ball(op, y, epsilon, Eigen::VectorXd::Ones(A.cols()), opts);
}

SolveReport weighted_bp_equality(const ExtendedSystem& sys,
                                 const SolverOptions& opts) {
  const Index n = sys.base.cols();
  const Index m = sys.base.rows() - 1;
  ExtendedOperator op(sys);
  Eigen::VectorXd weights(n + m);
  weights.head(n).setConstant(sys.weight_u);
  weights.tail(m).setConstant(sys.weight_w);
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(m + 1);
  e1[0] = 1.0;
  return admm_weighted_ball(op, e1, 0.0, weights, opts);
}

}  // namespace pocs

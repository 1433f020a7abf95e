#include "pocs/solver.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pocs {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr int kMaxPivots = 20000;

// Dense tableau with Bland's rule (smallest eligible index enters, smallest
// basic index leaves on ratio ties), which rules out cycling.
class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& cols, const Eigen::VectorXd& rhs)
      : rows_(cols.rows()), structural_(cols.cols()) {
    t_.resize(rows_, structural_ + rows_ + 1);
    t_.leftCols(structural_) = cols;
    t_.middleCols(structural_, rows_).setIdentity();
    t_.col(structural_ + rows_) = rhs;
    basis_.resize(rows_);
    for (Index i = 0; i < rows_; ++i) {
      if (t_(i, structural_ + rows_) < 0.0) t_.row(i) = -t_.row(i);
      basis_[i] = structural_ + i;
    }
  }

  // Minimizes cost over the current feasible region; cost covers structural
  // and artificial columns. Returns the attained objective value.
  double run(const Eigen::VectorXd& cost, Index eligible) {
    Eigen::RowVectorXd reduced = cost.transpose();
    double objective = 0.0;
    for (Index i = 0; i < rows_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb != 0.0) {
        reduced -= cb * t_.row(i).head(cost.size());
        objective += cb * rhs(i);
      }
    }
    for (int pivots = 0; pivots < kMaxPivots; ++pivots) {
      Index enter = -1;
      for (Index j = 0; j < eligible; ++j) {
        if (reduced[j] < -kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return objective;

      Index leave = -1;
      double best_ratio = 0.0;
      for (Index i = 0; i < rows_; ++i) {
        if (t_(i, enter) <= kPivotTol) continue;
        const double ratio = rhs(i) / t_(i, enter);
        if (leave < 0 || ratio < best_ratio - kPivotTol ||
            (std::abs(ratio - best_ratio) <= kPivotTol && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave < 0) throw std::runtime_error("lp_oracle: unbounded objective");

      pivot(leave, enter);
      objective = 0.0;
      reduced = cost.transpose();
      for (Index i = 0; i < rows_; ++i) {
        const double cb = cost[basis_[i]];
        if (cb != 0.0) {
          reduced -= cb * t_.row(i).head(cost.size());
          objective += cb * rhs(i);
        }
      }
    }
    throw std::runtime_error("lp_oracle: pivot limit exceeded");
  }

  // Pivots artificial variables out of the basis; rows that cannot be
  // repaired are redundant constraints and get dropped.
  void drop_artificials() {
    std::vector<Index> keep;
    for (Index i = 0; i < rows_; ++i) {
      if (basis_[i] < structural_) {
        keep.push_back(i);
        continue;
      }
      Index enter = -1;
      for (Index j = 0; j < structural_; ++j) {
        if (std::abs(t_(i, j)) > kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter >= 0) {
        pivot(i, enter);
        keep.push_back(i);
      }
    }
    if (static_cast<Index>(keep.size()) != rows_) {
      Eigen::MatrixXd pruned(static_cast<Index>(keep.size()), t_.cols());
      std::vector<Index> pruned_basis;
      for (Index r = 0; r < static_cast<Index>(keep.size()); ++r) {
        pruned.row(r) = t_.row(keep[static_cast<size_t>(r)]);
        pruned_basis.push_back(basis_[keep[static_cast<size_t>(r)]]);
      }
      t_ = pruned;
      basis_ = pruned_basis;
      rows_ = t_.rows();
    }
  }

  Eigen::VectorXd structural_solution() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(structural_);
    for (Index i = 0; i < rows_; ++i)
      if (basis_[i] < structural_) x[basis_[i]] = rhs(i);
    return x;
  }

  Index structural() const { return structural_; }
  Index artificial_base() const { return structural_; }
  Index total_columns() const { return t_.cols() - 1; }

 private:
  double rhs(Index i) const { return t_(i, t_.cols() - 1); }

  void pivot(Index row, Index col) {
    t_.row(row) /= t_(row, col);
    for (Index i = 0; i < rows_; ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[row] = col;
  }

  Index rows_;
  Index structural_;
  Eigen::MatrixXd t_;
  std::vector<Index> basis_;
};

}  // namespace

// Exact reference for min sum_j weights_j |u_j| s.t. A u = y at desk scale,
// via the split u = p - q, p, q >= 0. Deliberately independent of the ADMM
// path so the two can cross-check each other.
Eigen::VectorXd lp_oracle(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& weights) {
  const Index r = A.rows();
  const Index c = A.cols();
  if (y.size() != r) throw std::invalid_argument("lp_oracle: dimension mismatch");
  if (weights.size() != c) throw std::invalid_argument("lp_oracle: weights size mismatch");
  if (r + c > 40) throw std::invalid_argument("lp_oracle: instance exceeds desk-scale cap");
  if ((weights.array() < 0.0).any())
    throw std::invalid_argument("lp_oracle: weights must be nonnegative");

  Eigen::MatrixXd cols(r, 2 * c);
  cols.leftCols(c) = A;
  cols.rightCols(c) = -A;
  Tableau tab(cols, y);

  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(tab.total_columns());
  phase1.tail(r).setOnes();
  const double infeas = tab.run(phase1, tab.total_columns());
  if (infeas > 1e-7) throw std::runtime_error("lp_oracle: infeasible system");
  tab.drop_artificials();

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(tab.total_columns());
  phase2.head(c) = weights;
  phase2.segment(c, c) = weights;
  tab.run(phase2, tab.structural());

  const Eigen::VectorXd pq = tab.structural_solution();
  return pq.head(c) - pq.tail(c);
}

}  // namespace pocs

#include "pocs/recovery.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <variant>

namespace pocs {
namespace {

constexpr double kDegenerateNorm = 1e-9;

double corruption_radius(double zeta0) {
  if (zeta0 < 0.0) throw std::invalid_argument("epsilon_for: zeta0 must be nonnegative");
  if (zeta0 == 0.0) return 0.0;  // k = 0 convention: the log term vanishes
  return 11.0 * zeta0 * std::log(std::numbers::e / zeta0);
}

double theorem_radius(const Channel& channel, const ProblemShape& shape,
                      const CombinedEpsilonConstants& c) {
  if (std::holds_alternative<Clean>(channel)) return 0.0;
  if (const auto* post = std::get_if<PostSignDense>(&channel)) return 2.5 * post->tau0;
  if (const auto* pre = std::get_if<PreSignDense>(&channel)) return 4.0 * pre->tau0;
  if (const auto* cor = std::get_if<SparseCorruption>(&channel))
    return corruption_radius(cor->zeta0);
  const auto& comb = std::get<Combined>(channel);
  if (shape.n <= 0 || shape.m <= 0 || shape.s <= 0)
    throw std::invalid_argument("epsilon_for: combined radius needs the problem shape");
  const double en_over_s =
      std::numbers::e * static_cast<double>(shape.n) / static_cast<double>(shape.s);
  const double sample = std::sqrt(static_cast<double>(shape.s) * std::log(en_over_s) /
                                  static_cast<double>(shape.m));
  double corruption = 0.0;
  if (comb.zeta0 > 0.0)
    corruption = std::sqrt(comb.zeta0 * std::log(std::numbers::e / comb.zeta0));
  return c.c_tau * comb.tau0 + c.c_corruption * corruption + c.c_sample * sample;
}

}  // namespace

double epsilon_for(const Channel& channel, EpsilonMode mode, const ProblemShape& shape,
                   const CombinedEpsilonConstants& constants, const SensingMatrix* phi,
                   const SignalVector* truth, const Eigen::VectorXcd* z_breve) {
  if (mode == EpsilonMode::kTheorem) return theorem_radius(channel, shape, constants);
  if (phi == nullptr || truth == nullptr || z_breve == nullptr)
    throw std::invalid_argument("epsilon_for: oracle mode needs phi, the true signal, and z");
  const LinearizedSystem sys = build_linearized(*z_breve, *phi);
  const GroundTruth gt = ground_truth_scaled(*phi, *truth);
  return residual(sys, gt.x_star);
}

RecoveryResult recover(const SensingMatrix& phi, const ObservedPhases& observed, int s,
                       EpsilonMode mode, const SignalVector* truth, const SolverOptions& opts,
                       const CombinedEpsilonConstants& constants) {
  if (s < 1) throw std::invalid_argument("recover: sparsity level must be positive");
  const ProblemShape shape{phi.cols(), phi.rows(), s};
  const double eps = epsilon_for(observed.channel, mode, shape, constants, &phi, truth,
                                 &observed.values);

  const LinearizedSystem sys = build_linearized(observed.values, phi, eps);
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(sys.rows());
  e1[0] = 1.0;

  RecoveryResult out;
  out.epsilon_used = eps;
  out.solve = qcbp(sys.A, e1, eps, opts);
  out.x_hat = out.solve.solution;
  const double nrm = out.x_hat.norm();
  if (nrm > kDegenerateNorm) {
    out.x_sharp = out.x_hat / nrm;
  } else {
    out.x_sharp = Eigen::VectorXd::Zero(out.x_hat.size());
    out.degenerate = true;
  }
  if (truth != nullptr) {
    out.residual_at_truth = residual(sys, ground_truth_scaled(phi, *truth).x_star);
    out.l2_error = (out.x_sharp - truth->values).norm();
  }
  return out;
}

RecoveryResult recover_extended(const SensingMatrix& phi, const ObservedPhases& observed, int s,
                                double zeta0, const SignalVector* truth,
                                const SolverOptions& opts) {
  if (s < 1) throw std::invalid_argument("recover_extended: sparsity level must be positive");
  const Index m = phi.rows();
  if (corruption_count(zeta0, m) < 1)
    return recover(phi, observed, s, EpsilonMode::kTheorem, truth, opts);

  const ExtendedSystem sys = build_extended(observed.values, phi, s, zeta0);
  const Index n = phi.cols();

  RecoveryResult out;
  out.epsilon_used = 0.0;
  out.solve = weighted_bp_equality(sys, opts);
  out.x_hat = out.solve.solution.head(n);
  out.corruption_block = out.solve.solution.tail(m);
  const double nrm = out.x_hat.norm();
  if (nrm > kDegenerateNorm) {
    out.x_sharp = out.x_hat / nrm;
  } else {
    out.x_sharp = Eigen::VectorXd::Zero(n);
    out.degenerate = true;
  }
  if (truth != nullptr) {
    out.l2_error = (out.x_sharp - truth->values).norm();
    // The stacked ground truth needs the realized corruption vector; it is
    // recorded by the sparse-corruption channel and absent otherwise.
    if (const auto* cor = std::get_if<SparseCorruption>(&observed.channel);
        cor != nullptr && cor->zeta.has_value()) {
      const ExtendedGroundTruth gt =
          ground_truth_extended(phi, *truth, observed.values, *cor->zeta);
      Eigen::VectorXd stacked(n + m);
      stacked.head(n) = gt.x_star_star;
      stacked.tail(m) = gt.x_zeta;
      out.residual_at_truth = residual(sys, stacked);
    }
  }
  return out;
}

}  // namespace pocs

#pragma once

#include <optional>

#include "pocs/linearization.hpp"
#include "pocs/measurement.hpp"
#include "pocs/solver.hpp"
#include "pocs/types.hpp"

namespace pocs {

// How the constraint radius for the basis-pursuit program is chosen.
//   kTheorem: channel-specific closed forms (see epsilon_for).
//   kOracle:  the exact residual of the scaled ground truth, which requires
//             knowing the true signal; used to probe the best achievable
//             radius in experiments.
enum class EpsilonMode { kTheorem, kOracle };

// Constants for the combined channel radius
//   c_tau * tau0 + c_corruption * sqrt(zeta0 log(e/zeta0)) + c_sample * sqrt(s log(en/s) / m).
// Defaults follow the single-channel rules where each term appears alone.
struct CombinedEpsilonConstants {
  double c_tau = 4.0;
  double c_corruption = 11.0;
  double c_sample = 3.0;
};

struct ProblemShape {
  Index n = 0;
  Index m = 0;
  int s = 0;
};

struct RecoveryResult {
  Eigen::VectorXd x_hat;    // raw basis-pursuit solution (u-block if extended)
  Eigen::VectorXd x_sharp;  // normalized estimate; zero vector when degenerate
  double epsilon_used = 0.0;
  bool degenerate = false;  // x_hat vanished, x_sharp left at zero
  std::optional<double> residual_at_truth;  // ||A x_star - e1|| when truth known
  std::optional<double> l2_error;           // ||x_sharp - x|| when truth known
  std::optional<Eigen::VectorXd> corruption_block;  // w-block of the extended program
  SolveReport solve;
};

// Closed-form constraint radius for a channel under the theorem rules:
// clean 0, post-sign 5 tau0 / 2, pre-sign 4 tau0, sparse corruption
// 11 zeta0 log(e / zeta0) (0 when zeta0 = 0), combined per the constants
// above. Oracle mode instead returns residual(A_zbreve, x_star) exactly and
// needs phi, the true signal, and the observed phases.
double epsilon_for(const Channel& channel, EpsilonMode mode, const ProblemShape& shape,
                   const CombinedEpsilonConstants& constants = {},
                   const SensingMatrix* phi = nullptr, const SignalVector* truth = nullptr,
                   const Eigen::VectorXcd* z_breve = nullptr);

// Full pipeline: build A_zbreve from the observed phases, pick epsilon from
// the channel tag, solve the quadratically constrained program, normalize.
// Supplying the true signal fills l2_error / residual_at_truth and enables
// oracle mode.
RecoveryResult recover(const SensingMatrix& phi, const ObservedPhases& observed, int s,
                       EpsilonMode mode = EpsilonMode::kTheorem,
                       const SignalVector* truth = nullptr, const SolverOptions& opts = {},
                       const CombinedEpsilonConstants& constants = {});

// Corruption-aware pipeline: solve the weighted equality program on the
// extended system and normalize the u-block. When ceil(zeta0 m) = 0 the
// extended system is undefined and this falls back to recover().
RecoveryResult recover_extended(const SensingMatrix& phi, const ObservedPhases& observed, int s,
                                double zeta0, const SignalVector* truth = nullptr,
                                const SolverOptions& opts = {});

}  // namespace pocs

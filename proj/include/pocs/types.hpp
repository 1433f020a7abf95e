#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <variant>
#include <vector>

namespace pocs {

using Complex = std::complex<double>;
using Index = Eigen::Index;

// kappa = sqrt(pi/2), the mean modulus of a standard complex Gaussian;
// it normalizes the first row of the linearized system so that
// ||Phi x||_1 / (kappa m) concentrates at 1 on the unit sphere.
inline const double kKappa = std::sqrt(std::numbers::pi / 2.0);

// Complex Gaussian sensing matrix.  Row i holds the measurement functional
// applied to the signal, i.e. (phi * x)(i) is the i-th measurement.
struct SensingMatrix {
  Eigen::MatrixXcd phi;
  std::uint64_t seed = 0;  // provenance; 0 for explicitly constructed matrices

  Index rows() const { return phi.rows(); }
  Index cols() const { return phi.cols(); }
};

struct SignalVector {
  Eigen::VectorXd values;
  std::optional<int> sparsity;  // set when drawn as an s-sparse signal
};

enum class CorruptionMechanism { kLargestRotateI, kExplicit };

struct PostSignDense {
  double tau0 = 0.0;
};

struct PreSignDense {
  double tau0 = 0.0;
};

struct SparseCorruption {
  double zeta0 = 0.0;
  CorruptionMechanism mechanism = CorruptionMechanism::kLargestRotateI;
  std::optional<Eigen::VectorXcd> zeta;  // realized corruption, zero off-support
};

struct Combined {
  double tau0 = 0.0;
  double zeta0 = 0.0;
};

using NoiseSpec =
    std::variant<PostSignDense, PreSignDense, SparseCorruption, Combined>;

struct Clean {};

// Channel tag carried by observations: how the vector was produced.
using Channel =
    std::variant<Clean, PostSignDense, PreSignDense, SparseCorruption, Combined>;

// The four components a combined channel actually drew, kept so a run can be
// replayed or audited stage by stage.  Sparse components are stored as full
// vectors, zero off their supports.
struct CombinedComponents {
  Eigen::VectorXcd tau_pre;
  Eigen::VectorXcd zeta_pre;
  Eigen::VectorXcd tau_post;
  Eigen::VectorXcd zeta_post;
};

struct ObservedPhases {
  Eigen::VectorXcd values;
  Channel channel = Clean{};
  std::optional<std::vector<Index>> corruption_support;
  std::optional<CombinedComponents> components;
};

}  // namespace pocs

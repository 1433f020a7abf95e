#pragma once

#include "pocs/rng.hpp"
#include "pocs/types.hpp"

namespace pocs {

// Entries i.i.d. N(0,1) + N(0,1)i, independent real and imaginary parts,
// drawn in row-major order so the layout is part of the determinism contract.
SensingMatrix draw_sensing_matrix(Index m, Index n, std::uint64_t seed);

// Uniform draw from the s-sparse unit sphere: uniform support, i.i.d.
// Gaussian coefficients, normalized.
SignalVector draw_sparse_signal(Index n, int s, Rng& rng);

// Normalized power-law signal x_i proportional to i^{-q}, randomly signed
// and permuted.  The compressible test family for instance optimality.
SignalVector draw_power_law_signal(Index n, double q, Rng& rng);

// c / |c| with sign(0) = 1 by convention; moduli below 1e-300 count as zero
// so the division cannot overflow.
Complex phase(Complex c);
Eigen::VectorXcd phase(const Eigen::VectorXcd& v);

// z = sign(Phi x), entrywise phases of the measurements.
ObservedPhases observe(const SensingMatrix& phi, const SignalVector& x);

// Global rotation e^{i theta0} z with theta0 = 2 arcsin(tau0 / 2), so the
// entrywise distance |e^{i theta0} - 1| equals tau0 exactly.  Requires
// tau0 <= sqrt(2) for theta0 to exist in [0, pi/2].
ObservedPhases apply_post_sign_dense(const ObservedPhases& z, double tau0);

// zbreve_i = sign(Phi_i^* x + tau0 * i * sign(Phi_i^* x)): the implied
// pre-sign noise vector has entrywise modulus exactly tau0.
ObservedPhases apply_pre_sign_dense(const SensingMatrix& phi,
                                    const SignalVector& x, double tau0);

// ceil(zeta0 * m) with a one-ulp guard so integer grids expressed as k/m do
// not round up through floating error.
Index corruption_count(double zeta0, Index m);

// largest-rotate-i: the k = ceil(zeta0 m) entries with largest |Phi_i^* x|
// become i * z_i (ties broken toward the lowest index).  explicit: a caller
// zeta with ||zeta||_0 <= k and ||zeta||_inf <= 2 is added to z.
ObservedPhases apply_sparse_corruption(const SensingMatrix& phi,
                                       const SignalVector& x,
                                       const ObservedPhases& z, double zeta0,
                                       CorruptionMechanism mechanism,
                                       const Eigen::VectorXcd* explicit_zeta = nullptr);

// zbreve = sign(Phi x + tau1 + zeta1) + tau2 + zeta2.  Dense components are
// tau0 times a fresh unit phase per entry; corruption supports (size
// ceil(zeta0 m) each) are disjoint, drawn by rejection; zeta1 spikes have
// modulus 2 and zeta2 replaces the affected phase with a fresh unit phase,
// so ||zeta2||_inf <= 2 holds structurally.  All four components are logged.
ObservedPhases compose_combined(const SensingMatrix& phi, const SignalVector& x,
                                double tau0, double zeta0, Rng& rng);

enum class AdversaryMode { kPre, kPost };

struct AdversaryPair {
  bool feasible = false;
  Eigen::VectorXd x_prime;
  double tau_star = 0.0;
  double l2_distance = 0.0;        // ||x' - x||_2
  double phi_linf_distance = 0.0;  // ||Phi (x' - x)||_inf
  double sign_linf_distance = 0.0; // ||sign(Phi x') - sign(Phi x)||_inf
  Index small_set_size = 0;        // |J_{x, s/(4m)}|, post mode only
};

// Nearly indistinguishable second signal x' = (x + delta) / ||x + delta||_2.
// delta lives on the support of x (padded to s coordinates), is orthogonal
// to x, and has norm tau* = tau0 / (6 sqrt(log m)) in pre mode or
// tau0 / (48 C0 log(en/s) sqrt(log m)) with C0 = m / (s log(en/s)) in post
// mode; post mode additionally zeroes Phi_i^* delta on the small-measurement
// set J_{x, s/(4m)}.  Reports infeasible when the restricted constraint
// system has no nonzero null vector instead of fabricating a direction.
AdversaryPair construct_indistinguishable_pair(const SensingMatrix& phi,
                                               const SignalVector& x,
                                               double tau0, AdversaryMode mode,
                                               Rng& rng);

}  // namespace pocs

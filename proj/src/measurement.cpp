#include "pocs/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace pocs {
namespace {

const Complex kI(0.0, 1.0);

Index draw_index(Rng& rng, Index bound) {
  const auto idx = static_cast<Index>(rng.uniform() * static_cast<double>(bound));
  return std::min(idx, bound - 1);
}

// k distinct indices in [0, m), uniform without replacement, rejecting
// anything already in `taken`.  Appends the new indices to `taken`.
std::vector<Index> sample_disjoint(Rng& rng, Index m, Index k,
                                   std::vector<Index>& taken) {
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(k));
  while (static_cast<Index>(out.size()) < k) {
    const Index idx = draw_index(rng, m);
    if (std::find(taken.begin(), taken.end(), idx) != taken.end()) continue;
    taken.push_back(idx);
    out.push_back(idx);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Index> support_of(const Eigen::VectorXd& x) {
  std::vector<Index> sup;
  for (Index i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) sup.push_back(i);
  return sup;
}

}  // namespace

SensingMatrix draw_sensing_matrix(Index m, Index n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw std::invalid_argument("draw_sensing_matrix: m and n must be positive");
  SensingMatrix out;
  out.phi.resize(m, n);
  out.seed = seed;
  Rng rng(seed);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) out.phi(i, j) = rng.gaussian_complex();
  return out;
}

SignalVector draw_sparse_signal(Index n, int s, Rng& rng) {
  if (n < 1 || s < 1 || s > n) throw std::invalid_argument("draw_sparse_signal: need 1 <= s <= n");
  // Partial Fisher-Yates: the first s slots become the support.
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  for (Index i = 0; i < s; ++i) {
    const Index j = i + draw_index(rng, n - i);
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  SignalVector x;
  x.values = Eigen::VectorXd::Zero(n);
  for (Index i = 0; i < s; ++i) x.values[idx[static_cast<std::size_t>(i)]] = rng.gaussian();
  const double nrm = x.values.norm();
  if (nrm == 0.0) return draw_sparse_signal(n, s, rng);  // measure-zero redraw
  x.values /= nrm;
  x.sparsity = s;
  return x;
}

SignalVector draw_power_law_signal(Index n, double q, Rng& rng) {
  if (n < 1 || q < 0.0) throw std::invalid_argument("draw_power_law_signal: need n >= 1, q >= 0");
  Eigen::VectorXd mags(n);
  for (Index i = 0; i < n; ++i) mags[i] = std::pow(static_cast<double>(i + 1), -q);
  // Random signs, then a full permutation so the decay has no preferred slots.
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  for (Index i = n - 1; i > 0; --i) {
    const Index j = draw_index(rng, i + 1);
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  SignalVector x;
  x.values.resize(n);
  for (Index i = 0; i < n; ++i) {
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    x.values[perm[static_cast<std::size_t>(i)]] = sign * mags[i];
  }
  x.values /= x.values.norm();
  return x;
}

Complex phase(Complex c) {
  const double mod = std::abs(c);
  if (mod < 1e-300) return Complex(1.0, 0.0);
  return c / mod;
}

Eigen::VectorXcd phase(const Eigen::VectorXcd& v) {
  Eigen::VectorXcd out(v.size());
  for (Index i = 0; i < v.size(); ++i) out[i] = phase(v[i]);
  return out;
}

ObservedPhases observe(const SensingMatrix& phi, const SignalVector& x) {
  if (x.values.size() != phi.cols())
    throw std::invalid_argument("observe: signal length does not match sensing matrix");
  ObservedPhases z;
  z.values = phase(Eigen::VectorXcd(phi.phi * x.values.cast<Complex>()));
  z.channel = Clean{};
  return z;
}

ObservedPhases apply_post_sign_dense(const ObservedPhases& z, double tau0) {
  if (tau0 < 0.0 || tau0 > std::sqrt(2.0))
    throw std::invalid_argument("apply_post_sign_dense: need 0 <= tau0 <= sqrt(2)");
  const double theta0 = 2.0 * std::asin(tau0 / 2.0);
  ObservedPhases out;
  out.values = z.values * std::exp(kI * theta0);
  out.channel = PostSignDense{tau0};
  return out;
}

ObservedPhases apply_pre_sign_dense(const SensingMatrix& phi,
                                    const SignalVector& x, double tau0) {
  if (tau0 < 0.0) throw std::invalid_argument("apply_pre_sign_dense: need tau0 >= 0");
  if (x.values.size() != phi.cols())
    throw std::invalid_argument("apply_pre_sign_dense: dimension mismatch");
  const Eigen::VectorXcd w = phi.phi * x.values.cast<Complex>();
  ObservedPhases out;
  out.values.resize(w.size());
  for (Index i = 0; i < w.size(); ++i)
    out.values[i] = phase(w[i] + tau0 * kI * phase(w[i]));
  out.channel = PreSignDense{tau0};
  return out;
}

Index corruption_count(double zeta0, Index m) {
  if (zeta0 < 0.0 || zeta0 > 1.0)
    throw std::invalid_argument("corruption_count: need 0 <= zeta0 <= 1");
  const double k = std::ceil(zeta0 * static_cast<double>(m) - 1e-9);
  return std::max(Index{0}, static_cast<Index>(k));
}

ObservedPhases apply_sparse_corruption(const SensingMatrix& phi,
                                       const SignalVector& x,
                                       const ObservedPhases& z, double zeta0,
                                       CorruptionMechanism mechanism,
                                       const Eigen::VectorXcd* explicit_zeta) {
  const Index m = phi.rows();
  if (z.values.size() != m) throw std::invalid_argument("apply_sparse_corruption: dimension mismatch");
  const Index k = corruption_count(zeta0, m);

  ObservedPhases out;
  out.values = z.values;
  std::vector<Index> support;

  if (mechanism == CorruptionMechanism::kLargestRotateI) {
    const Eigen::VectorXd mods = (phi.phi * x.values.cast<Complex>()).cwiseAbs();
    std::vector<Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Index{0});
    // Largest modulus first; ties go to the lowest index.
    std::partial_sort(order.begin(), order.begin() + k, order.end(),
                      [&](Index a, Index b) {
                        if (mods[a] != mods[b]) return mods[a] > mods[b];
                        return a < b;
                      });
    support.assign(order.begin(), order.begin() + k);
    std::sort(support.begin(), support.end());
    Eigen::VectorXcd zeta = Eigen::VectorXcd::Zero(m);
    for (Index i : support) {
      out.values[i] = kI * z.values[i];
      zeta[i] = out.values[i] - z.values[i];  // modulus sqrt(2), within the budget
    }
    out.channel = SparseCorruption{zeta0, mechanism, std::move(zeta)};
  } else {
    if (explicit_zeta == nullptr || explicit_zeta->size() != m)
      throw std::invalid_argument("apply_sparse_corruption: explicit mechanism needs a zeta of length m");
    Index nonzeros = 0;
    for (Index i = 0; i < m; ++i) {
      const double mod = std::abs((*explicit_zeta)[i]);
      if (mod == 0.0) continue;
      ++nonzeros;
      if (mod > 2.0 + 1e-12)
        throw std::invalid_argument("apply_sparse_corruption: explicit zeta entry exceeds modulus 2");
      support.push_back(i);
    }
    if (nonzeros > k)
      throw std::invalid_argument("apply_sparse_corruption: explicit zeta denser than ceil(zeta0 m)");
    out.values += *explicit_zeta;
    out.channel = SparseCorruption{zeta0, mechanism, *explicit_zeta};
  }
  out.corruption_support = std::move(support);
  return out;
}

ObservedPhases compose_combined(const SensingMatrix& phi, const SignalVector& x,
                                double tau0, double zeta0, Rng& rng) {
  if (tau0 < 0.0) throw std::invalid_argument("compose_combined: need tau0 >= 0");
  const Index m = phi.rows();
  const Index k = corruption_count(zeta0, m);
  if (2 * k > m)
    throw std::invalid_argument("compose_combined: disjoint supports need 2*ceil(zeta0 m) <= m");

  Rng tau1_rng = rng.stream(1);
  Rng zeta1_rng = rng.stream(2);
  Rng tau2_rng = rng.stream(3);
  Rng zeta2_rng = rng.stream(4);
  Rng support_rng = rng.stream(5);

  CombinedComponents comp;
  comp.tau_pre.resize(m);
  comp.tau_post.resize(m);
  comp.zeta_pre = Eigen::VectorXcd::Zero(m);
  comp.zeta_post = Eigen::VectorXcd::Zero(m);
  for (Index i = 0; i < m; ++i) comp.tau_pre[i] = tau0 * tau1_rng.unit_phase();
  for (Index i = 0; i < m; ++i) comp.tau_post[i] = tau0 * tau2_rng.unit_phase();

  std::vector<Index> taken;
  const std::vector<Index> sup_pre = sample_disjoint(support_rng, m, k, taken);
  const std::vector<Index> sup_post = sample_disjoint(support_rng, m, k, taken);

  // Pre-sign spikes: the corruption model bounds only the post-sign stage,
  // so modulus 2 mirrors that bound and keeps both stages comparable.
  for (Index i : sup_pre) comp.zeta_pre[i] = 2.0 * zeta1_rng.unit_phase();

  const Eigen::VectorXcd w = phi.phi * x.values.cast<Complex>();
  const Eigen::VectorXcd mid = phase(Eigen::VectorXcd(w + comp.tau_pre + comp.zeta_pre));

  // Post-sign corruption replaces the phase itself with a fresh unit phase;
  // the logged difference then has modulus at most 2 structurally.
  for (Index i : sup_post) comp.zeta_post[i] = zeta2_rng.unit_phase() - mid[i];

  ObservedPhases out;
  out.values = mid + comp.tau_post + comp.zeta_post;
  out.channel = Combined{tau0, zeta0};
  std::vector<Index> support = sup_pre;
  support.insert(support.end(), sup_post.begin(), sup_post.end());
  std::sort(support.begin(), support.end());
  out.corruption_support = std::move(support);
  out.components = std::move(comp);
  return out;
}

AdversaryPair construct_indistinguishable_pair(const SensingMatrix& phi,
                                               const SignalVector& x,
                                               double tau0, AdversaryMode mode,
                                               Rng& rng) {
  const Index m = phi.rows();
  const Index n = phi.cols();
  if (x.values.size() != n) throw std::invalid_argument("construct_indistinguishable_pair: dimension mismatch");
  if (tau0 < 0.0) throw std::invalid_argument("construct_indistinguishable_pair: need tau0 >= 0");
  if (m < 2) throw std::invalid_argument("construct_indistinguishable_pair: need m >= 2");
  const int s = x.sparsity.value_or(static_cast<int>(support_of(x.values).size()));
  if (mode == AdversaryMode::kPost && s < 4)
    throw std::invalid_argument("construct_indistinguishable_pair: post mode needs s >= 4");

  std::vector<Index> sup = support_of(x.values);
  if (static_cast<int>(sup.size()) > s)
    throw std::invalid_argument("construct_indistinguishable_pair: |supp(x)| exceeds s");
  // Pad the support to s coordinates (lowest unused indices) so delta has
  // room; |supp(delta) union supp(x)| stays <= s.
  for (Index i = 0; i < n && static_cast<int>(sup.size()) < s; ++i)
    if (x.values[i] == 0.0) sup.push_back(i);
  std::sort(sup.begin(), sup.end());
  const auto t = static_cast<Index>(sup.size());

  AdversaryPair out;

  const double logm = std::log(static_cast<double>(m));
  double tau_star = 0.0;
  if (mode == AdversaryMode::kPre) {
    tau_star = tau0 / (6.0 * std::sqrt(logm));
  } else {
    const double len = std::log(std::numbers::e * static_cast<double>(n) / s);
    const double c0 = static_cast<double>(m) / (s * len);
    tau_star = tau0 / (48.0 * c0 * len * std::sqrt(logm));
  }
  out.tau_star = tau_star;

  Eigen::VectorXd xs(t);
  for (Index i = 0; i < t; ++i) xs[i] = x.values[sup[static_cast<std::size_t>(i)]];

  Eigen::VectorXd delta_s;
  if (mode == AdversaryMode::kPre) {
    if (t < 2) return out;  // no orthogonal direction inside the support
    for (int attempt = 0; attempt < 8; ++attempt) {
      Eigen::VectorXd g(t);
      for (Index i = 0; i < t; ++i) g[i] = rng.gaussian();
      Eigen::VectorXd cand = g - g.dot(xs) * xs;
      if (cand.norm() > 1e-10 * g.norm()) {
        delta_s = cand;
        break;
      }
    }
    if (delta_s.size() == 0) return out;
  } else {
    const double eta = static_cast<double>(s) / (4.0 * static_cast<double>(m));
    std::vector<Index> small_set;
    const Eigen::VectorXd mods = (phi.phi * x.values.cast<Complex>()).cwiseAbs();
    for (Index i = 0; i < m; ++i)
      if (mods[i] <= eta) small_set.push_back(i);
    out.small_set_size = static_cast<Index>(small_set.size());

    Eigen::MatrixXd constraints(1 + 2 * static_cast<Index>(small_set.size()), t);
    constraints.row(0) = xs.transpose();
    for (std::size_t j = 0; j < small_set.size(); ++j) {
      for (Index c = 0; c < t; ++c) {
        const Complex entry = phi.phi(small_set[j], sup[static_cast<std::size_t>(c)]);
        constraints(1 + 2 * static_cast<Index>(j), c) = entry.real();
        constraints(2 + 2 * static_cast<Index>(j), c) = entry.imag();
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(constraints);
    if (lu.dimensionOfKernel() == 0) return out;  // report, do not fabricate
    const Eigen::MatrixXd kernel = lu.kernel();
    for (int attempt = 0; attempt < 8; ++attempt) {
      Eigen::VectorXd g(kernel.cols());
      for (Index i = 0; i < kernel.cols(); ++i) g[i] = rng.gaussian();
      Eigen::VectorXd cand = kernel * g;
      if (cand.norm() > 1e-10) {
        delta_s = cand;
        break;
      }
    }
    if (delta_s.size() == 0) return out;
  }

  delta_s *= tau_star / delta_s.norm();
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(n);
  for (Index i = 0; i < t; ++i) delta[sup[static_cast<std::size_t>(i)]] = delta_s[i];

  out.feasible = true;
  out.x_prime = (x.values + delta) / (x.values + delta).norm();
  out.l2_distance = (out.x_prime - x.values).norm();
  const Eigen::VectorXcd diff = phi.phi * (out.x_prime - x.values).cast<Complex>();
  out.phi_linf_distance = diff.cwiseAbs().maxCoeff();
  const Eigen::VectorXcd za = phase(Eigen::VectorXcd(phi.phi * x.values.cast<Complex>()));
  const Eigen::VectorXcd zb = phase(Eigen::VectorXcd(phi.phi * out.x_prime.cast<Complex>()));
  out.sign_linf_distance = (za - zb).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace pocs

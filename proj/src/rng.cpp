#include "pocs/rng.hpp"

#include <cmath>
#include <numbers>

namespace pocs {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer (Stafford mix13 variant).
std::uint64_t mix(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

}  // namespace

Rng Rng::stream(std::uint64_t id) const {
  return Rng(mix(state_ ^ mix(id + kGolden)));
}

std::uint64_t Rng::next_u64() {
  state_ += kGolden;
  return mix(state_);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] keeps the log finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

std::complex<double> Rng::gaussian_complex() {
  const double re = gaussian();
  const double im = gaussian();
  return {re, im};
}

std::complex<double> Rng::unit_phase() {
  const double theta = 2.0 * std::numbers::pi * uniform();
  return {std::cos(theta), std::sin(theta)};
}

std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> path) {
  std::uint64_t key = mix(base + kGolden);
  for (std::uint64_t id : path) key = mix(key ^ mix(id + kGolden));
  return key;
}

}  // namespace pocs

#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>

namespace pocs {

// Counter-based SplitMix64 stream.  The generator state is a plain 64-bit
// counter advanced by the golden-ratio increment; every output is the
// finalizer applied to the counter, so draw k of a stream can be reproduced
// in isolation and streams with distinct keys never share a counter orbit
// for any practical draw count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Child stream keyed off this stream's current state and `id`.
  // Derivation is a one-way mix, so siblings are independent.
  Rng stream(std::uint64_t id) const;

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double uniform();

  // Standard normal via Box-Muller; the paired variate is cached.
  double gaussian();

  // Standard complex Gaussian: independent N(0,1) real and imaginary parts.
  std::complex<double> gaussian_complex();

  // e^{i theta} with theta uniform on [0, 2 pi).
  std::complex<double> unit_phase();

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Key for the stream addressed by (base, path...).  Used to give every
// (grid point, trial) pair its own independent generator.
std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> path);

}  // namespace pocs

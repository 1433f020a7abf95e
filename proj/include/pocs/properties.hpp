#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pocs {

// One property-suite verdict.  `value` is the observed extreme that decided
// it: the worst violation for inequality suites, the frequency for the
// census suite.
struct PropertyResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
};

// The five randomized property suites behind the selftest subcommand and the
// acceptance gate: scalar phase perturbation, vector normalization,
// linearity of the linearized matrix, sampled-vs-exhaustive isometry
// distortion, and the small-measurement census.  Deterministic given seed.
std::vector<PropertyResult> run_property_suites(std::uint64_t seed);

}  // namespace pocs

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "oneid/instance.hpp"
#include "oneid/rng.hpp"

namespace oneid {

struct BaselineOptions {
  double delta = 0.1;
  std::uint64_t safety_cap = 100'000'000;
};

struct BaselineOutcome {
  bool terminated = false;            // false: safety cap hit
  std::optional<std::size_t> answer;  // nullopt = None
  std::uint64_t tau = 0;
  std::vector<std::uint64_t> arm_draws;
  std::uint64_t seed = 0;
};

// Round-robin over all arms with the anytime radius at per-arm tolerance
// delta' / K, delta' = 6 delta / pi^2. After each draw, stops with the drawn
// arm if its lower bound exceeds mu0, or with None once every upper bound is
// below mu0. The pi^2/6 correction pays for the union over phases of the
// radius, so the output is wrong with probability at most delta.
BaselineOutcome uniform_lil_baseline(const BanditInstance& instance,
                                     const BaselineOptions& options, RngStream rng);

}  // namespace oneid

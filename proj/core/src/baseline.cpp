#include "oneid/baseline.hpp"

#include <numbers>
#include <stdexcept>

#include "oneid/confidence.hpp"

namespace oneid {

BaselineOutcome uniform_lil_baseline(const BanditInstance& instance,
                                     const BaselineOptions& options, RngStream rng) {
  require_simulatable(instance);
  if (!(options.delta > 0.0 && options.delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  const std::size_t k = instance.num_arms();
  const double per_arm = 6.0 * options.delta / (std::numbers::pi * std::numbers::pi) /
                         static_cast<double>(k);
  const double mu0 = instance.mu0();

  BaselineOutcome out;
  out.seed = rng.seed();
  out.arm_draws.assign(k, 0);
  std::vector<double> sums(k, 0.0);
  std::vector<bool> below(k, false);
  std::size_t below_count = 0;

  for (std::size_t a = 0;; a = (a + 1) % k) {
    if (out.tau >= options.safety_cap) return out;
    sums[a] += sample(instance, a, rng);
    const std::uint64_t n = ++out.arm_draws[a];
    ++out.tau;
    const double mean = sums[a] / static_cast<double>(n);
    const double u = radius(n, per_arm);
    if (mean - u > mu0) {
      out.terminated = true;
      out.answer = a;
      return out;
    }
    const bool now_below = mean + u < mu0;
    if (now_below != below[a]) {
      below[a] = now_below;
      below_count += now_below ? 1 : std::size_t(-1);
    }
    if (below_count == k) {
      out.terminated = true;
      return out;
    }
  }
}

}  // namespace oneid

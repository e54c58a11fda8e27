#include "oneid/pseeb.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace oneid {

namespace {
// Substream ids inside one trial.
constexpr std::uint64_t kPermutationStream = 0;
constexpr std::uint64_t kCopyStreamBase = 1;
}  // namespace

std::size_t num_brackets(std::size_t num_arms) {
  if (num_arms < 2) throw std::invalid_argument("need at least two arms");
  return static_cast<std::size_t>(std::bit_width(num_arms - 1)) + 1;
}

BracketSet brackets_from_permutation(std::vector<std::size_t> permutation) {
  const std::size_t k = permutation.size();
  const std::size_t count = num_brackets(k);
  std::vector<bool> seen(k, false);
  for (std::size_t a : permutation) {
    if (a >= k || seen[a]) throw std::invalid_argument("not a permutation of [0, K)");
    seen[a] = true;
  }
  BracketSet set;
  set.brackets.reserve(count);
  for (std::size_t b = 1; b <= count; ++b) {
    const std::size_t size = std::min<std::size_t>(std::size_t{1} << (b - 1), k);
    set.brackets.emplace_back(permutation.begin(),
                              permutation.begin() + static_cast<std::ptrdiff_t>(size));
  }
  set.permutation = std::move(permutation);
  return set;
}

BracketSet build_brackets(std::size_t num_arms, RngStream& rng) {
  if (num_arms < 2) throw std::invalid_argument("need at least two arms");
  std::vector<std::size_t> perm(num_arms);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = num_arms - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.next_below(i + 1));
    std::swap(perm[i], perm[j]);
  }
  return brackets_from_permutation(std::move(perm));
}

std::size_t min_qualified_bracket(const BracketSet& brackets,
                                  std::span<const std::size_t> arms) {
  const std::size_t k = brackets.permutation.size();
  if (arms.empty()) throw std::invalid_argument("target arm set is empty");
  std::vector<bool> target(k, false);
  for (std::size_t a : arms) {
    if (a >= k) throw std::invalid_argument("target arm out of range");
    target[a] = true;
  }
  // Brackets are prefixes, so the first hit position determines the bracket.
  std::size_t pos = 0;
  while (!target[brackets.permutation[pos]]) ++pos;
  for (std::size_t b = 1; b <= brackets.count(); ++b) {
    if (pos < brackets.bracket(b).size()) return b;
  }
  return brackets.count();
}

std::size_t min_qualified_bracket(const BracketSet& brackets, const BanditInstance& instance,
                                  std::size_t j) {
  if (j < 1 || j > instance.num_arms()) throw std::invalid_argument("rank j out of range");
  const auto order = instance.arms_by_mean();
  return min_qualified_bracket(brackets, std::span(order).first(j));
}

PseebOutcome pseeb_run(const BanditInstance& instance, const PseebOptions& options,
                       RngStream rng) {
  require_simulatable(instance);
  if (!(options.delta > 0.0 && options.delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  if (!(options.c > 1.0)) throw std::invalid_argument("C must be greater than 1");

  const std::size_t k = instance.num_arms();
  RngStream perm_rng = rng.substream(kPermutationStream);
  BracketSet set = build_brackets(k, perm_rng);
  const std::size_t copies = set.count();

  SeeConfig config;
  config.mu0 = instance.mu0();
  config.delta = options.delta / static_cast<double>(copies);
  config.c = options.c;
  config.num_arms = k;
  config.check_invariants = options.check_invariants;

  std::vector<SeeEngine> engines;
  std::vector<RngStream> streams;
  engines.reserve(copies);
  streams.reserve(copies);
  for (std::size_t b = 1; b <= copies; ++b) {
    engines.emplace_back(set.bracket(b), config);
    streams.push_back(rng.substream(kCopyStreamBase + b));
    if (options.trace) engines.back().set_trace(options.trace, static_cast<int>(b));
  }

  PseebOutcome out;
  out.seed = rng.seed();
  out.permutation = set.permutation;
  out.arm_draws.assign(k, 0);

  auto collect = [&]() {
    out.copy_draws.clear();
    out.copy_steps.clear();
    out.tau = 0;
    for (const auto& e : engines) {
      out.copy_draws.push_back(e.draws());
      out.copy_steps.push_back(e.steps());
      out.tau += e.draws();
      out.invariants.merge(e.invariants());
    }
    return out;
  };

  std::uint64_t total = 0;
  for (std::uint64_t round = 1;; ++round) {
    out.rounds = round;
    for (std::size_t b = 0; b < copies; ++b) {
      const StepOutcome step = engines[b].step(instance, streams[b]);
      if (step.drawn_arm) {
        ++out.arm_draws[*step.drawn_arm];
        ++total;
      }
      if (step.terminated()) {
        out.status = PseebOutcome::Status::Terminated;
        out.answer = step.answer;
        out.winning_bracket = b + 1;
        return collect();
      }
      if (step.failed()) {
        out.status = PseebOutcome::Status::Failed;
        out.failure = step.reason + " in bracket " + std::to_string(b + 1);
        return collect();
      }
      if (total > options.safety_cap) {
        out.status = PseebOutcome::Status::CapExceeded;
        out.failure = "safety cap exceeded";
        return collect();
      }
    }
  }
}

}  // namespace oneid

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oneid/confidence.hpp"
#include "oneid/instance.hpp"
#include "oneid/rng.hpp"
#include "oneid/see_engine.hpp"

namespace oneid {

// ceil(log2 K) + 1.
std::size_t num_brackets(std::size_t num_arms);

// Nested prefixes of a single permutation: bracket b (1-based) holds the
// first min(2^(b-1), K) entries.
struct BracketSet {
  std::vector<std::size_t> permutation;
  std::vector<std::vector<std::size_t>> brackets;

  std::size_t count() const noexcept { return brackets.size(); }
  // 1-based, matching the bracket numbering above.
  const std::vector<std::size_t>& bracket(std::size_t b) const { return brackets.at(b - 1); }
};

// Throws std::invalid_argument unless `permutation` is a bijection on [0, K), K >= 2.
BracketSet brackets_from_permutation(std::vector<std::size_t> permutation);

// Uniform permutation (Fisher-Yates) drawn from `rng`.
BracketSet build_brackets(std::size_t num_arms, RngStream& rng);

// Smallest 1-based bracket index whose bracket meets `arms`. Throws
// std::invalid_argument if `arms` is empty or contains an index >= K.
std::size_t min_qualified_bracket(const BracketSet& brackets, std::span<const std::size_t> arms);

// Same with the top-j arms (by descending mean) of `instance`; 1 <= j <= K.
std::size_t min_qualified_bracket(const BracketSet& brackets, const BanditInstance& instance,
                                  std::size_t j);

struct PseebOptions {
  double delta = 0.1;
  // Values close to 1 inflate the exploitation budget as (C-1)^-2.
  double c = kDefaultC;
  std::uint64_t safety_cap = 100'000'000;
  bool check_invariants = false;
  // Optional per-step trace of every copy (newline-delimited JSON).
  std::ostream* trace = nullptr;
};

struct PseebOutcome {
  enum class Status { Terminated, CapExceeded, Failed };

  Status status = Status::Terminated;
  std::optional<std::size_t> answer;  // nullopt = None
  std::uint64_t tau = 0;               // fresh draws over all copies
  std::size_t winning_bracket = 0;     // 1-based, 0 if none terminated
  std::uint64_t rounds = 0;
  std::vector<std::uint64_t> copy_draws;
  std::vector<std::uint64_t> copy_steps;
  std::vector<std::uint64_t> arm_draws;
  std::vector<std::size_t> permutation;
  std::uint64_t seed = 0;
  std::string failure;
  InvariantReport invariants;

  bool terminated() const noexcept { return status == Status::Terminated; }
};

// Round-robin over one SEE copy per bracket, each with tolerance
// delta / num_brackets(K) and the global K. Copy b draws from its own
// substream of `rng`; the first copy to terminate, in (round, bracket) order,
// decides the answer. Throws std::invalid_argument for Boundary instances,
// delta outside (0, 1) or C <= 1.
PseebOutcome pseeb_run(const BanditInstance& instance, const PseebOptions& options,
                       RngStream rng);

}  // namespace oneid

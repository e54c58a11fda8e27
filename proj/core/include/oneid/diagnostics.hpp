#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oneid/rng.hpp"

namespace oneid {

// exp(-j floor(2^(b-2)) / K); equals 1 at b = 1.
double bracket_tail_bound(std::size_t num_arms, std::size_t j, std::size_t b);

struct BracketTailRow {
  std::size_t b = 0;                // threshold bracket index, 1-based
  double empirical = 0.0;           // Monte Carlo Pr(b_j >= b)
  double std_error = 0.0;
  std::optional<double> exact;      // full enumeration, K <= kExactBracketArms only
  double bound = 0.0;
};

inline constexpr std::size_t kExactBracketArms = 7;

// Pr(b_j >= b) for b = 1..num_brackets(K), by enumerating all K! orders.
// Throws std::invalid_argument for K > kExactBracketArms or j outside [1, K].
std::vector<double> exact_bracket_tail(std::size_t num_arms, std::size_t j);

// One row per b. The top-j set is taken as arms {0, ..., j-1}; by symmetry
// of a uniform permutation the distribution of b_j does not depend on which
// j arms are chosen.
std::vector<BracketTailRow> bracket_stats(std::size_t num_arms, std::size_t j,
                                          std::uint64_t samples, RngStream rng);

struct ConcentrationReport {
  double delta = 0.0;
  std::uint64_t streams = 0;
  std::uint64_t horizon = 0;
  std::uint64_t violations = 0;
  double fraction = 0.0;
  double bound = 0.0;      // pi^2 delta / 6
  double std_error = 0.0;  // binomial standard error at p = min(bound, 1)
  bool passed = false;     // fraction <= bound + 3 std_error
};

// Unit Gaussian partial-sum paths checked against |S_t| < t U(t, delta)
// for every t <= horizon. Throws std::invalid_argument for horizon < 2.
ConcentrationReport concentration_check(double delta, std::uint64_t streams,
                                        std::uint64_t horizon, RngStream rng);

struct MaximalCell {
  std::uint64_t n = 0;
  double scale = 0.0;  // standard deviation of each increment
  double z = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t exceed = 0;
  double frequency = 0.0;
  double bound = 0.0;  // exp(-z^2 / (2 n scale^2))
  double std_error = 0.0;
  bool passed = false;
};

// Pr(max_{t <= n} S_t >= z) against its exponential bound on a fixed
// (n, scale, z) grid, `trials` paths per cell.
std::vector<MaximalCell> maximal_inequality_check(std::uint64_t trials, RngStream rng);

struct ThresholdCheckReport {
  std::uint64_t tuples = 0;
  std::uint64_t failures = 0;
  std::string first_failure;
};

// Random (gap, K, delta, C, t) with the sample-size predicate true; counts
// the tuples where the implied radius bound is not below the gap.
ThresholdCheckReport lil_threshold_check(std::uint64_t tuples, RngStream rng);

}  // namespace oneid

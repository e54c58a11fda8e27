#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace oneid {

// Two-sided 95% normal quantile.
inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// Wilson score interval for a binomial proportion; [0, 1] when n = 0.
Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z = kZ95);

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double std_error = 0.0;  // sample sd / sqrt(n); 0 for n < 2
  double median = 0.0;
  double max = 0.0;
};

SampleSummary summarize(std::span<const double> values);

// Ordinary least-squares slope of y on x. Throws std::invalid_argument for
// fewer than two points or constant x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

// sqrt(p (1 - p) / n).
double binomial_std_error(double p, std::uint64_t n);

}  // namespace oneid

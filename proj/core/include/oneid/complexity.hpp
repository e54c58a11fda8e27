#pragma once

#include <cstddef>
#include <vector>

#include "oneid/instance.hpp"

namespace oneid {

// Gap-based hardness measures of an instance. Any quantity whose defining
// gap is zero is +infinity; `has_infinite` is set when that happens.
struct ComplexityProfile {
  // (K+1) x (K+1) table of |value(i) - value(j)| on extended indices,
  // row-major, index 0 = threshold.
  std::vector<double> gaps;
  std::size_t num_arms = 0;

  // Arms sorted by descending mean; sorted_arms[r] is the original index of
  // the arm with rank r (0-based).
  std::vector<std::size_t> sorted_arms;

  double h1_neg = 0.0;  // sum_a 2 / gap(0,a)^2
  double h1_low = 0.0;  // sum over arms below mu0 of 2 / gap(best,a)^2
  double h = 0.0;       // 2 / gap(0,best)^2
  double h1 = 0.0;      // sum over non-best ranks of 2 / gap(best,a)^2
  double h0 = 0.0;      // sum over arms with mean >= mu0 of 2 / gap(0,a)^2
  double h_u = 0.0;     // (K/m - 1) / delta_min^2

  // h_of_j[j-1] = (1/j) sum_a 1 / max(gap(j,a)^2, gap(a,0)^2) for ranks j in [m].
  std::vector<double> h_of_j;

  std::size_t m = 0;
  // Smallest gap to the threshold among arms strictly above it; +inf if none.
  double delta_min = 0.0;
  bool has_infinite = false;

  double gap(std::size_t i, std::size_t j) const { return gaps[i * (num_arms + 1) + j]; }
  double h_of(std::size_t j) const { return h_of_j.at(j - 1); }
};

ComplexityProfile complexity_terms(const BanditInstance& instance);

// Per-arm summand 1 / max(gap(j,a)^2, gap(a,0)^2) of H(j), with j the
// original index of a ranked arm and a any arm. Shared by the bounds module.
double h_summand(const BanditInstance& instance, std::size_t j, std::size_t a);

}  // namespace oneid

#include "oneid/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oneid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// c / g^2, infinite when g is zero.
double inv_sq(double c, double g) { return g == 0.0 ? kInf : c / (g * g); }

}  // namespace

double h_summand(const BanditInstance& instance, std::size_t j, std::size_t a) {
  const double d_ja = std::abs(instance.mean(j) - instance.mean(a));
  const double d_a0 = std::abs(instance.mean(a) - instance.mu0());
  return inv_sq(1.0, std::max(d_ja, d_a0));
}

ComplexityProfile complexity_terms(const BanditInstance& instance) {
  ComplexityProfile p;
  const std::size_t k = instance.num_arms();
  const double mu0 = instance.mu0();
  p.num_arms = k;
  p.gaps.resize((k + 1) * (k + 1));
  for (std::size_t i = 0; i <= k; ++i) {
    for (std::size_t j = 0; j <= k; ++j) {
      p.gaps[i * (k + 1) + j] = oneid::gap(instance, i, j);
    }
  }

  // All sums run in rank order so that permuting the arms leaves every
  // value bit-identical.
  p.sorted_arms = instance.arms_by_mean();
  const auto& order = p.sorted_arms;
  const double best = instance.mean(order.front());

  p.m = classify(instance).m;
  p.h = inv_sq(2.0, best - mu0);
  p.delta_min = kInf;
  for (std::size_t r = 0; r < k; ++r) {
    const double mu = instance.mean(order[r]);
    p.h1_neg += inv_sq(2.0, mu - mu0);
    if (mu < mu0) p.h1_low += inv_sq(2.0, best - mu);
    if (r > 0) p.h1 += inv_sq(2.0, best - mu);
    if (mu >= mu0) p.h0 += inv_sq(2.0, mu - mu0);
    if (mu > mu0) p.delta_min = std::min(p.delta_min, mu - mu0);
  }
  if (p.m == 0) {
    p.h_u = kInf;
  } else {
    p.h_u = (static_cast<double>(k) / static_cast<double>(p.m) - 1.0) /
            (p.delta_min * p.delta_min);
  }

  p.h_of_j.resize(p.m);
  for (std::size_t j = 1; j <= p.m; ++j) {
    double sum = 0.0;
    for (std::size_t r = 0; r < k; ++r) sum += h_summand(instance, order[j - 1], order[r]);
    p.h_of_j[j - 1] = sum / static_cast<double>(j);
  }

  for (double v : {p.h1_neg, p.h1_low, p.h, p.h1, p.h0, p.h_u}) {
    if (std::isinf(v)) p.has_infinite = true;
  }
  for (double v : p.h_of_j) {
    if (std::isinf(v)) p.has_infinite = true;
  }
  return p;
}

}  // namespace oneid

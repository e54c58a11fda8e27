#include "oneid/confidence.hpp"

#include <bit>
#include <cmath>
#include <limits>

namespace oneid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("confidence level delta must lie in (0, 1)");
  }
}

}  // namespace

int dyadic_exponent(std::uint64_t t) {
  if (t == 0) throw std::invalid_argument("dyadic exponent undefined for t = 0");
  // ceil(log2 t) is the bit width of t - 1.
  const int e = static_cast<int>(std::bit_width(t - 1));
  return e < 1 ? 1 : e;
}

double lil_envelope(std::uint64_t t, double delta) {
  check_delta(delta);
  if (t == 0) return kInf;
  const int e = dyadic_exponent(t);
  const double two_e = std::ldexp(1.0, e);
  const double e2 = static_cast<double>(e) * static_cast<double>(e);
  return std::sqrt(2.0 * two_e * std::log(2.0 * e2 / delta));
}

double envelope_log(int e, double log_inv_delta) {
  const double two_e = std::ldexp(1.0, e);
  const double e2 = static_cast<double>(e) * static_cast<double>(e);
  return std::sqrt(2.0 * two_e * (std::log(2.0 * e2) + log_inv_delta));
}

double radius_log(std::uint64_t t, double log_inv_delta) {
  if (!(log_inv_delta > 0.0)) throw std::invalid_argument("ln(1/delta) must be positive");
  if (t == 0) return kInf;
  return envelope_log(dyadic_exponent(t), log_inv_delta) / static_cast<double>(t);
}

double radius(std::uint64_t t, double delta) {
  check_delta(delta);
  if (t == 0) return kInf;
  return lil_envelope(t, delta) / static_cast<double>(t);
}

double bound(BoundKind kind, double mean, std::uint64_t t, double delta, double c) {
  const double r = radius(t, delta);
  switch (kind) {
    case BoundKind::ExplorationUcb:
    case BoundKind::ExploitUcb:
      return mean + r;
    case BoundKind::ExplorationLcb:
      return mean - c * r;
    case BoundKind::ExploitLcb:
      return mean - r;
  }
  return mean;
}

PhaseParams phase_params(int k) {
  if (k < 1) throw std::invalid_argument("phase index starts at 1");
  if (k > kMaxPhase) throw ScheduleOverflow(k);
  const double kd = static_cast<double>(k);
  return {k, std::pow(3.0, -kd), std::ldexp(1.0, k), std::pow(5.0, kd), kd * std::log(3.0),
          kd * std::log(5.0)};
}

double exploration_budget(int k, std::size_t num_arms, double c) {
  const PhaseParams p = phase_params(k);
  return (c + 1.0) * (c + 1.0) * p.beta_k *
         (std::log(4.0 * static_cast<double>(num_arms)) + p.log_inv_delta_k);
}

double exploitation_budget(int k, std::size_t num_arms, double delta, double c) {
  check_delta(delta);
  const PhaseParams p = phase_params(k);
  const double ratio = (c + 3.0) * (c + 3.0) / ((c - 1.0) * (c - 1.0));
  return ratio * p.beta_k *
         (std::log(4.0 * static_cast<double>(num_arms) / delta) + p.log_alpha_k);
}

double lil_threshold(double gap, std::size_t num_arms, double delta, double c) {
  const double c2 = c * c;
  const double g2 = gap * gap;
  return 28.0 * c2 * std::log(2.0 * static_cast<double>(num_arms) / delta) / g2 +
         16.0 * c2 * std::log(std::log(24.0 * c2 / g2)) / g2;
}

bool lil_threshold_sufficient(double t, double gap, std::size_t num_arms, double delta,
                              double c) {
  return t > lil_threshold(gap, num_arms, delta, c);
}

double lil_radius_bound(double t, std::size_t num_arms, double delta, double c) {
  const double l = std::log2(2.0 * t);
  return c * std::sqrt(4.0 * std::log(2.0 * static_cast<double>(num_arms) * l * l / delta) / t);
}

}  // namespace oneid

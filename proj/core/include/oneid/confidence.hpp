#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace oneid {

// Highest phase index the schedule will produce. A copy whose bracket holds
// only arms below the threshold, and which may not answer None, climbs
// phases without drawing until its radii grow past the threshold; the index
// then grows roughly in proportion to that copy's draw count. Schedule
// arithmetic is done in log space, and this cap only stops a runaway loop.
inline constexpr int kMaxPhase = 1 << 30;

// Default tuning constant for the exploration lower bound.
inline constexpr double kDefaultC = 1.01;

class ScheduleOverflow : public std::runtime_error {
 public:
  explicit ScheduleOverflow(int phase)
      : std::runtime_error("phase schedule overflow at phase " + std::to_string(phase)),
        phase_(phase) {}
  int phase() const noexcept { return phase_; }

 private:
  int phase_;
};

// e(t) = max(ceil(log2 t), 1). Throws std::invalid_argument for t = 0.
int dyadic_exponent(std::uint64_t t);

// Anytime confidence radius
//   U(t, delta) = sqrt(2 * 2^e(t) * ln(2 e(t)^2 / delta)) / t,
// +infinity for t = 0. Throws std::invalid_argument unless 0 < delta < 1.
double radius(std::uint64_t t, double delta);

// t * U(t, delta): the envelope on |partial sum| at time t.
double lil_envelope(std::uint64_t t, double delta);

// U(t, delta) with the tolerance given as ln(1/delta) > 0, for tolerances
// below the smallest double.
double radius_log(std::uint64_t t, double log_inv_delta);

// sqrt(2 * 2^e * (ln(2 e^2) + log_inv_delta)): the numerator of radius_log
// for every t with dyadic_exponent(t) = e. Dividing it by t reproduces
// radius_log bit for bit.
double envelope_log(int e, double log_inv_delta);

enum class BoundKind { ExplorationUcb, ExplorationLcb, ExploitUcb, ExploitLcb };

// mean +/- U(t, delta); only ExplorationLcb scales the radius by `c`.
// `delta` is the per-arm tolerance (callers divide by K themselves).
// t = 0 yields +inf for upper and -inf for lower bounds.
double bound(BoundKind kind, double mean, std::uint64_t t, double delta, double c = 1.0);

struct PhaseParams {
  int k;
  double delta_k;  // 3^-k, 0 once it underflows
  double beta_k;   // 2^k, +inf once it overflows
  double alpha_k;  // 5^k, +inf once it overflows
  double log_inv_delta_k;  // k ln 3
  double log_alpha_k;      // k ln 5
};

// Throws std::invalid_argument for k < 1 and ScheduleOverflow for k > kMaxPhase.
PhaseParams phase_params(int k);

// (C+1)^2 beta_k ln(4K / delta_k). Arms are eligible while N <= budget - 1.
double exploration_budget(int k, std::size_t num_arms, double c);

// (C+3)^2 / (C-1)^2 beta_k ln(4K alpha_k / delta).
double exploitation_budget(int k, std::size_t num_arms, double delta, double c);

// Sample size beyond which the LIL radius (with union over K arms) is
// guaranteed below gap:
//   28 C^2 ln(2K/delta) / gap^2 + 16 C^2 ln(ln(24 C^2 / gap^2)) / gap^2.
double lil_threshold(double gap, std::size_t num_arms, double delta, double c);
bool lil_threshold_sufficient(double t, double gap, std::size_t num_arms, double delta,
                              double c);

// C * sqrt(4 ln(2K (log2 2t)^2 / delta) / t), the quantity the threshold controls.
double lil_radius_bound(double t, std::size_t num_arms, double delta, double c);

}  // namespace oneid

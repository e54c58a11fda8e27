#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "oneid/instance.hpp"

namespace oneid {

// All evaluators here are constant-free: the hidden Omega/O constants of the
// asymptotic statements are not applied.

// The scale factor relating the program value to the expected sample count.
inline constexpr double kProgramScale = 1.0 / 3200.0;

// min over ranks j in [m] of ln(1/delta)/gap(j,0)^2 + H(j)/ln^2(m+1).
// Throws std::invalid_argument for non-positive instances or delta outside (0, 1).
double closed_form_lower_bound(const BanditInstance& instance, double delta);

// p / (1 + ln(1/p)), extended by continuity with 0 at p = 0.
double damped_mass(double p);

// The lower-bound program over probabilities p_j (one per qualified rank):
//   minimize v  s.t.  0 <= p_j <= 1, v >= 0, sum_j p_j >= 1/2,
//                     v >= sum_j p_j ln(1/delta) / gap(j,0)^2,
//                     v >= S_j * damped_mass(p_j)  for each j,
// with S_j = sum_a 1 / max(gap(a,0)^2, gap(a,j)^2). Eliminating v leaves
// the convex objective objective(p) = max of the right-hand sides.
class LowerBoundProgram {
 public:
  LowerBoundProgram(const BanditInstance& instance, double delta);
  LowerBoundProgram(std::vector<double> confidence_weights, std::vector<double> spreads);

  std::size_t size() const noexcept { return weights_.size(); }
  // ln(1/delta) / gap(j,0)^2, indexed by rank j-1.
  std::span<const double> confidence_weights() const noexcept { return weights_; }
  // S_j, indexed by rank j-1.
  std::span<const double> spreads() const noexcept { return spreads_; }

  double mass_constraint(std::span<const double> p) const;    // the C3 right-hand side
  double spread_constraint(std::size_t j, double pj) const;   // the C5 right-hand side, 0-based j
  double objective(std::span<const double> p) const;
  // A subgradient of objective at p (gradient of one active piece).
  std::vector<double> subgradient(std::span<const double> p) const;

  bool feasible(std::span<const double> p, double tol = 1e-12) const;

  // Euclidean projection onto {p in [0,1]^m : sum p >= 1/2}.
  static std::vector<double> project(std::span<const double> p);

 private:
  std::vector<double> weights_;
  std::vector<double> spreads_;
};

struct SolverOptions {
  int restarts = 10;
  int iterations = 10'000;
  // Step at iteration i is step_scale / sqrt(i) along the normalized subgradient.
  double step_scale = 0.25;
  std::uint64_t seed = 0x5eed;
};

struct LowerBoundReport {
  double closed_form = 0.0;
  double program_value = 0.0;       // v*
  std::vector<double> argmin;       // p*, by rank
  double dual_value = 0.0;          // gamma0 / 4
  double lagrangian_value = 0.0;    // exact dual function at the same point
  // Per rank j: (ln(1/delta)/gap(j,0)^2, H(j)/ln^2(m+1)).
  std::vector<std::pair<double, double>> per_j_terms;
  bool converged = true;
  // delta < min(1e-8, 1/(64 m^2)), the regime where the asymptotic statement applies.
  bool delta_in_theory_regime = false;
  std::size_t m = 0;

  double scaled_program_value() const noexcept { return program_value * kProgramScale; }
};

// Projected subgradient descent with random restarts; deterministic for a
// given seed. `converged` is cleared when the two best restarts disagree by
// more than 1% relative.
LowerBoundReport solve_lb_program(const BanditInstance& instance, double delta,
                                  const SolverOptions& options = {});

// Minimizer of `program` by the same method; returns (value, argmin).
std::pair<double, std::vector<double>> minimize_program(const LowerBoundProgram& program,
                                                        const SolverOptions& options = {});

// gamma0 / 4 for the explicit dual point alpha0 = 1/2,
// beta0_j = (1/(2j)) / (2 sum_s 1/(2s)), where
// gamma0 = min_j [ ln(1/delta)/(2 gap(j,0)^2)
//                  + (1/(2j)) S_j / ((1 + ln(m+1)) (1 + ln 200 + ln m)) ].
double dual_feasible_value(const BanditInstance& instance, double delta);

// The Lagrangian of the program at the same dual point, minimized exactly
// over p in [0,1]^m and v >= 0 (one convex 1-D problem per rank). By weak
// duality it lies between dual_feasible_value and the program value.
double dual_point_lagrangian(const BanditInstance& instance, double delta);

// ceil(1 / (200 max(gap(j,0)^2, gap(a,j)^2) (1 + ln(1/p)))) with j a
// qualified rank in [1, m] and a any rank in [1, K] (ranks by descending
// mean). Throws std::invalid_argument for p outside (0, 1] or ranks out of range.
std::uint64_t t_j_a(const BanditInstance& instance, std::size_t j, std::size_t a, double p);

struct UpperBoundReport {
  // Per rank j: ln K [ln(1/delta)/gap(j,0)^2 + ln^3 K (ln 4K + log2(1/gap(j,0)^2)) H(j)].
  std::vector<double> positive_terms;
  double positive = 0.0;  // min of positive_terms; +inf when none is finite
  // ln K * H1_neg * ln(H1_neg / delta).
  double negative = 0.0;
  bool constants_omitted = true;
};

// Throws std::invalid_argument for Boundary instances. For a negative
// instance positive_terms is empty; for a positive one `negative` is the
// formula evaluated anyway (it is finite whenever no arm sits on mu0).
UpperBoundReport upper_bound_formula(const BanditInstance& instance, double delta);

}  // namespace oneid

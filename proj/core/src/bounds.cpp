#include "oneid/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "oneid/complexity.hpp"
#include "oneid/rng.hpp"

namespace oneid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
}

struct Ranked {
  std::vector<std::size_t> order;  // rank -> arm
  std::size_t m = 0;
};

Ranked rank_positive(const BanditInstance& instance) {
  const InstanceClass cls = classify(instance);
  if (cls.kind != InstanceKind::Positive) {
    throw std::invalid_argument("lower bounds are defined for positive instances only");
  }
  return {instance.arms_by_mean(), cls.m};
}

// S_j = sum_a 1 / max(gap(a,0)^2, gap(a,j)^2) for the arm at rank j.
double spread(const BanditInstance& instance, const Ranked& r, std::size_t rank0) {
  double s = 0.0;
  for (std::size_t a : r.order) s += h_summand(instance, r.order[rank0], a);
  return s;
}

double confidence_weight(const BanditInstance& instance, std::size_t arm, double delta) {
  const double g = instance.mean(arm) - instance.mu0();
  return std::log(1.0 / delta) / (g * g);
}

// d/dp [p / (1 + ln(1/p))] = 1/(1+L) + 1/(1+L)^2 with L = ln(1/p).
double damped_mass_slope(double p) {
  if (p <= 0.0) return 0.0;
  const double d = 1.0 + std::log(1.0 / p);
  return 1.0 / d + 1.0 / (d * d);
}

// Minimum of a convex function on [0, 1] by golden-section search, endpoints included.
template <class F>
double minimize_unit_interval(F&& f) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double hi = 1.0;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return std::min({f(0.0), f(1.0), f1, f2});
}

}  // namespace

double damped_mass(double p) {
  if (p <= 0.0) return 0.0;
  return p / (1.0 + std::log(1.0 / p));
}

double closed_form_lower_bound(const BanditInstance& instance, double delta) {
  check_delta(delta);
  const Ranked r = rank_positive(instance);
  const ComplexityProfile prof = complexity_terms(instance);
  const double l2 = std::pow(std::log(static_cast<double>(r.m) + 1.0), 2);
  double best = kInf;
  for (std::size_t j = 1; j <= r.m; ++j) {
    best = std::min(best, confidence_weight(instance, r.order[j - 1], delta) + prof.h_of(j) / l2);
  }
  return best;
}

LowerBoundProgram::LowerBoundProgram(const BanditInstance& instance, double delta) {
  check_delta(delta);
  const Ranked r = rank_positive(instance);
  for (std::size_t j = 0; j < r.m; ++j) {
    weights_.push_back(confidence_weight(instance, r.order[j], delta));
    spreads_.push_back(spread(instance, r, j));
  }
}

LowerBoundProgram::LowerBoundProgram(std::vector<double> confidence_weights,
                                     std::vector<double> spreads)
    : weights_(std::move(confidence_weights)), spreads_(std::move(spreads)) {
  if (weights_.empty() || weights_.size() != spreads_.size()) {
    throw std::invalid_argument("program needs matching, non-empty coefficient lists");
  }
}

double LowerBoundProgram::mass_constraint(std::span<const double> p) const {
  double v = 0.0;
  for (std::size_t j = 0; j < weights_.size(); ++j) v += weights_[j] * p[j];
  return v;
}

double LowerBoundProgram::spread_constraint(std::size_t j, double pj) const {
  return spreads_.at(j) * damped_mass(pj);
}

double LowerBoundProgram::objective(std::span<const double> p) const {
  double v = std::max(0.0, mass_constraint(p));
  for (std::size_t j = 0; j < spreads_.size(); ++j) v = std::max(v, spread_constraint(j, p[j]));
  return v;
}

std::vector<double> LowerBoundProgram::subgradient(std::span<const double> p) const {
  std::vector<double> g(weights_.size(), 0.0);
  double best = mass_constraint(p);
  std::size_t active = weights_.size();  // sentinel: the mass constraint
  for (std::size_t j = 0; j < spreads_.size(); ++j) {
    const double v = spread_constraint(j, p[j]);
    if (v > best) {
      best = v;
      active = j;
    }
  }
  if (active == weights_.size()) {
    g.assign(weights_.begin(), weights_.end());
  } else {
    g[active] = spreads_[active] * damped_mass_slope(p[active]);
  }
  return g;
}

bool LowerBoundProgram::feasible(std::span<const double> p, double tol) const {
  if (p.size() != weights_.size()) return false;
  double sum = 0.0;
  for (double x : p) {
    if (x < -tol || x > 1.0 + tol) return false;
    sum += x;
  }
  return sum >= 0.5 - tol;
}

std::vector<double> LowerBoundProgram::project(std::span<const double> p) {
  std::vector<double> out(p.size());
  auto shifted = [&](double lambda) {
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      out[i] = std::clamp(p[i] + lambda, 0.0, 1.0);
      sum += out[i];
    }
    return sum;
  };
  if (shifted(0.0) >= 0.5) return out;
  // The sum is nondecreasing in the shift; find the shift that lands on 1/2.
  double lo = 0.0;
  double hi = 1.0;
  for (double x : p) hi = std::max(hi, 1.0 - x);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (shifted(mid) < 0.5) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  shifted(hi);
  return out;
}

std::pair<double, std::vector<double>> minimize_program(const LowerBoundProgram& program,
                                                        const SolverOptions& options) {
  const std::size_t m = program.size();
  RngStream rng(options.seed, 0x1b);
  std::vector<double> best_p(m, 0.5 / static_cast<double>(m));
  double best = program.objective(best_p);

  auto descend = [&](std::vector<double> p, double scale) {
    double run_best = program.objective(p);
    std::vector<double> run_p = p;
    for (int i = 1; i <= options.iterations; ++i) {
      // Drop the components the feasible set blocks before normalizing;
      // otherwise one large weight on a coordinate pinned at 0 shrinks the
      // step of every other coordinate. On the sum = 1/2 face the direction
      // is also centered so that it moves along the face.
      std::vector<double> g = program.subgradient(p);
      std::vector<bool> free(m);
      double sum = 0.0;
      double free_sum = 0.0;
      std::size_t free_count = 0;
      for (std::size_t j = 0; j < m; ++j) {
        free[j] = !((p[j] <= 0.0 && g[j] > 0.0) || (p[j] >= 1.0 && g[j] < 0.0));
        sum += p[j];
        if (free[j]) {
          free_sum += g[j];
          ++free_count;
        }
      }
      const bool on_face = sum <= 0.5 + 1e-12 && free_sum > 0.0;
      const double shift = on_face ? free_sum / static_cast<double>(free_count) : 0.0;
      double norm = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        g[j] = free[j] ? g[j] - shift : 0.0;
        norm += g[j] * g[j];
      }
      norm = std::sqrt(norm);
      if (norm <= 1e-300) break;
      const double step = scale / std::sqrt(static_cast<double>(i));
      for (std::size_t j = 0; j < m; ++j) p[j] -= step * g[j] / norm;
      p = LowerBoundProgram::project(p);
      const double v = program.objective(p);
      if (v < run_best) {
        run_best = v;
        run_p = p;
      }
    }
    return std::pair{run_best, run_p};
  };

  for (int r = 0; r < std::max(1, options.restarts); ++r) {
    std::vector<double> start(m);
    if (r == 0) {
      std::fill(start.begin(), start.end(), 0.5 / static_cast<double>(m));
    } else {
      for (double& x : start) x = rng.next_uniform();
      start = LowerBoundProgram::project(start);
    }
    auto [v, p] = descend(start, options.step_scale);
    if (v < best) {
      best = v;
      best_p = p;
    }
  }
  // Polish from the incumbent with a finer step.
  auto [v, p] = descend(best_p, options.step_scale * 0.02);
  if (v < best) {
    best = v;
    best_p = p;
  }
  return {best, best_p};
}

LowerBoundReport solve_lb_program(const BanditInstance& instance, double delta,
                                  const SolverOptions& options) {
  const LowerBoundProgram program(instance, delta);
  const Ranked r = rank_positive(instance);
  const ComplexityProfile prof = complexity_terms(instance);

  LowerBoundReport rep;
  rep.m = r.m;
  rep.closed_form = closed_form_lower_bound(instance, delta);
  rep.dual_value = dual_feasible_value(instance, delta);
  rep.lagrangian_value = dual_point_lagrangian(instance, delta);
  const double l2 = std::pow(std::log(static_cast<double>(r.m) + 1.0), 2);
  for (std::size_t j = 1; j <= r.m; ++j) {
    rep.per_j_terms.emplace_back(program.confidence_weights()[j - 1], prof.h_of(j) / l2);
  }
  const double m2 = static_cast<double>(r.m) * static_cast<double>(r.m);
  rep.delta_in_theory_regime = delta < std::min(1e-8, 1.0 / (64.0 * m2));

  // Two seeds so that `converged` compares independent searches.
  auto [v1, p1] = minimize_program(program, options);
  SolverOptions other = options;
  other.seed = mix64(options.seed);
  auto [v2, p2] = minimize_program(program, other);
  rep.converged = std::abs(v1 - v2) <= 0.01 * std::max(v1, v2);
  if (v2 < v1) {
    rep.program_value = v2;
    rep.argmin = std::move(p2);
  } else {
    rep.program_value = v1;
    rep.argmin = std::move(p1);
  }
  return rep;
}

double dual_feasible_value(const BanditInstance& instance, double delta) {
  check_delta(delta);
  const Ranked r = rank_positive(instance);
  const double m = static_cast<double>(r.m);
  const double denom = (1.0 + std::log(m + 1.0)) * (1.0 + std::log(200.0) + std::log(m));
  double gamma = kInf;
  for (std::size_t j = 1; j <= r.m; ++j) {
    const double jd = static_cast<double>(j);
    const double term = 0.5 * confidence_weight(instance, r.order[j - 1], delta) +
                        (1.0 / (2.0 * jd)) * spread(instance, r, j - 1) / denom;
    gamma = std::min(gamma, term);
  }
  return gamma / 4.0;
}

double dual_point_lagrangian(const BanditInstance& instance, double delta) {
  check_delta(delta);
  const Ranked r = rank_positive(instance);
  const std::size_t m = r.m;
  const double gamma = 4.0 * dual_feasible_value(instance, delta);
  const double alpha = 0.5;
  double harmonic = 0.0;
  for (std::size_t s = 1; s <= m; ++s) harmonic += 1.0 / (2.0 * static_cast<double>(s));
  // alpha + sum beta = 1, so the v term vanishes and the minimum separates by rank.
  double total = gamma / 2.0;
  for (std::size_t j = 1; j <= m; ++j) {
    const double beta = (1.0 / (2.0 * static_cast<double>(j))) / (2.0 * harmonic);
    const double w = confidence_weight(instance, r.order[j - 1], delta);
    const double s = spread(instance, r, j - 1);
    total += minimize_unit_interval(
        [&](double p) { return alpha * w * p + beta * s * damped_mass(p) - gamma * p; });
  }
  return total;
}

std::uint64_t t_j_a(const BanditInstance& instance, std::size_t j, std::size_t a, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in (0, 1]");
  const Ranked r = rank_positive(instance);
  if (j < 1 || j > r.m) throw std::invalid_argument("j must be a qualified rank");
  if (a < 1 || a > instance.num_arms()) throw std::invalid_argument("rank a out of range");
  const double mj = instance.mean(r.order[j - 1]);
  const double ma = instance.mean(r.order[a - 1]);
  const double gj0 = mj - instance.mu0();
  const double gaj = ma - mj;
  const double g2 = std::max(gj0 * gj0, gaj * gaj);
  return static_cast<std::uint64_t>(std::ceil(1.0 / (200.0 * g2 * (1.0 + std::log(1.0 / p)))));
}

UpperBoundReport upper_bound_formula(const BanditInstance& instance, double delta) {
  check_delta(delta);
  const InstanceClass cls = classify(instance);
  if (cls.kind == InstanceKind::Boundary) {
    throw std::invalid_argument("upper bounds are undefined for boundary instances");
  }
  const ComplexityProfile prof = complexity_terms(instance);
  const double k = static_cast<double>(instance.num_arms());
  const double lk = std::log(k);

  UpperBoundReport rep;
  rep.negative = lk * prof.h1_neg * std::log(prof.h1_neg / delta);
  rep.positive = kInf;
  for (std::size_t j = 1; j <= prof.m; ++j) {
    const double g = instance.mean(prof.sorted_arms[j - 1]) - instance.mu0();
    double term = kInf;
    if (g > 0.0) {
      const double g2 = g * g;
      term = lk * (std::log(1.0 / delta) / g2 +
                   lk * lk * lk * (std::log(4.0 * k) + std::log2(1.0 / g2)) * prof.h_of(j));
    }
    rep.positive_terms.push_back(term);
    rep.positive = std::min(rep.positive, term);
  }
  return rep;
}

}  // namespace oneid

#pragma once

// Independent reference implementations used only by tests. None of these
// call into the library's numerical code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

namespace oracle {

inline long double sq(long double x) { return x * x; }

// Means sorted descending (stable on ties).
inline std::vector<long double> sorted_desc(const std::vector<double>& means) {
  std::vector<long double> v(means.begin(), means.end());
  std::stable_sort(v.begin(), v.end(), [](long double a, long double b) { return a > b; });
  return v;
}

// (1/j) sum_a 1 / max(gap(j,a)^2, gap(a,0)^2), j a 1-based rank.
inline long double h_of_j(const std::vector<double>& means, double mu0, std::size_t j) {
  const auto v = sorted_desc(means);
  const long double mj = v[j - 1];
  long double s = 0;
  for (long double ma : v) s += 1.0L / std::max(sq(mj - ma), sq(ma - mu0));
  return s / static_cast<long double>(j);
}

// sum_a 1 / max(gap(a,0)^2, gap(a,j)^2), same as j * H(j).
inline long double spread(const std::vector<double>& means, double mu0, std::size_t j) {
  return h_of_j(means, mu0, j) * static_cast<long double>(j);
}

inline std::size_t count_above(const std::vector<double>& means, double mu0) {
  return static_cast<std::size_t>(
      std::count_if(means.begin(), means.end(), [&](double x) { return x > mu0; }));
}

// ceil(log2 t) by repeated doubling.
inline int ceil_log2(std::uint64_t t) {
  int e = 0;
  std::uint64_t p = 1;
  while (p < t) {
    p *= 2;
    ++e;
  }
  return e;
}

inline long double radius(std::uint64_t t, long double delta) {
  if (t == 0) return std::numeric_limits<long double>::infinity();
  const int e = std::max(ceil_log2(t), 1);
  const long double pow2 = std::pow(2.0L, static_cast<long double>(e));
  return std::sqrt(2.0L * pow2 * std::log(2.0L * e * e / delta)) / static_cast<long double>(t);
}

// Objective of the lower-bound program, written directly from its constraints.
struct Program {
  std::vector<long double> weights;  // ln(1/delta) / gap(j,0)^2
  std::vector<long double> spreads;  // sum_a 1/max(gap(a,0)^2, gap(a,j)^2)

  long double damped(long double p) const {
    return p <= 0 ? 0.0L : p / (1.0L + std::log(1.0L / p));
  }

  long double value(const std::vector<long double>& p) const {
    long double mass = 0;
    for (std::size_t j = 0; j < p.size(); ++j) mass += weights[j] * p[j];
    long double v = std::max(0.0L, mass);
    for (std::size_t j = 0; j < p.size(); ++j) v = std::max(v, spreads[j] * damped(p[j]));
    return v;
  }
};

inline Program make_program(const std::vector<double>& means, double mu0, double delta) {
  Program prog;
  const auto v = sorted_desc(means);
  const std::size_t m = count_above(means, mu0);
  for (std::size_t j = 1; j <= m; ++j) {
    prog.weights.push_back(std::log(1.0L / delta) / sq(v[j - 1] - mu0));
    prog.spreads.push_back(spread(means, mu0, j));
  }
  return prog;
}

// Minimum over the slice sum p = 1/2 (where the optimum lies, since every
// piece is nondecreasing in each p_j) on a grid of the given step; m <= 3.
inline long double grid_minimum(const Program& prog, long double step = 1e-3L) {
  const std::size_t m = prog.weights.size();
  const long double half = 0.5L;
  const auto n = static_cast<long>(std::llround(half / step));
  long double best = std::numeric_limits<long double>::infinity();
  if (m == 1) return prog.value({half});
  if (m == 2) {
    for (long i = 0; i <= n; ++i) {
      const long double p1 = i * step;
      best = std::min(best, prog.value({p1, half - p1}));
    }
    return best;
  }
  for (long i = 0; i <= n; ++i) {
    for (long k = 0; i + k <= n; ++k) {
      const long double p1 = i * step;
      const long double p2 = k * step;
      best = std::min(best, prog.value({p1, p2, std::max(0.0L, half - p1 - p2)}));
    }
  }
  return best;
}

// Exact Pr(b_j >= b) for the first-hit bracket of the top-j arms {0..j-1},
// by enumerating all permutations of K arms. b runs 1..ceil(log2 K)+1.
inline std::vector<long double> bracket_tail(std::size_t k, std::size_t j) {
  const std::size_t count = static_cast<std::size_t>(ceil_log2(k)) + 1;
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::uint64_t> at(count + 2, 0);
  std::uint64_t total = 0;
  do {
    std::size_t pos = 0;
    while (perm[pos] >= j) ++pos;
    // bracket b holds the first min(2^(b-1), K) entries
    std::size_t b = 1;
    while (b < count && pos >= (std::size_t{1} << (b - 1))) ++b;
    ++at[b];
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<long double> tail(count);
  for (std::size_t b = 1; b <= count; ++b) {
    std::uint64_t ge = 0;
    for (std::size_t c = b; c <= count; ++c) ge += at[c];
    tail[b - 1] = static_cast<long double>(ge) / static_cast<long double>(total);
  }
  return tail;
}

// Mean of the first n values, in long double.
inline long double prefix_mean(const std::vector<double>& xs, std::size_t n) {
  long double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += xs[i];
  return n ? s / static_cast<long double>(n) : 0.0L;
}

}  // namespace oracle

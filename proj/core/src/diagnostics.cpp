#include "oneid/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "format.hpp"
#include "oneid/confidence.hpp"
#include "oneid/pseeb.hpp"
#include "oneid/statistics.hpp"

namespace oneid {

namespace {

void check_rank(std::size_t num_arms, std::size_t j) {
  if (num_arms < 2) throw std::invalid_argument("need at least two arms");
  if (j < 1 || j > num_arms) throw std::invalid_argument("rank j out of range");
}

// Bracket index of the first top-j arm when it sits at permutation position `pos`.
std::size_t bracket_of_position(std::size_t pos, std::size_t count) {
  for (std::size_t b = 1; b <= count; ++b) {
    if (pos < (std::size_t{1} << (b - 1))) return b;
  }
  return count;
}

}  // namespace

double bracket_tail_bound(std::size_t num_arms, std::size_t j, std::size_t b) {
  if (b < 1) throw std::invalid_argument("bracket index starts at 1");
  const double floor_pow = b == 1 ? 0.0 : std::ldexp(1.0, static_cast<int>(b) - 2);
  return std::exp(-static_cast<double>(j) * floor_pow / static_cast<double>(num_arms));
}

std::vector<double> exact_bracket_tail(std::size_t num_arms, std::size_t j) {
  check_rank(num_arms, j);
  if (num_arms > kExactBracketArms) throw std::invalid_argument("too many arms to enumerate");
  const std::size_t count = num_brackets(num_arms);
  std::vector<std::size_t> perm(num_arms);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::size_t> top(j);
  std::iota(top.begin(), top.end(), std::size_t{0});
  std::vector<std::uint64_t> hits(count + 1, 0);
  std::uint64_t total = 0;
  do {
    const BracketSet set = brackets_from_permutation(perm);
    ++hits[min_qualified_bracket(set, top)];
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<double> tail(count);
  std::uint64_t at_least = total;
  for (std::size_t b = 1; b <= count; ++b) {
    tail[b - 1] = static_cast<double>(at_least) / static_cast<double>(total);
    at_least -= hits[b];
  }
  return tail;
}

std::vector<BracketTailRow> bracket_stats(std::size_t num_arms, std::size_t j,
                                          std::uint64_t samples, RngStream rng) {
  check_rank(num_arms, j);
  const std::size_t count = num_brackets(num_arms);
  std::vector<std::uint64_t> hits(count + 1, 0);
  std::vector<std::size_t> perm(num_arms);
  for (std::uint64_t s = 0; s < samples; ++s) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = num_arms - 1; i > 0; --i) {
      std::swap(perm[i], perm[static_cast<std::size_t>(rng.next_below(i + 1))]);
    }
    std::size_t pos = 0;
    while (perm[pos] >= j) ++pos;
    ++hits[bracket_of_position(pos, count)];
  }
  std::optional<std::vector<double>> exact;
  if (num_arms <= kExactBracketArms) exact = exact_bracket_tail(num_arms, j);

  std::vector<BracketTailRow> rows;
  std::uint64_t at_least = samples;
  for (std::size_t b = 1; b <= count; ++b) {
    BracketTailRow row;
    row.b = b;
    row.empirical = samples ? static_cast<double>(at_least) / static_cast<double>(samples) : 0.0;
    row.std_error = binomial_std_error(row.empirical, samples);
    if (exact) row.exact = (*exact)[b - 1];
    row.bound = bracket_tail_bound(num_arms, j, b);
    rows.push_back(row);
    at_least -= hits[b];
  }
  return rows;
}

ConcentrationReport concentration_check(double delta, std::uint64_t streams,
                                        std::uint64_t horizon, RngStream rng) {
  if (horizon < 2) throw std::invalid_argument("horizon must be at least 2");
  std::vector<double> envelope(horizon + 1);
  for (std::uint64_t t = 1; t <= horizon; ++t) envelope[t] = lil_envelope(t, delta);

  ConcentrationReport rep;
  rep.delta = delta;
  rep.streams = streams;
  rep.horizon = horizon;
  for (std::uint64_t s = 0; s < streams; ++s) {
    RngStream path = rng.substream(s);
    double sum = 0.0;
    for (std::uint64_t t = 1; t <= horizon; ++t) {
      sum += path.next_gaussian();
      if (std::abs(sum) >= envelope[t]) {
        ++rep.violations;
        break;
      }
    }
  }
  rep.fraction = streams ? static_cast<double>(rep.violations) / static_cast<double>(streams) : 0.0;
  rep.bound = std::numbers::pi * std::numbers::pi * delta / 6.0;
  rep.std_error = binomial_std_error(std::min(rep.bound, 1.0), streams);
  rep.passed = rep.fraction <= rep.bound + 3.0 * rep.std_error;
  return rep;
}

std::vector<MaximalCell> maximal_inequality_check(std::uint64_t trials, RngStream rng) {
  const std::uint64_t lengths[] = {10, 100, 1000};
  const double scales[] = {0.3, 1.0};
  const double multiples[] = {0.5, 1.0, 2.0, 3.0};  // z in units of scale * sqrt(n)
  std::vector<MaximalCell> cells;
  std::uint64_t cell_id = 0;
  for (std::uint64_t n : lengths) {
    for (double scale : scales) {
      for (double mult : multiples) {
        MaximalCell c;
        c.n = n;
        c.scale = scale;
        c.z = mult * scale * std::sqrt(static_cast<double>(n));
        c.trials = trials;
        RngStream cell_rng = rng.substream(cell_id++);
        for (std::uint64_t i = 0; i < trials; ++i) {
          double sum = 0.0;
          for (std::uint64_t t = 0; t < n; ++t) {
            sum += scale * cell_rng.next_gaussian();
            if (sum >= c.z) {
              ++c.exceed;
              break;
            }
          }
        }
        c.frequency = trials ? static_cast<double>(c.exceed) / static_cast<double>(trials) : 0.0;
        c.bound = std::exp(-c.z * c.z / (2.0 * static_cast<double>(n) * scale * scale));
        c.std_error = binomial_std_error(c.bound, trials);
        c.passed = c.frequency <= c.bound + 3.0 * c.std_error;
        cells.push_back(c);
      }
    }
  }
  return cells;
}

ThresholdCheckReport lil_threshold_check(std::uint64_t tuples, RngStream rng) {
  ThresholdCheckReport rep;
  for (std::uint64_t i = 0; i < tuples; ++i) {
    const double gap = 1.0 - rng.next_uniform();  // (0, 1]
    const std::size_t k = 2 + static_cast<std::size_t>(rng.next_below(1023));
    const double delta = 0.5 * (1.0 - rng.next_uniform());
    const double c = 1.0 + 2.0 * rng.next_uniform();
    const double threshold = lil_threshold(gap, k, delta, c);
    // Mostly just past the threshold, where the implication is tightest.
    const double t = threshold * (1.0 + std::pow(10.0, -9.0 + 10.0 * rng.next_uniform()));
    if (!lil_threshold_sufficient(t, gap, k, delta, c)) continue;
    ++rep.tuples;
    const double r = lil_radius_bound(t, k, delta, c);
    if (!(r < gap)) {
      if (rep.failures == 0) {
        rep.first_failure = "gap=" + detail::format_double(gap) + " K=" + std::to_string(k) +
                            " delta=" + detail::format_double(delta) +
                            " C=" + detail::format_double(c) + " t=" + detail::format_double(t);
      }
      ++rep.failures;
    }
  }
  return rep;
}

}  // namespace oneid

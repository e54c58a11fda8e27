#include <cmath>
#include <limits>

#include "doctest.h"
#include "oneid/confidence.hpp"
#include "oneid/rng.hpp"
#include "oracles.hpp"

using namespace oneid;

TEST_CASE("dyadic exponent") {
  CHECK(dyadic_exponent(1) == 1);
  CHECK(dyadic_exponent(2) == 1);
  CHECK(dyadic_exponent(4) == 2);
  CHECK(dyadic_exponent(5) == 3);
  CHECK(dyadic_exponent(std::uint64_t{1} << 40) == 40);
  CHECK(dyadic_exponent((std::uint64_t{1} << 40) + 1) == 41);
  CHECK_THROWS_AS(dyadic_exponent(0), std::invalid_argument);
  for (std::uint64_t t = 1; t < 5000; ++t) {
    CHECK(dyadic_exponent(t) == std::max(oracle::ceil_log2(t), 1));
  }
}

TEST_CASE("radius reference values") {
  CHECK(radius(1, 0.5) == doctest::Approx(2.35482004503).epsilon(1e-10));
  CHECK(radius(1, 0.5) == doctest::Approx(std::sqrt(4.0 * std::log(4.0))).epsilon(1e-14));
  CHECK(radius(4, 0.1) == doctest::Approx(1.4802071873).epsilon(1e-10));
  CHECK(std::isinf(radius(0, 0.1)));
  CHECK_THROWS_AS(radius(3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(radius(3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(radius(3, std::nan("")), std::invalid_argument);
}

TEST_CASE("radius agrees with the long-double oracle") {
  RngStream rng(21);
  for (int i = 0; i < 5000; ++i) {
    const std::uint64_t t = 1 + rng.next_below(1'000'000);
    const double delta = 1e-12 + rng.next_uniform() * (1.0 - 2e-12);
    const double expect = static_cast<double>(oracle::radius(t, delta));
    CHECK(radius(t, delta) == doctest::Approx(expect).epsilon(1e-13));
    CHECK(lil_envelope(t, delta) == doctest::Approx(expect * t).epsilon(1e-13));
  }
}

TEST_CASE("log-space radius matches and reaches tiny tolerances") {
  for (std::uint64_t t : {1ULL, 3ULL, 17ULL, 1000ULL, 1ULL << 33}) {
    for (double delta : {0.5, 0.1, 1e-6, 1e-200}) {
      CHECK(radius_log(t, -std::log(delta)) == doctest::Approx(radius(t, delta)).epsilon(1e-13));
      CHECK(envelope_log(dyadic_exponent(t), -std::log(delta)) / static_cast<double>(t) ==
            radius_log(t, -std::log(delta)));
    }
  }
  // ln(1/delta) = 1e4 is far below the smallest double.
  const double r = radius_log(100, 1e4);
  CHECK(std::isfinite(r));
  CHECK(r == doctest::Approx(std::sqrt(2.0 * 128.0 * (std::log(2.0 * 49.0) + 1e4)) / 100.0));
  CHECK(std::isinf(radius_log(0, 3.0)));
  CHECK_THROWS_AS(radius_log(5, 0.0), std::invalid_argument);
}

TEST_CASE("bound kinds") {
  CHECK(bound(BoundKind::ExplorationLcb, 1.0, 1, 0.5, 2.0) ==
        doctest::Approx(-3.70964009006).epsilon(1e-10));
  CHECK(bound(BoundKind::ExplorationUcb, 0.0, 0, 0.1) == std::numeric_limits<double>::infinity());
  CHECK(bound(BoundKind::ExplorationLcb, 0.0, 0, 0.1, 2.0) ==
        -std::numeric_limits<double>::infinity());
  CHECK(bound(BoundKind::ExploitLcb, 0.7, 4, 0.1) == doctest::Approx(-0.7802071873).epsilon(1e-9));
  CHECK(bound(BoundKind::ExploitUcb, 0.7, 4, 0.1) == doctest::Approx(2.1802071873).epsilon(1e-9));
  // only the exploration LCB carries the multiplier
  CHECK(bound(BoundKind::ExploitLcb, 0.7, 4, 0.1, 3.0) == bound(BoundKind::ExploitLcb, 0.7, 4, 0.1));
  CHECK(bound(BoundKind::ExplorationUcb, 0.7, 4, 0.1, 3.0) ==
        bound(BoundKind::ExplorationUcb, 0.7, 4, 0.1));
}

TEST_CASE("phase schedule") {
  const PhaseParams p1 = phase_params(1);
  CHECK(p1.delta_k == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(p1.beta_k == 2.0);
  CHECK(p1.alpha_k == 5.0);
  const PhaseParams p3 = phase_params(3);
  CHECK(p3.delta_k == doctest::Approx(1.0 / 27.0).epsilon(1e-15));
  CHECK(p3.beta_k == 8.0);
  CHECK(p3.alpha_k == 125.0);
  CHECK(p3.log_inv_delta_k == doctest::Approx(3.0 * std::log(3.0)));
  CHECK(p3.log_alpha_k == doctest::Approx(3.0 * std::log(5.0)));
  CHECK_THROWS_AS(phase_params(0), std::invalid_argument);
  CHECK_THROWS_AS(phase_params(kMaxPhase + 1), ScheduleOverflow);
  const PhaseParams big = phase_params(2000);
  CHECK(std::isinf(big.beta_k));
  CHECK(big.delta_k == 0.0);
  CHECK(std::isfinite(big.log_inv_delta_k));
}

TEST_CASE("exploration budget") {
  // Direct evaluation: 4.0401 * 2 * ln 48 and 4.0401 * 4 * ln 144.
  CHECK(exploration_budget(1, 4, 1.01) == doctest::Approx(31.2800784083).epsilon(1e-10));
  CHECK(exploration_budget(2, 4, 1.01) == doctest::Approx(80.3141708465).epsilon(1e-10));
  CHECK(exploration_budget(1, 4, 1.01) ==
        doctest::Approx(4.0401 * 2.0 * std::log(48.0)).epsilon(1e-14));
  for (std::size_t k = 2; k <= 64; k *= 2) {
    for (int phase = 1; phase < 80; ++phase) {
      CHECK(exploration_budget(phase + 1, k, 1.5) > exploration_budget(phase, k, 1.5));
    }
  }
}

TEST_CASE("exploitation budget") {
  CHECK(exploitation_budget(1, 4, 0.05, 2.0) == doctest::Approx(368.887945411).epsilon(1e-10));
  CHECK(exploitation_budget(1, 4, 0.05, 2.0) ==
        doctest::Approx(25.0 * 2.0 * std::log(1600.0)).epsilon(1e-14));
  CHECK(exploitation_budget(1, 4, 0.05, 1.01) ==
        doctest::Approx(160801.0 * 2.0 * std::log(1600.0)).epsilon(1e-10));
  CHECK(exploitation_budget(1, 4, 0.05, 1.01) == doctest::Approx(2.3727e6).epsilon(1e-4));
  double prev = std::numeric_limits<double>::infinity();
  for (double c = 1.01; c <= 3.0; c += 0.01) {
    const double b = exploitation_budget(3, 8, 0.1, c);
    CHECK(b < prev);
    prev = b;
  }
  CHECK_THROWS_AS(exploitation_budget(1, 4, 0.0, 2.0), std::invalid_argument);
}

TEST_CASE("radius monotonicity") {
  for (std::uint64_t t : {1ULL, 2ULL, 7ULL, 100ULL, 12345ULL}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double delta = 0.01; delta < 1.0; delta += 0.01) {
      const double r = radius(t, delta);
      CHECK(r < prev);
      prev = r;
    }
  }
  for (std::uint64_t t = 1; t <= (std::uint64_t{1} << 20); ++t) {
    if (radius(2 * t, 0.05) > radius(t, 0.05)) {
      FAIL("doubling increased the radius at t = " << t);
    }
  }
}

TEST_CASE("LIL sample-size threshold") {
  const double thr = lil_threshold(0.5, 2, 0.1, 1.0);
  const double expect = 28.0 * std::log(40.0) / 0.25 + 16.0 * std::log(std::log(96.0)) / 0.25;
  CHECK(thr == doctest::Approx(expect).epsilon(1e-14));
  CHECK(thr == doctest::Approx(510.3).epsilon(1e-3));
  CHECK(lil_threshold_sufficient(511, 0.5, 2, 0.1, 1.0));
  CHECK(lil_radius_bound(511, 2, 0.1, 1.0) < 0.5);
  CHECK_FALSE(lil_threshold_sufficient(10, 0.5, 2, 0.1, 1.0));
}

TEST_CASE("LIL threshold implication on random tuples") {
  RngStream rng(22);
  int tested = 0;
  for (int i = 0; i < 10'000; ++i) {
    const double g = 1e-3 + rng.next_uniform() * (1.0 - 1e-3);
    const std::size_t k = 2 + rng.next_below(1023);
    const double delta = 1e-6 + rng.next_uniform() * (0.5 - 1e-6);
    const double c = 1.0 + 2.0 * rng.next_uniform();
    const double t = lil_threshold(g, k, delta, c) * (1.0 + std::pow(10.0, -9.0 + 10.0 * rng.next_uniform()));
    if (!lil_threshold_sufficient(t, g, k, delta, c)) continue;
    ++tested;
    // independent evaluation of the controlled radius
    const double rad = c * std::sqrt(4.0 * std::log(2.0 * k * std::pow(std::log2(2.0 * t), 2) / delta) / t);
    CHECK(rad < g);
  }
  CHECK(tested > 9'000);
}

#include "oneid/rng.hpp"

#include <cmath>
#include <numbers>

namespace oneid {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ULL;
constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;
}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
  return mix64(mix64(base_seed) ^ mix64(index + kGolden));
}

std::uint64_t RngStream::bits_at(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t counter) noexcept {
  const std::uint64_t key = mix64(seed ^ mix64(stream * kStreamSalt + 1));
  return mix64(key ^ mix64(counter));
}

RngStream RngStream::substream(std::uint64_t id) const noexcept {
  return RngStream(seed_, mix64(stream_ ^ (id * kGolden + kStreamSalt)));
}

double RngStream::next_uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * kTwoPow53Inv;
}

double RngStream::next_gaussian() noexcept {
  // u1 in (0, 1] keeps the log finite.
  const double u1 = static_cast<double>((next_u64() >> 11) + 1) * kTwoPow53Inv;
  const double u2 = next_uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t RngStream::next_below(std::uint64_t n) noexcept {
  // Rejection on the top of the range removes modulo bias.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x = next_u64();
  while (x >= limit) x = next_u64();
  return x % n;
}

}  // namespace oneid

#pragma once

#include <cstdint>

namespace oneid {

// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Seed for trial `index` under `base_seed`. Adding trials never changes the
// seeds of earlier ones:  derive_seed(b, i) = mix64(mix64(b) ^ mix64(i + golden)).
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) noexcept;

// Counter-based random stream. Every output is a pure function of
// (seed, stream id, counter), so a value can be reproduced from its position
// alone and streams never share state.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0) noexcept
      : seed_(seed), stream_(stream_id) {}

  // Independent child stream; the parent's counter is not touched.
  RngStream substream(std::uint64_t id) const noexcept;

  std::uint64_t next_u64() noexcept { return bits_at(seed_, stream_, counter_++); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double next_uniform() noexcept;

  // Standard normal via Box-Muller. Consumes exactly two counters per call,
  // so draw n of a gaussian-only stream sits at counters 2n and 2n+1.
  double next_gaussian() noexcept;

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t next_below(std::uint64_t n) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_; }
  std::uint64_t position() const noexcept { return counter_; }

  static std::uint64_t bits_at(std::uint64_t seed, std::uint64_t stream,
                               std::uint64_t counter) noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace oneid

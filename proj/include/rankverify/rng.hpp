#pragma once

#include <cstdint>

#include "rankverify/normal.hpp"

namespace rankverify {

// Deterministic counter-based random stream.  substream(i) depends only on
// (seed, i), so draw i produces identical values no matter how draws are
// partitioned or scheduled across threads, and independently of the
// platform's standard-library distributions.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) noexcept : seed_(seed) {}

  class Substream {
   public:
    explicit Substream(std::uint64_t state) noexcept : state_(state) {}

    // splitmix64 step.
    std::uint64_t next_u64() noexcept {
      std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
      return z ^ (z >> 31);
    }

    // Uniform on the open interval (0, 1) with 53-bit resolution.
    double next_uniform() noexcept {
      return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via the inverse-CDF transform; shares the library's
    // quantile so the sampler is platform-independent.
    double next_gaussian() { return std_normal_quantile(Probability(next_uniform())).value(); }

   private:
    std::uint64_t state_;
  };

  Substream substream(std::uint64_t index) const noexcept {
    std::uint64_t s = seed_;
    Substream seeder(s);
    const std::uint64_t h = seeder.next_u64();
    return Substream(h ^ (index * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL));
  }

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
};

}  // namespace rankverify

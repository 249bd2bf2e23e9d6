#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace depnet {

/// xoshiro256** (Blackman & Vigna), state seeded from a single 64-bit seed
/// via splitmix64. Every random draw in the library flows through this
/// generator with a fixed discipline -- one draw per node selection, one
/// draw per value sample, inverse-CDF scans in index order -- so runs are
/// bit-reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit();

  /// Uniform integer in [0, m); consumes one draw.
  int next_index(int m);

  /// Inverse-CDF draw from a probability row, scanning in index order;
  /// consumes one draw. Falls back to the last positive entry if rounding
  /// leaves the cumulative sum short of the draw.
  int next_categorical(std::span<const double> probs);

 private:
  std::array<std::uint64_t, 4> state_;
};

}  // namespace depnet

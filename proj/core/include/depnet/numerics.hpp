#pragma once

#include <cmath>
#include <span>

namespace depnet {

/// Neumaier-compensated accumulator. Summation order is fixed by the caller,
/// so results are bit-reproducible.
class StableAccumulator {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double total() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double stable_sum(std::span<const double> values) noexcept {
  StableAccumulator acc;
  for (double v : values) acc.add(v);
  return acc.total();
}

/// x log x with the 0 log 0 = 0 convention.
inline double xlogx(double x) noexcept { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace depnet

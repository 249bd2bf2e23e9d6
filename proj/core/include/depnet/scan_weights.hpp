#pragma once

#include <span>
#include <vector>

#include "depnet/errors.hpp"

namespace depnet {

/// Node-selection probabilities c_i for random scan. Non-negative, summing
/// to 1 within 1e-12.
class ScanWeights {
 public:
  explicit ScanWeights(std::vector<double> c);

  /// c_i = 1/n for all nodes (the unclamped default).
  static ScanWeights uniform(int n);

  /// 1/|active| on the listed nodes, 0 elsewhere.
  static ScanWeights uniform_over(int n, std::span<const int> active);

  int size() const noexcept { return static_cast<int>(c_.size()); }
  double operator[](int i) const { return c_.at(i); }
  const std::vector<double>& values() const noexcept { return c_; }

  bool operator==(const ScanWeights& o) const noexcept { return c_ == o.c_; }

 private:
  std::vector<double> c_;
};

}  // namespace depnet

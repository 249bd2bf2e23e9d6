#include "depnet/scan_weights.hpp"

#include <cmath>
#include <string>

#include "depnet/numerics.hpp"

namespace depnet {

ScanWeights::ScanWeights(std::vector<double> c) : c_(std::move(c)) {
  if (c_.empty()) throw DomainError("ScanWeights: empty weight vector");
  for (double v : c_) {
    if (!(v >= 0.0)) throw DomainError("ScanWeights: negative or NaN weight");
  }
  const double mass = stable_sum(c_);
  if (std::abs(mass - 1.0) > 1e-12) {
    throw DomainError("ScanWeights: weights sum to " + std::to_string(mass) +
                      "; must be 1 within 1e-12");
  }
}

ScanWeights ScanWeights::uniform(int n) {
  if (n <= 0) throw DomainError("ScanWeights::uniform: n must be positive");
  return ScanWeights(std::vector<double>(n, 1.0 / n));
}

ScanWeights ScanWeights::uniform_over(int n, std::span<const int> active) {
  if (n <= 0) throw DomainError("ScanWeights::uniform_over: n must be positive");
  if (active.empty()) throw DomainError("ScanWeights::uniform_over: no active nodes");
  std::vector<double> c(n, 0.0);
  for (int i : active) {
    if (i < 0 || i >= n) throw DomainError("ScanWeights::uniform_over: node out of range");
    if (c[i] != 0.0) throw DomainError("ScanWeights::uniform_over: duplicate node");
    c[i] = 1.0 / static_cast<double>(active.size());
  }
  return ScanWeights(std::move(c));
}

}  // namespace depnet

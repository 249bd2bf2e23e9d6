#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "depnet/errors.hpp"

namespace depnet {

/// A joint assignment x = (x_0, ..., x_{n-1}).
using JointState = std::vector<std::int32_t>;

/// One clamped variable: (variable index, fixed value).
using ClampEntry = std::pair<int, std::int32_t>;

/// Hard cap on dense joint representations (distributions, materialized
/// sources, transition operators). Sampling is not subject to this limit.
inline constexpr std::size_t kDenseStateCap = std::size_t{1} << 20;

/// Cardinalities of the n finite discrete variables plus the mixed-radix
/// codec between joint states and flat indices. Variable 0 is the least
/// significant digit; the order is fixed so that serialized artifacts and
/// the exact solver's structure are portable across implementations.
class VariableSpace {
 public:
  explicit VariableSpace(std::vector<std::int32_t> cardinalities);

  int num_variables() const noexcept { return static_cast<int>(cards_.size()); }
  std::int32_t cardinality(int i) const { return cards_.at(i); }
  const std::vector<std::int32_t>& cardinalities() const noexcept { return cards_; }

  /// Product of all cardinalities; saturates (still > kDenseStateCap) when
  /// the true product overflows.
  std::size_t total_states() const noexcept { return total_; }

  /// False when total_states() overflowed; flat indices are unusable then.
  bool flat_indexable() const noexcept;

  /// Mixed-radix stride of variable i: product of cardinalities below i.
  /// Only valid when total_states() did not saturate.
  std::size_t stride(int i) const { return strides_.at(i); }

  /// Companion space with variable i removed (digit order preserved).
  VariableSpace drop(int i) const;

  bool operator==(const VariableSpace& o) const noexcept { return cards_ == o.cards_; }

 private:
  std::vector<std::int32_t> cards_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
};

std::size_t encode_state(const VariableSpace& space, std::span<const std::int32_t> state);
JointState decode_state(const VariableSpace& space, std::size_t index);
void validate_state(const VariableSpace& space, std::span<const std::int32_t> state);

/// Probability vector over all joint states of a space. Construction
/// enforces non-negativity and unit mass within 1e-12; violations are
/// errors, never silently renormalized.
class DenseDistribution {
 public:
  DenseDistribution(VariableSpace space, std::vector<double> probs);

  static DenseDistribution uniform(const VariableSpace& space);
  static DenseDistribution point_mass(const VariableSpace& space, std::size_t index);

  const VariableSpace& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const noexcept { return probs_; }

  double prob_of(std::span<const std::int32_t> state) const;
  bool full_support() const noexcept;

 private:
  VariableSpace space_;
  std::vector<double> probs_;
};

/// Training samples over a common space.
class Dataset {
 public:
  /// `row_major_values` holds N*n entries, sample-major.
  Dataset(VariableSpace space, std::vector<std::int32_t> row_major_values);

  const VariableSpace& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return count_; }
  std::span<const std::int32_t> sample(std::size_t k) const {
    const std::size_t n = static_cast<std::size_t>(space_.num_variables());
    return {values_.data() + k * n, n};
  }

 private:
  VariableSpace space_;
  std::vector<std::int32_t> values_;
  std::size_t count_;
};

/// p^D: relative frequencies of the samples. Errors on an empty dataset.
DenseDistribution empirical_distribution(const Dataset& data);

/// Marginal over the kept variables (ascending index order in the result).
DenseDistribution marginal(const DenseDistribution& p, std::span<const int> keep);

/// Conditional distribution over the unclamped variables given the clamped
/// assignment. Errors when the clamped event has zero probability.
struct ConditionalSlice {
  DenseDistribution dist;  // over the space of unclamped variables
  double probability;      // mass of the clamped event under p
};
ConditionalSlice condition_on(const DenseDistribution& p, std::span<const ClampEntry> clamps);

/// Total variation distance (1/2)*||p - q||_1. Spaces must match.
double total_variation(const DenseDistribution& p, const DenseDistribution& q);

}  // namespace depnet

#include "depnet/state_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "depnet/numerics.hpp"

namespace depnet {

namespace {

constexpr std::size_t kSaturated = std::numeric_limits<std::size_t>::max();
constexpr double kMassTolerance = 1e-12;

}  // namespace

VariableSpace::VariableSpace(std::vector<std::int32_t> cardinalities)
    : cards_(std::move(cardinalities)) {
  strides_.reserve(cards_.size());
  for (std::size_t i = 0; i < cards_.size(); ++i) {
    if (cards_[i] < 2) {
      throw DomainError("VariableSpace: cardinality of variable " + std::to_string(i) +
                        " is " + std::to_string(cards_[i]) + "; must be >= 2");
    }
    strides_.push_back(total_);
    const std::size_t card = static_cast<std::size_t>(cards_[i]);
    if (total_ > kSaturated / card) {
      total_ = kSaturated;  // saturate; strides beyond here are unusable
    } else {
      total_ *= card;
    }
  }
}

bool VariableSpace::flat_indexable() const noexcept { return total_ != kSaturated; }

VariableSpace VariableSpace::drop(int i) const {
  if (i < 0 || i >= num_variables()) throw DomainError("VariableSpace::drop: bad index");
  std::vector<std::int32_t> rest;
  rest.reserve(cards_.size() - 1);
  for (int j = 0; j < num_variables(); ++j) {
    if (j != i) rest.push_back(cards_[j]);
  }
  return VariableSpace(std::move(rest));
}

void validate_state(const VariableSpace& space, std::span<const std::int32_t> state) {
  if (static_cast<int>(state.size()) != space.num_variables()) {
    throw DomainError("state has " + std::to_string(state.size()) + " components; space has " +
                      std::to_string(space.num_variables()) + " variables");
  }
  for (int i = 0; i < space.num_variables(); ++i) {
    if (state[i] < 0 || state[i] >= space.cardinality(i)) {
      throw DomainError("state component " + std::to_string(i) + " = " +
                        std::to_string(state[i]) + " out of range [0, " +
                        std::to_string(space.cardinality(i)) + ")");
    }
  }
}

std::size_t encode_state(const VariableSpace& space, std::span<const std::int32_t> state) {
  if (!space.flat_indexable()) {
    throw CapacityError("encode_state: state space too large for flat indexing");
  }
  validate_state(space, state);
  std::size_t index = 0;
  for (int i = 0; i < space.num_variables(); ++i) {
    index += static_cast<std::size_t>(state[i]) * space.stride(i);
  }
  return index;
}

JointState decode_state(const VariableSpace& space, std::size_t index) {
  if (!space.flat_indexable()) {
    throw CapacityError("decode_state: state space too large for flat indexing");
  }
  if (index >= space.total_states()) {
    throw DomainError("decode_state: index " + std::to_string(index) + " out of range [0, " +
                      std::to_string(space.total_states()) + ")");
  }
  JointState state(space.num_variables());
  for (int i = 0; i < space.num_variables(); ++i) {
    const std::size_t card = static_cast<std::size_t>(space.cardinality(i));
    state[i] = static_cast<std::int32_t>(index % card);
    index /= card;
  }
  return state;
}

DenseDistribution::DenseDistribution(VariableSpace space, std::vector<double> probs)
    : space_(std::move(space)), probs_(std::move(probs)) {
  if (space_.total_states() > kDenseStateCap) {
    throw CapacityError("DenseDistribution: " + std::to_string(space_.total_states()) +
                        " states exceeds the dense cap of " + std::to_string(kDenseStateCap));
  }
  if (probs_.size() != space_.total_states()) {
    throw DomainError("DenseDistribution: got " + std::to_string(probs_.size()) +
                      " probabilities for " + std::to_string(space_.total_states()) + " states");
  }
  for (double v : probs_) {
    if (!(v >= 0.0)) throw DomainError("DenseDistribution: negative or NaN probability");
  }
  const double mass = stable_sum(probs_);
  if (std::abs(mass - 1.0) > kMassTolerance) {
    throw DomainError("DenseDistribution: total mass " + std::to_string(mass) +
                      " deviates from 1 beyond 1e-12");
  }
}

DenseDistribution DenseDistribution::uniform(const VariableSpace& space) {
  if (space.total_states() > kDenseStateCap) {
    throw CapacityError("DenseDistribution::uniform: dense cap exceeded");
  }
  std::vector<double> probs(space.total_states(),
                            1.0 / static_cast<double>(space.total_states()));
  return DenseDistribution(space, std::move(probs));
}

DenseDistribution DenseDistribution::point_mass(const VariableSpace& space, std::size_t index) {
  if (space.total_states() > kDenseStateCap) {
    throw CapacityError("DenseDistribution::point_mass: dense cap exceeded");
  }
  if (index >= space.total_states()) throw DomainError("point_mass: index out of range");
  std::vector<double> probs(space.total_states(), 0.0);
  probs[index] = 1.0;
  return DenseDistribution(space, std::move(probs));
}

double DenseDistribution::prob_of(std::span<const std::int32_t> state) const {
  return probs_[encode_state(space_, state)];
}

bool DenseDistribution::full_support() const noexcept {
  return std::all_of(probs_.begin(), probs_.end(), [](double v) { return v > 0.0; });
}

Dataset::Dataset(VariableSpace space, std::vector<std::int32_t> row_major_values)
    : space_(std::move(space)), values_(std::move(row_major_values)) {
  const std::size_t n = static_cast<std::size_t>(space_.num_variables());
  if (n == 0) throw DomainError("Dataset: space has no variables");
  if (values_.size() % n != 0) {
    throw DomainError("Dataset: value count is not a multiple of the variable count");
  }
  count_ = values_.size() / n;
  for (std::size_t k = 0; k < count_; ++k) validate_state(space_, sample(k));
}

DenseDistribution empirical_distribution(const Dataset& data) {
  if (data.size() == 0) throw DomainError("empirical_distribution: empty dataset");
  if (data.space().total_states() > kDenseStateCap) {
    throw CapacityError("empirical_distribution: dense cap exceeded");
  }
  std::vector<std::int64_t> counts(data.space().total_states(), 0);
  for (std::size_t k = 0; k < data.size(); ++k) {
    counts[encode_state(data.space(), data.sample(k))] += 1;
  }
  std::vector<double> probs(data.space().total_states());
  const double n = static_cast<double>(data.size());
  for (std::size_t x = 0; x < counts.size(); ++x) {
    probs[x] = static_cast<double>(counts[x]) / n;
  }
  return DenseDistribution(data.space(), std::move(probs));
}

DenseDistribution marginal(const DenseDistribution& p, std::span<const int> keep) {
  if (keep.empty()) throw DomainError("marginal: empty keep set");
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw DomainError("marginal: duplicate index in keep set");
  }
  const auto& space = p.space();
  if (kept.front() < 0 || kept.back() >= space.num_variables()) {
    throw DomainError("marginal: keep index out of range");
  }

  std::vector<std::int32_t> kept_cards;
  kept_cards.reserve(kept.size());
  for (int i : kept) kept_cards.push_back(space.cardinality(i));
  VariableSpace reduced(std::move(kept_cards));

  std::vector<double> probs(reduced.total_states(), 0.0);
  JointState state(space.num_variables(), 0);
  for (std::size_t idx = 0; idx < space.total_states(); ++idx) {
    std::size_t out = 0;
    for (std::size_t k = 0; k < kept.size(); ++k) {
      out += static_cast<std::size_t>(state[kept[k]]) * reduced.stride(static_cast<int>(k));
    }
    probs[out] += p[idx];
    // odometer increment
    for (int i = 0; i < space.num_variables(); ++i) {
      if (++state[i] < space.cardinality(i)) break;
      state[i] = 0;
    }
  }
  return DenseDistribution(std::move(reduced), std::move(probs));
}

ConditionalSlice condition_on(const DenseDistribution& p, std::span<const ClampEntry> clamps) {
  const auto& space = p.space();
  std::vector<std::int32_t> fixed(space.num_variables(), -1);
  for (const auto& [var, value] : clamps) {
    if (var < 0 || var >= space.num_variables()) throw DomainError("condition_on: bad variable");
    if (value < 0 || value >= space.cardinality(var)) throw DomainError("condition_on: bad value");
    if (fixed[var] != -1) throw DomainError("condition_on: duplicate clamp");
    fixed[var] = value;
  }
  std::vector<int> free_vars;
  for (int i = 0; i < space.num_variables(); ++i) {
    if (fixed[i] == -1) free_vars.push_back(i);
  }
  if (free_vars.empty()) throw DomainError("condition_on: all variables clamped");

  std::vector<std::int32_t> free_cards;
  for (int i : free_vars) free_cards.push_back(space.cardinality(i));
  VariableSpace reduced(std::move(free_cards));

  std::vector<double> probs(reduced.total_states(), 0.0);
  JointState full(space.num_variables());
  for (int i = 0; i < space.num_variables(); ++i) {
    if (fixed[i] != -1) full[i] = fixed[i];
  }
  StableAccumulator mass;
  for (std::size_t r = 0; r < reduced.total_states(); ++r) {
    std::size_t rem = r;
    for (std::size_t k = 0; k < free_vars.size(); ++k) {
      const std::size_t card = static_cast<std::size_t>(reduced.cardinality(static_cast<int>(k)));
      full[free_vars[k]] = static_cast<std::int32_t>(rem % card);
      rem /= card;
    }
    const double v = p.prob_of(full);
    probs[r] = v;
    mass.add(v);
  }
  const double total = mass.total();
  if (total <= 0.0) throw DomainError("condition_on: clamped event has zero probability");
  for (double& v : probs) v /= total;
  return ConditionalSlice{DenseDistribution(std::move(reduced), std::move(probs)), total};
}

double total_variation(const DenseDistribution& p, const DenseDistribution& q) {
  if (!(p.space() == q.space())) throw DomainError("total_variation: space mismatch");
  StableAccumulator acc;
  for (std::size_t i = 0; i < p.size(); ++i) acc.add(std::abs(p[i] - q[i]));
  return 0.5 * acc.total();
}

}  // namespace depnet

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "depnet/network.hpp"
#include "depnet/rng.hpp"
#include "depnet/scan_weights.hpp"
#include "depnet/state_space.hpp"

namespace depnet {

/// Node-selection policy for a sampling run.
struct ScanPolicy {
  enum class Kind : std::uint8_t { kRandom, kSequential };

  Kind kind;
  ScanWeights weights;         // random scan: selection probabilities
  std::vector<int> order;      // sequential scan: one visit per updatable node

  static ScanPolicy random(ScanWeights w) {
    return ScanPolicy{Kind::kRandom, std::move(w), {}};
  }
  static ScanPolicy random_uniform(int n) { return random(ScanWeights::uniform(n)); }
  static ScanPolicy sequential(std::vector<int> order);
  /// Natural order 0..n-1.
  static ScanPolicy sequential_natural(int n);
};

/// Variables held fixed during a conditional run.
class ClampSet {
 public:
  ClampSet() = default;
  explicit ClampSet(std::vector<ClampEntry> entries);

  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<ClampEntry>& entries() const noexcept { return entries_; }
  bool is_clamped(int var) const noexcept;
  /// Fixed value, or -1 when the variable is free.
  std::int32_t value_of(int var) const noexcept;

 private:
  std::vector<ClampEntry> entries_;  // sorted by variable
};

/// Recorded pseudo-Gibbs output: states X^0..X^{N-1}, stored before each
/// update, plus the node selected at each step.
class SampleRun {
 public:
  SampleRun(VariableSpace space, std::vector<std::int32_t> states_row_major,
            std::vector<std::int32_t> selected, std::uint64_t seed, ScanPolicy policy);

  const VariableSpace& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return count_; }
  std::span<const std::int32_t> state(std::size_t t) const {
    const std::size_t n = static_cast<std::size_t>(space_.num_variables());
    return {states_.data() + t * n, n};
  }
  /// Node updated between state(t) and state(t+1).
  std::int32_t selected(std::size_t t) const { return selected_[t]; }
  std::uint64_t seed() const noexcept { return seed_; }
  const ScanPolicy& policy() const noexcept { return policy_; }

 private:
  VariableSpace space_;
  std::vector<std::int32_t> states_;
  std::vector<std::int32_t> selected_;
  std::size_t count_;
  std::uint64_t seed_;
  ScanPolicy policy_;
};

/// Pseudo-Gibbs sampling. Records each state before the update. Draw
/// discipline (fixed for reproducibility): the initial state consumes one
/// uniform draw per free variable in ascending index order (when `init` is
/// absent); each step consumes one draw for node selection under random
/// scan (none under sequential scan) and one inverse-CDF draw over the
/// theta row for the new value.
SampleRun pseudo_gibbs(const DependencyNetwork& network, const ScanPolicy& policy,
                       std::size_t n_steps, std::uint64_t seed,
                       const std::optional<JointState>& init = std::nullopt);

/// Conditional (clamped) pseudo-Gibbs sampling: clamped coordinates stay
/// fixed, only unclamped nodes are selected and updated. A random policy
/// must place zero weight on clamped nodes; a sequential order must visit
/// exactly the unclamped nodes.
SampleRun conditional_pseudo_gibbs(const DependencyNetwork& network, const ClampSet& clamp,
                                   const ScanPolicy& policy, std::size_t n_steps,
                                   std::uint64_t seed,
                                   const std::optional<JointState>& init = std::nullopt);

/// Empirical distribution of the recorded states.
DenseDistribution frequencies(const SampleRun& run);

}  // namespace depnet

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "depnet/scan_weights.hpp"
#include "depnet/state_space.hpp"

namespace depnet {

/// One recorded modification of an information source's leaf partition.
struct SourceOp {
  enum class Kind : std::uint8_t { kSplit, kMerge };

  Kind kind;
  std::int32_t a;  // split: leaf y      merge: leaf y0
  std::int32_t b;  // split: variable j  merge: leaf y1 (y0 < y1)

  static SourceOp split(std::int32_t y, std::int32_t j) { return {Kind::kSplit, y, j}; }
  static SourceOp merge(std::int32_t y0, std::int32_t y1) { return {Kind::kMerge, y0, y1}; }

  bool operator==(const SourceOp&) const = default;
};

/// Node i's information source Y_i: a deterministic function of X_{-i},
/// stored as the replayable split/merge log that produced it from the
/// identically-zero function. Split re-indexing removes the split leaf,
/// shifts higher indices left, and appends the new leaves in ascending
/// value order; merge folds the higher leaf into the lower and shifts.
/// Logs are therefore portable bit-for-bit.
class InformationSource {
 public:
  /// Validates the log by replaying the leaf-count bookkeeping; a dangling
  /// leaf or variable reference is a ModelError.
  InformationSource(VariableSpace space, int owner, std::vector<SourceOp> ops);

  /// The trivial single-leaf source (identically-zero function).
  static InformationSource trivial(VariableSpace space, int owner);

  const VariableSpace& space() const noexcept { return space_; }
  int owner() const noexcept { return owner_; }
  const std::vector<SourceOp>& ops() const noexcept { return ops_; }
  std::int32_t leaf_count() const noexcept { return leaf_count_; }

  /// Y_i(x) for a full joint state; component `owner` is ignored.
  std::int32_t evaluate(std::span<const std::int32_t> state) const;

  /// Y_i over the reduced space (state with the owner variable removed).
  std::int32_t evaluate_reduced(std::span<const std::int32_t> reduced_state) const;

  bool operator==(const InformationSource& o) const noexcept {
    return space_ == o.space_ && owner_ == o.owner_ && ops_ == o.ops_;
  }

 private:
  std::int32_t replay(std::span<const std::int32_t> values_by_variable) const;

  VariableSpace space_;
  int owner_;
  std::vector<SourceOp> ops_;
  std::int32_t leaf_count_;
};

/// Leaf index for every assignment of X_{-i}, flat-indexed over the reduced
/// space (same least-significant-first digit order with the owner removed).
/// Errors when the reduced space exceeds the dense cap.
std::vector<std::int32_t> materialize_source(const InformationSource& source);

/// theta_i(X_i | Y_i): a leaf_count x |X_i| row-stochastic table.
class ConditionalTable {
 public:
  ConditionalTable(int owner, std::int32_t value_count, std::int32_t leaf_count,
                   std::vector<double> row_major);

  int owner() const noexcept { return owner_; }
  std::int32_t value_count() const noexcept { return value_count_; }
  std::int32_t leaf_count() const noexcept { return leaf_count_; }

  std::span<const double> row(std::int32_t y) const {
    return {rows_.data() + static_cast<std::size_t>(y) * value_count_,
            static_cast<std::size_t>(value_count_)};
  }
  double at(std::int32_t y, std::int32_t value) const {
    return rows_[static_cast<std::size_t>(y) * value_count_ + value];
  }

  bool operator==(const ConditionalTable&) const = default;

 private:
  int owner_;
  std::int32_t value_count_;
  std::int32_t leaf_count_;
  std::vector<double> rows_;
};

struct NetworkNode {
  InformationSource source;
  ConditionalTable table;
};

/// A dependency network: one (Y_i, theta_i) node per variable plus the
/// random-scan weights. Nodes are intentionally allowed to be mutually
/// inconsistent; the model distribution is defined only through sampling.
class DependencyNetwork {
 public:
  DependencyNetwork(VariableSpace space, std::vector<NetworkNode> nodes, ScanWeights weights);

  const VariableSpace& space() const noexcept { return space_; }
  int num_nodes() const noexcept { return static_cast<int>(nodes_.size()); }
  const NetworkNode& node(int i) const { return nodes_.at(i); }
  const std::vector<NetworkNode>& nodes() const noexcept { return nodes_; }
  const ScanWeights& weights() const noexcept { return weights_; }

 private:
  VariableSpace space_;
  std::vector<NetworkNode> nodes_;
  ScanWeights weights_;
};

struct GenuineGibbsResult {
  DependencyNetwork network;
  /// (node, leaf) pairs whose X_{-i} context had zero probability; their
  /// rows were filled with the uniform distribution.
  std::vector<std::pair<int, std::int32_t>> uniform_rows;
};

/// Network whose node tables are exactly p's full conditionals over lossless
/// sources, with uniform scan weights. Genuine Gibbs sampling on the result
/// has stationary distribution p (for ergodic p).
GenuineGibbsResult genuine_gibbs_network(const DenseDistribution& p);

}  // namespace depnet

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "depnet/network.hpp"
#include "depnet/state_space.hpp"

namespace depnet {

/// Complexity penalty R(k, N) added to each node's cost.
class PenaltySpec {
 public:
  static PenaltySpec mdl();   // k * ln(N) / (2N)
  static PenaltySpec none();  // 0
  static PenaltySpec custom(std::function<double(std::int64_t, std::int64_t)> fn);

  double operator()(std::int64_t k, std::int64_t n_samples) const;

 private:
  PenaltySpec() = default;
  std::function<double(std::int64_t, std::int64_t)> fn_;
};

/// k * ln(N) / (2N); the per-sample MDL penalty.
double mdl_penalty(std::int64_t k, std::int64_t n_samples);

struct LearnConfig {
  PenaltySpec penalty = PenaltySpec::mdl();
  /// Additive smoothing for the sampler-facing tables; negative means the
  /// default 1/N. Smoothing keeps every entry positive, which makes the
  /// pseudo-Gibbs chain ergodic.
  double sampling_alpha = -1.0;
  /// Maximum number of merge candidates per iteration; negative = unlimited,
  /// 0 = split-only learning. When capped, the first `cap` pairs in (y0, y1)
  /// lexicographic order are considered.
  std::int64_t merge_candidate_cap = -1;
  /// Safety stop for the greedy loop.
  std::size_t max_iterations = 1'000'000;
};

/// Per-leaf sample counts for one node.
struct LeafStats {
  std::int64_t total = 0;                 // N_y
  std::vector<std::int64_t> counts;       // N_{y,x_i} per value of X_i
};

/// Counts per leaf of the source for the given node.
std::vector<LeafStats> collect_leaf_stats(const Dataset& data, int node,
                                          const InformationSource& source);

/// Cost of one leaf: -(N_y/N) * sum (N_{y,x}/N_y) ln(N_{y,x}/N_y)
/// + R(|X_i|-1, N). Empty leaves pay only the penalty term.
double leaf_cost(const LeafStats& stats, std::int64_t n_samples, std::int32_t card,
                 const PenaltySpec& penalty);

/// cost'(Y) = sum_y Lcost(L_y) for the node's current source.
double node_cost(const Dataset& data, int node, const InformationSource& source,
                 const PenaltySpec& penalty);

/// Cost change of splitting leaf y on variable j, evaluated locally.
double delta_split(const Dataset& data, int node, const InformationSource& source, std::int32_t y,
                   int j, const PenaltySpec& penalty);

/// Cost change of merging leaves y0 < y1, evaluated locally.
double delta_merge(const Dataset& data, int node, const InformationSource& source, std::int32_t y0,
                   std::int32_t y1, const PenaltySpec& penalty);

/// Maximum-likelihood table: row y = empirical conditional of X_i in leaf y;
/// empty leaves get the uniform row. Minimizes KL(p^D || E(theta)) for the
/// given source.
ConditionalTable learn_parameters(const Dataset& data, int node, const InformationSource& source);

/// Additively smoothed table for sampling: (N_{y,x} + a) / (N_y + a*|X_i|).
ConditionalTable smoothed_parameters(const Dataset& data, int node,
                                     const InformationSource& source, double alpha);

struct TraceRow {
  int iteration;      // 0 is the initial single-leaf state
  std::string op;     // "init", "split(y,j)", "merge(y0,y1)"
  double delta;       // 0 for init
  double cost;        // cost' after the op
  std::int32_t leaf_count;
};

void write_cost_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace);

/// Greedy structure learner for one node, stepping through the split/merge
/// candidate loop. Exposed so the per-step quantities can be inspected.
class NodeStructureLearner {
 public:
  NodeStructureLearner(const Dataset& data, int node, LearnConfig config);

  struct Candidate {
    SourceOp op;
    double delta;
  };

  /// Full candidate set with local cost changes, in tie-break order:
  /// splits by (y, j), then merges by (y0, y1). Redundant splits (empty
  /// leaf, or x_j constant among the leaf's samples) are excluded.
  std::vector<Candidate> candidates() const;

  /// Applies the best candidate if it strictly lowers the cost. Returns
  /// false when the loop is finished.
  bool step();

  double cost() const noexcept { return cost_; }
  std::int32_t leaf_count() const noexcept { return static_cast<std::int32_t>(stats_.size()); }
  const std::vector<LeafStats>& stats() const noexcept { return stats_; }
  InformationSource source() const;
  const std::vector<TraceRow>& trace() const noexcept { return trace_; }

 private:
  double leaf_cost_of(const LeafStats& s) const;
  void apply(const SourceOp& op);

  const Dataset& data_;
  int node_;
  LearnConfig config_;
  std::int32_t card_;
  std::vector<SourceOp> ops_;
  std::vector<std::int32_t> leaf_of_;   // per sample
  std::vector<LeafStats> stats_;
  double cost_;
  int iteration_ = 0;
  std::vector<TraceRow> trace_;
};

struct NodeLearnResult {
  InformationSource source;
  ConditionalTable mle;       // Thm-4 minimizer (unsmoothed)
  ConditionalTable sampling;  // smoothed, strictly positive
  std::vector<TraceRow> trace;
};

/// Runs the greedy loop for one node and fits both tables.
NodeLearnResult structure_learn_node(const Dataset& data, int node, const LearnConfig& config);

struct LearnResult {
  DependencyNetwork network;  // carries the smoothed sampling tables
  std::vector<NodeLearnResult> nodes;
};

/// Learns all nodes independently (in parallel when DEPNET_THREADS allows)
/// and assembles the network with uniform scan weights.
LearnResult learn_network_detailed(const Dataset& data, const LearnConfig& config);
DependencyNetwork learn_network(const Dataset& data, const LearnConfig& config);

}  // namespace depnet

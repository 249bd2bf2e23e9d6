#pragma once

// Shared generators for randomized tests. Everything is driven by the
// library Rng so failures reproduce from the seed.

#include <vector>

#include "depnet/depnet.hpp"

namespace testsupport {

using namespace depnet;

/// Full-support distribution with entries bounded away from zero.
inline DenseDistribution random_distribution(Rng& rng, const VariableSpace& space) {
  std::vector<double> w(space.total_states());
  for (double& v : w) v = 0.05 + rng.next_unit();
  const double z = stable_sum(w);
  for (double& v : w) v /= z;
  return DenseDistribution(space, std::move(w));
}

/// Row-stochastic table with entries >= floor (after normalization the bound
/// is approximate but positive whenever floor > 0).
inline ConditionalTable random_table(Rng& rng, int owner, std::int32_t card,
                                     std::int32_t leaves, double floor = 0.05) {
  std::vector<double> rows(static_cast<std::size_t>(card) * leaves);
  for (std::int32_t y = 0; y < leaves; ++y) {
    double sum = 0.0;
    for (std::int32_t v = 0; v < card; ++v) {
      const double x = floor + (1.0 - floor) * rng.next_unit();
      rows[static_cast<std::size_t>(y) * card + v] = x;
      sum += x;
    }
    for (std::int32_t v = 0; v < card; ++v) rows[static_cast<std::size_t>(y) * card + v] /= sum;
  }
  return ConditionalTable(owner, card, leaves, std::move(rows));
}

/// Valid random op log: splits and merges chosen uniformly among the legal
/// moves at each step.
inline InformationSource random_source(Rng& rng, const VariableSpace& space, int owner,
                                       int n_ops) {
  std::vector<SourceOp> ops;
  std::int32_t count = 1;
  for (int k = 0; k < n_ops; ++k) {
    const bool can_merge = count >= 2;
    const bool do_split = !can_merge || rng.next_unit() < 0.7;
    if (do_split) {
      int j = rng.next_index(space.num_variables() - 1);
      if (j >= owner) ++j;
      const std::int32_t y = static_cast<std::int32_t>(rng.next_index(count));
      ops.push_back(SourceOp::split(y, j));
      count += space.cardinality(j) - 1;
    } else {
      std::int32_t y0 = static_cast<std::int32_t>(rng.next_index(count));
      std::int32_t y1 = static_cast<std::int32_t>(rng.next_index(count - 1));
      if (y1 >= y0) ++y1;
      if (y0 > y1) std::swap(y0, y1);
      ops.push_back(SourceOp::merge(y0, y1));
      count -= 1;
    }
  }
  return InformationSource(space, owner, std::move(ops));
}

/// Network with random sources and strictly positive random tables.
inline DependencyNetwork random_network(Rng& rng, const VariableSpace& space,
                                        int max_ops_per_node = 3, double floor = 0.05) {
  std::vector<NetworkNode> nodes;
  for (int i = 0; i < space.num_variables(); ++i) {
    InformationSource src =
        random_source(rng, space, i, rng.next_index(max_ops_per_node + 1));
    ConditionalTable table =
        random_table(rng, i, space.cardinality(i), src.leaf_count(), floor);
    nodes.push_back(NetworkNode{std::move(src), std::move(table)});
  }
  return DependencyNetwork(space, std::move(nodes), ScanWeights::uniform(space.num_variables()));
}

inline VariableSpace binary_space(int n) {
  return VariableSpace(std::vector<std::int32_t>(n, 2));
}

}  // namespace testsupport

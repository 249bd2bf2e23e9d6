#include "depnet/network.hpp"

#include <cmath>
#include <string>

#include "depnet/numerics.hpp"

namespace depnet {

namespace {

constexpr double kRowTolerance = 1e-12;

}  // namespace

InformationSource::InformationSource(VariableSpace space, int owner, std::vector<SourceOp> ops)
    : space_(std::move(space)), owner_(owner), ops_(std::move(ops)) {
  if (owner_ < 0 || owner_ >= space_.num_variables()) {
    throw DomainError("InformationSource: owner " + std::to_string(owner_) + " out of range");
  }
  // Replay the leaf-count bookkeeping to validate every reference.
  std::int64_t count = 1;
  for (std::size_t k = 0; k < ops_.size(); ++k) {
    const SourceOp& op = ops_[k];
    if (op.kind == SourceOp::Kind::kSplit) {
      if (op.a < 0 || op.a >= count) {
        throw ModelError("op " + std::to_string(k) + ": split of leaf " + std::to_string(op.a) +
                         " but only " + std::to_string(count) + " leaves exist");
      }
      if (op.b < 0 || op.b >= space_.num_variables() || op.b == owner_) {
        throw ModelError("op " + std::to_string(k) + ": split on invalid variable " +
                         std::to_string(op.b));
      }
      count += space_.cardinality(op.b) - 1;
    } else {
      if (op.a >= op.b) {
        throw ModelError("op " + std::to_string(k) + ": merge requires y0 < y1");
      }
      if (op.a < 0 || op.b >= count) {
        throw ModelError("op " + std::to_string(k) + ": merge references leaf " +
                         std::to_string(op.b) + " but only " + std::to_string(count) +
                         " leaves exist");
      }
      count -= 1;
    }
  }
  leaf_count_ = static_cast<std::int32_t>(count);
}

InformationSource InformationSource::trivial(VariableSpace space, int owner) {
  return InformationSource(std::move(space), owner, {});
}

std::int32_t InformationSource::replay(std::span<const std::int32_t> values_by_variable) const {
  std::int64_t y = 0;
  std::int64_t count = 1;
  for (const SourceOp& op : ops_) {
    if (op.kind == SourceOp::Kind::kSplit) {
      if (y == op.a) {
        y = count - 1 + values_by_variable[op.b];
      } else if (y > op.a) {
        --y;
      }
      count += space_.cardinality(op.b) - 1;
    } else {
      if (y == op.b) {
        y = op.a;
      } else if (y > op.b) {
        --y;
      }
      count -= 1;
    }
  }
  return static_cast<std::int32_t>(y);
}

std::int32_t InformationSource::evaluate(std::span<const std::int32_t> state) const {
  if (static_cast<int>(state.size()) != space_.num_variables()) {
    throw DomainError("InformationSource::evaluate: state size mismatch");
  }
  return replay(state);
}

std::int32_t InformationSource::evaluate_reduced(
    std::span<const std::int32_t> reduced_state) const {
  if (static_cast<int>(reduced_state.size()) != space_.num_variables() - 1) {
    throw DomainError("InformationSource::evaluate_reduced: state size mismatch");
  }
  // Re-inflate to variable indexing; the owner slot is never read.
  thread_local std::vector<std::int32_t> full;
  full.assign(space_.num_variables(), 0);
  for (int j = 0, r = 0; j < space_.num_variables(); ++j) {
    if (j != owner_) full[j] = reduced_state[r++];
  }
  return replay(full);
}

std::vector<std::int32_t> materialize_source(const InformationSource& source) {
  const VariableSpace reduced = source.space().drop(source.owner());
  if (reduced.total_states() > kDenseStateCap) {
    throw CapacityError("materialize_source: reduced space exceeds the dense cap");
  }
  std::vector<std::int32_t> leaves(reduced.total_states());
  std::vector<std::int32_t> state(reduced.num_variables(), 0);
  for (std::size_t idx = 0; idx < leaves.size(); ++idx) {
    leaves[idx] = source.evaluate_reduced(state);
    for (int i = 0; i < reduced.num_variables(); ++i) {
      if (++state[i] < reduced.cardinality(i)) break;
      state[i] = 0;
    }
  }
  return leaves;
}

ConditionalTable::ConditionalTable(int owner, std::int32_t value_count, std::int32_t leaf_count,
                                   std::vector<double> row_major)
    : owner_(owner),
      value_count_(value_count),
      leaf_count_(leaf_count),
      rows_(std::move(row_major)) {
  if (value_count_ < 2) throw ModelError("ConditionalTable: value count must be >= 2");
  if (leaf_count_ < 1) throw ModelError("ConditionalTable: leaf count must be >= 1");
  if (rows_.size() != static_cast<std::size_t>(value_count_) * leaf_count_) {
    throw ModelError("ConditionalTable: row data size mismatch");
  }
  for (std::int32_t y = 0; y < leaf_count_; ++y) {
    const auto r = row(y);
    for (double v : r) {
      if (!(v >= 0.0)) throw ModelError("ConditionalTable: negative or NaN entry");
    }
    const double mass = stable_sum(r);
    if (std::abs(mass - 1.0) > kRowTolerance) {
      throw ModelError("ConditionalTable: row " + std::to_string(y) + " sums to " +
                       std::to_string(mass) + "; must be 1 within 1e-12");
    }
  }
}

DependencyNetwork::DependencyNetwork(VariableSpace space, std::vector<NetworkNode> nodes,
                                     ScanWeights weights)
    : space_(std::move(space)), nodes_(std::move(nodes)), weights_(std::move(weights)) {
  if (static_cast<int>(nodes_.size()) != space_.num_variables()) {
    throw ModelError("DependencyNetwork: need one node per variable");
  }
  if (weights_.size() != space_.num_variables()) {
    throw ModelError("DependencyNetwork: weight count mismatch");
  }
  for (int i = 0; i < num_nodes(); ++i) {
    const NetworkNode& nd = nodes_[i];
    if (nd.source.owner() != i || nd.table.owner() != i) {
      throw ModelError("DependencyNetwork: node " + std::to_string(i) + " owner mismatch");
    }
    if (!(nd.source.space() == space_)) {
      throw ModelError("DependencyNetwork: node " + std::to_string(i) + " space mismatch");
    }
    if (nd.table.value_count() != space_.cardinality(i)) {
      throw ModelError("DependencyNetwork: node " + std::to_string(i) +
                       " table value count mismatch");
    }
    if (nd.table.leaf_count() != nd.source.leaf_count()) {
      throw ModelError("DependencyNetwork: node " + std::to_string(i) +
                       " table/source leaf count mismatch");
    }
  }
}

GenuineGibbsResult genuine_gibbs_network(const DenseDistribution& p) {
  const VariableSpace& space = p.space();
  const int n = space.num_variables();
  if (n < 1) throw DomainError("genuine_gibbs_network: empty space");

  std::vector<NetworkNode> nodes;
  nodes.reserve(n);
  std::vector<std::pair<int, std::int32_t>> flagged;

  for (int i = 0; i < n; ++i) {
    // Lossless source: split every current leaf on each other variable, in
    // ascending variable order. Splitting leaf 0 repeatedly walks through
    // all pre-existing leaves because splits remove-and-append.
    std::vector<SourceOp> ops;
    std::int64_t count = 1;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const std::int64_t before = count;
      for (std::int64_t k = 0; k < before; ++k) {
        ops.push_back(SourceOp::split(0, j));
        count += space.cardinality(j) - 1;
      }
    }
    InformationSource source(space, i, std::move(ops));
    const std::int32_t leaves = source.leaf_count();
    const std::int32_t card = space.cardinality(i);

    const auto leaf_of = materialize_source(source);
    std::vector<double> mass(static_cast<std::size_t>(leaves) * card, 0.0);

    const std::size_t stride = space.stride(i);
    const std::size_t block = stride * static_cast<std::size_t>(card);
    std::size_t reduced = 0;
    for (std::size_t base = 0; base < space.total_states(); base += block) {
      for (std::size_t lo = 0; lo < stride; ++lo, ++reduced) {
        const std::int32_t y = leaf_of[reduced];
        for (std::int32_t v = 0; v < card; ++v) {
          mass[static_cast<std::size_t>(y) * card + v] += p[base + lo + v * stride];
        }
      }
    }

    std::vector<double> rows(mass.size());
    for (std::int32_t y = 0; y < leaves; ++y) {
      double total = 0.0;
      for (std::int32_t v = 0; v < card; ++v) total += mass[static_cast<std::size_t>(y) * card + v];
      if (total > 0.0) {
        for (std::int32_t v = 0; v < card; ++v) {
          rows[static_cast<std::size_t>(y) * card + v] =
              mass[static_cast<std::size_t>(y) * card + v] / total;
        }
      } else {
        for (std::int32_t v = 0; v < card; ++v) {
          rows[static_cast<std::size_t>(y) * card + v] = 1.0 / card;
        }
        flagged.emplace_back(i, y);
      }
    }
    nodes.push_back(NetworkNode{std::move(source), ConditionalTable(i, card, leaves, std::move(rows))});
  }

  DependencyNetwork net(space, std::move(nodes), ScanWeights::uniform(n));
  return GenuineGibbsResult{std::move(net), std::move(flagged)};
}

}  // namespace depnet

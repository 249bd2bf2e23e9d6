#include "depnet/geometry.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "depnet/numerics.hpp"

namespace depnet {

namespace {

// Walks the states grouped by the coordinate of one variable: for each
// assignment of X_{-i} (identified by its reduced flat index), visits the
// |X_i| joint indices that share it.
template <typename Fn>
void for_each_context(const VariableSpace& space, int var, Fn&& fn) {
  const std::size_t stride = space.stride(var);
  const std::size_t card = static_cast<std::size_t>(space.cardinality(var));
  const std::size_t block = stride * card;
  std::size_t reduced = 0;
  for (std::size_t base = 0; base < space.total_states(); base += block) {
    for (std::size_t lo = 0; lo < stride; ++lo, ++reduced) {
      fn(reduced, base + lo, stride, card);
    }
  }
}

void require_same_space(const DenseDistribution& p, const DenseDistribution& q,
                        const char* where) {
  if (!(p.space() == q.space())) throw DomainError(std::string(where) + ": space mismatch");
}

void require_node_inputs(const DenseDistribution& p, int node, const ConditionalTable& theta,
                         const InformationSource& source, const char* where) {
  const int n = p.space().num_variables();
  if (node < 0 || node >= n) throw DomainError(std::string(where) + ": node out of range");
  if (!(source.space() == p.space()) || source.owner() != node) {
    throw DomainError(std::string(where) + ": source does not belong to this node/space");
  }
  if (theta.owner() != node || theta.value_count() != p.space().cardinality(node) ||
      theta.leaf_count() != source.leaf_count()) {
    throw DomainError(std::string(where) + ": table does not match node/source");
  }
}

// KL(p || E_i) where the conditional of the manifold at context x_{-i} is
// given by `row_at(reduced_index)` returning a span, or an empty span when
// the conditional is unconstrained at that context.
template <typename RowAt>
ExtReal kl_to_conditional(const DenseDistribution& p, int node, RowAt&& row_at) {
  const VariableSpace& space = p.space();
  bool infinite = false;
  StableAccumulator acc;
  for_each_context(space, node, [&](std::size_t reduced, std::size_t base, std::size_t stride,
                                    std::size_t card) {
    if (infinite) return;
    double context_mass = 0.0;
    for (std::size_t v = 0; v < card; ++v) context_mass += p[base + v * stride];
    if (context_mass == 0.0) return;
    const std::span<const double> row = row_at(reduced);
    if (row.empty()) {  // unconstrained context with p-mass: divergence blows up
      infinite = true;
      return;
    }
    for (std::size_t v = 0; v < card; ++v) {
      const double pv = p[base + v * stride];
      if (pv == 0.0) continue;
      if (row[v] <= 0.0) {
        infinite = true;
        return;
      }
      acc.add(pv * (std::log(pv / context_mass) - std::log(row[v])));
    }
  });
  if (infinite) return ExtReal::infinity();
  return ExtReal(acc.total());
}

}  // namespace

double entropy(const DenseDistribution& p) {
  StableAccumulator acc;
  for (double v : p.probs()) acc.add(xlogx(v));
  return -acc.total();
}

double conditional_entropy(const DenseDistribution& p, int target) {
  const VariableSpace& space = p.space();
  if (target < 0 || target >= space.num_variables()) {
    throw DomainError("conditional_entropy: target out of range");
  }
  StableAccumulator acc;
  for_each_context(space, target, [&](std::size_t, std::size_t base, std::size_t stride,
                                      std::size_t card) {
    double context_mass = 0.0;
    for (std::size_t v = 0; v < card; ++v) context_mass += p[base + v * stride];
    if (context_mass == 0.0) return;
    for (std::size_t v = 0; v < card; ++v) {
      const double pv = p[base + v * stride];
      if (pv > 0.0) acc.add(pv * std::log(pv / context_mass));
    }
  });
  return -acc.total();
}

double conditional_entropy(const DenseDistribution& p, int target,
                           const InformationSource& source) {
  const VariableSpace& space = p.space();
  if (target < 0 || target >= space.num_variables()) {
    throw DomainError("conditional_entropy: target out of range");
  }
  if (!(source.space() == space) || source.owner() != target) {
    throw DomainError("conditional_entropy: source does not belong to this node/space");
  }
  const auto leaf_of = materialize_source(source);
  const std::size_t card = static_cast<std::size_t>(space.cardinality(target));
  std::vector<double> joint(static_cast<std::size_t>(source.leaf_count()) * card, 0.0);
  for_each_context(space, target, [&](std::size_t reduced, std::size_t base, std::size_t stride,
                                      std::size_t c) {
    const std::size_t y = static_cast<std::size_t>(leaf_of[reduced]);
    for (std::size_t v = 0; v < c; ++v) joint[y * card + v] += p[base + v * stride];
  });
  StableAccumulator acc;
  for (std::int32_t y = 0; y < source.leaf_count(); ++y) {
    double leaf_mass = 0.0;
    for (std::size_t v = 0; v < card; ++v) leaf_mass += joint[y * card + v];
    if (leaf_mass == 0.0) continue;
    for (std::size_t v = 0; v < card; ++v) {
      const double pv = joint[y * card + v];
      if (pv > 0.0) acc.add(pv * std::log(pv / leaf_mass));
    }
  }
  return -acc.total();
}

ExtReal kl_divergence(const DenseDistribution& p, const DenseDistribution& q) {
  require_same_space(p, q, "kl_divergence");
  StableAccumulator acc;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pv = p[i];
    if (pv == 0.0) continue;
    if (q[i] <= 0.0) return ExtReal::infinity();
    acc.add(pv * std::log(pv / q[i]));
  }
  return ExtReal(acc.total());
}

ExtReal kl_to_full_conditional_manifold(const DenseDistribution& p, int node,
                                        const ConditionalTable& theta,
                                        const InformationSource& source) {
  require_node_inputs(p, node, theta, source, "kl_to_full_conditional_manifold");
  const auto leaf_of = materialize_source(source);
  return kl_to_conditional(p, node, [&](std::size_t reduced) -> std::span<const double> {
    return theta.row(leaf_of[reduced]);
  });
}

DenseDistribution m_project(const DenseDistribution& p, int node, const ConditionalTable& theta,
                            const InformationSource& source) {
  require_node_inputs(p, node, theta, source, "m_project");
  const VariableSpace& space = p.space();
  const auto leaf_of = materialize_source(source);
  std::vector<double> out(space.total_states());
  for_each_context(space, node, [&](std::size_t reduced, std::size_t base, std::size_t stride,
                                    std::size_t card) {
    double context_mass = 0.0;
    for (std::size_t v = 0; v < card; ++v) context_mass += p[base + v * stride];
    const std::span<const double> row = theta.row(leaf_of[reduced]);
    for (std::size_t v = 0; v < card; ++v) out[base + v * stride] = context_mass * row[v];
  });
  return DenseDistribution(space, std::move(out));
}

ExtReal fc_divergence(const DenseDistribution& p, const DenseDistribution& q,
                      const ScanWeights& weights) {
  require_same_space(p, q, "fc_divergence");
  if (weights.size() != p.space().num_variables()) {
    throw DomainError("fc_divergence: weight count mismatch");
  }
  const VariableSpace& space = p.space();
  ExtReal total(0.0);
  for (int i = 0; i < space.num_variables(); ++i) {
    if (weights[i] == 0.0) continue;  // 0 * anything = 0
    const std::size_t stride = space.stride(i);
    const std::size_t card = static_cast<std::size_t>(space.cardinality(i));
    // q's full conditional at each context, computed on the fly; empty row
    // marks an unconstrained (zero-mass) context.
    std::vector<double> row(card);
    const ExtReal term = kl_to_conditional(p, i, [&](std::size_t reduced) -> std::span<const double> {
      const std::size_t block = stride * card;
      const std::size_t base = (reduced / stride) * block + (reduced % stride);
      double q_mass = 0.0;
      for (std::size_t v = 0; v < card; ++v) q_mass += q[base + v * stride];
      if (q_mass == 0.0) return {};
      for (std::size_t v = 0; v < card; ++v) row[v] = q[base + v * stride] / q_mass;
      return row;
    });
    total += term.scaled_by(weights[i]);
  }
  return total;
}

ExtReal kl_to_manifold_by_clamp(const DenseDistribution& p, int node,
                                const ConditionalTable& theta, const InformationSource& source,
                                std::span<const int> clamp_vars) {
  require_node_inputs(p, node, theta, source, "kl_to_manifold_by_clamp");
  const VariableSpace& space = p.space();
  std::vector<int> clamped(clamp_vars.begin(), clamp_vars.end());
  std::sort(clamped.begin(), clamped.end());
  if (std::adjacent_find(clamped.begin(), clamped.end()) != clamped.end()) {
    throw DomainError("kl_to_manifold_by_clamp: duplicate clamp variable");
  }
  for (int v : clamped) {
    if (v < 0 || v >= space.num_variables()) {
      throw DomainError("kl_to_manifold_by_clamp: clamp variable out of range");
    }
    if (v == node) throw DomainError("kl_to_manifold_by_clamp: node itself is clamped");
  }

  if (clamped.empty()) return kl_to_full_conditional_manifold(p, node, theta, source);

  std::vector<int> free_vars;
  for (int v = 0; v < space.num_variables(); ++v) {
    if (!std::binary_search(clamped.begin(), clamped.end(), v)) free_vars.push_back(v);
  }
  int node_pos = 0;
  while (free_vars[node_pos] != node) ++node_pos;

  // Weight each restricted divergence by the clamp-assignment probability;
  // zero-probability assignments contribute 0. The marginal's flat indexing
  // matches the assignment enumeration below (ascending clamp variables).
  const DenseDistribution clamp_marginal = marginal(p, clamped);
  std::vector<std::int32_t> clamp_cards;
  for (int v : clamped) clamp_cards.push_back(space.cardinality(v));

  ExtReal total(0.0);
  std::vector<ClampEntry> entries(clamped.size());
  JointState full(space.num_variables(), 0);
  for (std::size_t a = 0; a < clamp_marginal.size(); ++a) {
    if (clamp_marginal[a] == 0.0) continue;
    std::size_t rem = a;
    for (std::size_t k = 0; k < clamped.size(); ++k) {
      entries[k] = {clamped[k], static_cast<std::int32_t>(rem % clamp_cards[k])};
      rem /= clamp_cards[k];
    }
    const ConditionalSlice slice = condition_on(p, entries);
    // Divergence of the restricted distribution to the restricted manifold:
    // contexts are assignments of the free variables except the node, with
    // the clamped values baked into the source evaluation.
    for (const auto& [var, value] : entries) full[var] = value;
    const ExtReal inner =
        kl_to_conditional(slice.dist, node_pos, [&](std::size_t reduced) -> std::span<const double> {
          std::size_t r = reduced;
          for (std::size_t k = 0; k < free_vars.size(); ++k) {
            if (static_cast<int>(k) == node_pos) continue;
            const std::size_t card = static_cast<std::size_t>(space.cardinality(free_vars[k]));
            full[free_vars[k]] = static_cast<std::int32_t>(r % card);
            r /= card;
          }
          return theta.row(source.evaluate(full));
        });
    total += inner.scaled_by(slice.probability);
  }
  return total;
}

ExtReal fc_limit(const DenseDistribution& p, const DependencyNetwork& network) {
  if (!(p.space() == network.space())) throw DomainError("fc_limit: space mismatch");
  ExtReal total(0.0);
  for (int i = 0; i < network.num_nodes(); ++i) {
    const double c = network.weights()[i];
    if (c == 0.0) continue;
    const NetworkNode& nd = network.node(i);
    total += kl_to_full_conditional_manifold(p, i, nd.table, nd.source).scaled_by(c);
  }
  return total;
}

}  // namespace depnet

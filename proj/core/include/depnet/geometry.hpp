#pragma once

#include "depnet/ext_real.hpp"
#include "depnet/network.hpp"
#include "depnet/scan_weights.hpp"
#include "depnet/state_space.hpp"

namespace depnet {

/// Shannon entropy H(p) in nats, with 0 log 0 = 0.
double entropy(const DenseDistribution& p);

/// H(p(X_i | X_{-i})): conditional entropy of the target given all other
/// variables.
double conditional_entropy(const DenseDistribution& p, int target);

/// H(p(X_i | Y_i)) for a leaf-partition information source. Zero-probability
/// leaves contribute 0.
double conditional_entropy(const DenseDistribution& p, int target,
                           const InformationSource& source);

/// KL(p || q) in nats. +infinity iff some state has p > 0 and q = 0.
ExtReal kl_divergence(const DenseDistribution& p, const DenseDistribution& q);

/// KL(p || E(theta_i)): divergence from p to the full conditional manifold
/// of node i, equal to KL(p || m_project(p, i, theta, source)).
ExtReal kl_to_full_conditional_manifold(const DenseDistribution& p, int node,
                                        const ConditionalTable& theta,
                                        const InformationSource& source);

/// m-projection of p onto E(theta_i): p(X_{-i}) * theta_i(X_i | Y_i(X_{-i})).
/// One pseudo-Gibbs update moves the chain's distribution exactly here.
DenseDistribution m_project(const DenseDistribution& p, int node, const ConditionalTable& theta,
                            const InformationSource& source);

/// Full conditional divergence FC(p || q) = sum_i c_i KL(p || E_i(q)), where
/// E_i(q) is the manifold of distributions sharing q's full conditional at
/// node i. Contexts with q(x_{-i}) = 0 are unconstrained: they contribute 0
/// when p(x_{-i}) = 0 as well, +infinity otherwise.
ExtReal fc_divergence(const DenseDistribution& p, const DenseDistribution& q,
                      const ScanWeights& weights);

/// FC-limit of p for a network: sum_i c_i KL(p || E(theta_i)). Upper-bounds
/// FC(p || pi) for the network's random-scan stationary distribution pi.
ExtReal fc_limit(const DenseDistribution& p, const DependencyNetwork& network);

/// Second route to KL(p || E(theta_i)): the weighted average, over the
/// assignments of the clamped variables, of the divergence from the clamped
/// conditional of p to the node's restricted manifold. Identical to
/// kl_to_full_conditional_manifold; computing it this way exercises the
/// decomposition used by conditional inference.
ExtReal kl_to_manifold_by_clamp(const DenseDistribution& p, int node,
                                const ConditionalTable& theta, const InformationSource& source,
                                std::span<const int> clamp_vars);

}  // namespace depnet

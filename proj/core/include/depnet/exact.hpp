#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <span>
#include <vector>

#include "depnet/ext_real.hpp"
#include "depnet/network.hpp"
#include "depnet/sampler.hpp"
#include "depnet/state_space.hpp"

namespace depnet {

enum class StationaryMethod : std::uint8_t {
  kAuto,    // direct up to dense_cutoff states, power iteration above
  kDirect,  // linear solve: dense LU up to dense_cutoff states, matrix-free
            // BiCGSTAB refinement above
  kPower,   // power iteration on the transition operator
};

struct SolveOptions {
  double power_tol = 1e-12;            // L1 step residual for power iteration
  std::size_t power_max_iter = 1'000'000;
  std::size_t dense_cutoff = 4096;     // direct solve switches to iterative above
  double krylov_tol = 1e-13;           // residual for the matrix-free direct path
  std::size_t krylov_max_iter = 50'000;
};

/// A transition operator of the pseudo-Gibbs chain, applied to distributions
/// as p -> p*T. The single-node operator T_i acts as the m-projection onto
/// E(theta_i); the random-scan operator is the scan-weighted mixture
/// sum_i c_i T_i. Operators are never materialized densely here; application
/// costs O(|X| * |X_i|) per node.
class TransitionOperator {
 public:
  static TransitionOperator node(const DependencyNetwork& network, int i);
  static TransitionOperator random_scan(const DependencyNetwork& network);

  DenseDistribution apply(const DenseDistribution& p) const;
  void apply_raw(std::span<const double> in, std::span<double> out) const;

  const VariableSpace& space() const;

 private:
  struct Impl;
  explicit TransitionOperator(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Stationary distribution pi of the random-scan chain: pi = pi*T with
/// T = sum_i c_i T_i. The returned distribution satisfies
/// ||pi*T - pi||_1 <= 1e-10. Throws DegeneracyError when the chain is
/// detectably non-ergodic, ConvergenceError when an iterative solve fails.
DenseDistribution stationary_random_scan(const DependencyNetwork& network,
                                         StationaryMethod method = StationaryMethod::kAuto,
                                         const SolveOptions& options = {});

struct SequentialStationary {
  /// phases[r] is the stationary distribution of the homogeneous chain
  /// observed at times t = r (mod n); phases[r+1] = phases[r] * T_order[r].
  std::vector<DenseDistribution> phases;
  /// Arithmetic mean of the phases: the long-run output frequency limit.
  DenseDistribution mixture;
};
SequentialStationary stationary_sequential_scan(const DependencyNetwork& network,
                                                std::span<const int> order,
                                                StationaryMethod method = StationaryMethod::kAuto,
                                                const SolveOptions& options = {});

/// Stationary distribution of the clamped chain, over the space of the
/// unclamped variables (ascending index order). Unclamped nodes are selected
/// uniformly, matching conditional pseudo-Gibbs sampling.
DenseDistribution stationary_clamped(const DependencyNetwork& network, const ClampSet& clamp,
                                     StationaryMethod method = StationaryMethod::kAuto,
                                     const SolveOptions& options = {});

struct FcLimitReport {
  ExtReal fc;        // FC(p || pi)
  ExtReal fc_limit;  // sum_i c_i KL(p || E(theta_i))
  double slack;      // fc_limit - fc; NaN only if both sides are infinite
};

/// Computes FC(p || pi) against the exact stationary distribution and the
/// FC-limit of p, whose difference is non-negative up to solver error.
FcLimitReport verify_fc_limit(const DenseDistribution& p, const DependencyNetwork& network,
                              StationaryMethod method = StationaryMethod::kAuto,
                              const SolveOptions& options = {});

/// Sufficient ergodicity check: true when every table entry is >= eps > 0,
/// which makes the single-site chain irreducible and aperiodic.
bool tables_bounded_below(const DependencyNetwork& network, double eps);

/// CSV export: state index, decoded state tuple, probability.
void write_stationary_csv(std::ostream& os, const DenseDistribution& pi);

}  // namespace depnet

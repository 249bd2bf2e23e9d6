#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "depnet/state_space.hpp"

namespace depnet {

/// Grid Ising model with binary variables (value 0 -> spin -1, 1 -> +1),
/// 4-neighbor adjacency, free boundary. Cell (r, c) is variable r*cols + c.
struct IsingSpec {
  int rows;
  int cols;
  double coupling = 1.0;  // J
  double field = 0.0;     // h
};

/// Exact Boltzmann distribution p(x) ~ exp(J * sum_<uv> s_u s_v + h * sum s_u).
/// Capped at rows*cols <= 20 variables.
DenseDistribution ising_distribution(const IsingSpec& spec);

/// Random DAG over binary variables with exactly n_edges edges and CPT rows
/// drawn from U(0.05, 0.95) then normalized, so the joint has full support.
struct BayesNetSpec {
  int n_nodes;
  int n_edges;
  std::uint64_t seed = 0;
};

struct RandomBayesNet {
  DenseDistribution joint;
  std::vector<std::pair<int, int>> edges;  // (parent, child)
};

RandomBayesNet random_bayesnet(const BayesNetSpec& spec);

/// N i.i.d. samples from p by inverse CDF over flat indices; seed-exact.
Dataset sample_exact(const DenseDistribution& p, std::size_t n, std::uint64_t seed);

}  // namespace depnet

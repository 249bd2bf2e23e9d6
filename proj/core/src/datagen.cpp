#include "depnet/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "depnet/numerics.hpp"
#include "depnet/rng.hpp"

namespace depnet {

DenseDistribution ising_distribution(const IsingSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1) throw DomainError("ising: grid dimensions must be >= 1");
  const int n = spec.rows * spec.cols;
  if (n > 20) {
    throw CapacityError("ising: " + std::to_string(n) +
                        " cells exceeds the 20-variable exact-distribution cap");
  }
  if (n < 1) throw DomainError("ising: empty grid");

  std::vector<std::pair<int, int>> bonds;
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      const int u = r * spec.cols + c;
      if (c + 1 < spec.cols) bonds.emplace_back(u, u + 1);
      if (r + 1 < spec.rows) bonds.emplace_back(u, u + spec.cols);
    }
  }

  VariableSpace space(std::vector<std::int32_t>(n, 2));
  std::vector<double> logw(space.total_states());
  std::vector<int> spin(n);
  for (std::size_t idx = 0; idx < logw.size(); ++idx) {
    for (int i = 0; i < n; ++i) spin[i] = (idx >> i) & 1 ? 1 : -1;
    double energy = 0.0;
    for (const auto& [u, v] : bonds) energy += static_cast<double>(spin[u] * spin[v]);
    energy *= spec.coupling;
    if (spec.field != 0.0) {
      int total = 0;
      for (int s : spin) total += s;
      energy += spec.field * total;
    }
    logw[idx] = energy;
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  std::vector<double> probs(logw.size());
  for (std::size_t i = 0; i < logw.size(); ++i) probs[i] = std::exp(logw[i] - top);
  const double z = stable_sum(probs);
  for (double& v : probs) v /= z;
  return DenseDistribution(std::move(space), std::move(probs));
}

RandomBayesNet random_bayesnet(const BayesNetSpec& spec) {
  const int n = spec.n_nodes;
  if (n < 1) throw DomainError("random_bayesnet: need at least one node");
  if (n > 14) {
    throw CapacityError("random_bayesnet: " + std::to_string(n) +
                        " nodes exceeds the 14-node dense-joint cap");
  }
  const std::int64_t max_edges = static_cast<std::int64_t>(n) * (n - 1) / 2;
  if (spec.n_edges < 0 || spec.n_edges > max_edges) {
    throw DomainError("random_bayesnet: " + std::to_string(spec.n_edges) +
                      " edges infeasible for " + std::to_string(n) + " nodes");
  }

  Rng rng(spec.seed);

  // Random topological order, then a uniform choice of n_edges pairs
  // directed along it.
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.next_index(i + 1)]);

  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(max_edges));
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) pairs.emplace_back(order[a], order[b]);
  }
  for (int k = 0; k < spec.n_edges; ++k) {
    const int pick = k + rng.next_index(static_cast<int>(pairs.size()) - k);
    std::swap(pairs[k], pairs[pick]);
  }
  std::vector<std::pair<int, int>> edges(pairs.begin(), pairs.begin() + spec.n_edges);
  std::sort(edges.begin(), edges.end());

  std::vector<std::vector<int>> parents(n);
  for (const auto& [u, v] : edges) parents[v].push_back(u);
  for (auto& ps : parents) std::sort(ps.begin(), ps.end());

  // CPTs: one row per parent configuration; binary nodes.
  std::vector<std::vector<double>> cpt(n);
  for (int i = 0; i < n; ++i) {
    const std::size_t rows = std::size_t{1} << parents[i].size();
    cpt[i].resize(rows * 2);
    for (std::size_t r = 0; r < rows; ++r) {
      const double u0 = 0.05 + 0.9 * rng.next_unit();
      const double u1 = 0.05 + 0.9 * rng.next_unit();
      cpt[i][r * 2 + 0] = u0 / (u0 + u1);
      cpt[i][r * 2 + 1] = u1 / (u0 + u1);
    }
  }

  VariableSpace space(std::vector<std::int32_t>(n, 2));
  std::vector<double> probs(space.total_states());
  for (std::size_t idx = 0; idx < probs.size(); ++idx) {
    double p = 1.0;
    for (int i = 0; i < n; ++i) {
      std::size_t row = 0;
      for (std::size_t k = 0; k < parents[i].size(); ++k) {
        row |= ((idx >> parents[i][k]) & 1) << k;
      }
      p *= cpt[i][row * 2 + ((idx >> i) & 1)];
    }
    probs[idx] = p;
  }
  const double z = stable_sum(probs);  // 1 up to rounding of the CPT products
  for (double& v : probs) v /= z;
  return RandomBayesNet{DenseDistribution(std::move(space), std::move(probs)), std::move(edges)};
}

Dataset sample_exact(const DenseDistribution& p, std::size_t n, std::uint64_t seed) {
  const VariableSpace& space = p.space();
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;

  Rng rng(seed);
  const int vars = space.num_variables();
  std::vector<std::int32_t> values;
  values.reserve(n * static_cast<std::size_t>(vars));
  for (std::size_t k = 0; k < n; ++k) {
    const double u = rng.next_unit();
    const std::size_t idx = static_cast<std::size_t>(
        std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    const JointState state = decode_state(space, std::min(idx, p.size() - 1));
    values.insert(values.end(), state.begin(), state.end());
  }
  return Dataset(space, std::move(values));
}

}  // namespace depnet

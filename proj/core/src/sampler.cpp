#include "depnet/sampler.hpp"

#include <algorithm>
#include <string>

namespace depnet {

ScanPolicy ScanPolicy::sequential(std::vector<int> order) {
  if (order.empty()) throw DomainError("ScanPolicy::sequential: empty order");
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DomainError("ScanPolicy::sequential: duplicate node in order");
  }
  return ScanPolicy{Kind::kSequential, ScanWeights::uniform(1), std::move(order)};
}

ScanPolicy ScanPolicy::sequential_natural(int n) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  return sequential(std::move(order));
}

ClampSet::ClampSet(std::vector<ClampEntry> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end());
  for (std::size_t k = 1; k < entries_.size(); ++k) {
    if (entries_[k].first == entries_[k - 1].first) {
      throw DomainError("ClampSet: duplicate variable " + std::to_string(entries_[k].first));
    }
  }
}

bool ClampSet::is_clamped(int var) const noexcept { return value_of(var) >= 0; }

std::int32_t ClampSet::value_of(int var) const noexcept {
  for (const auto& [v, value] : entries_) {
    if (v == var) return value;
    if (v > var) break;
  }
  return -1;
}

SampleRun::SampleRun(VariableSpace space, std::vector<std::int32_t> states_row_major,
                     std::vector<std::int32_t> selected, std::uint64_t seed, ScanPolicy policy)
    : space_(std::move(space)),
      states_(std::move(states_row_major)),
      selected_(std::move(selected)),
      seed_(seed),
      policy_(std::move(policy)) {
  const std::size_t n = static_cast<std::size_t>(space_.num_variables());
  if (n == 0 || states_.size() % n != 0) throw DomainError("SampleRun: bad state data");
  count_ = states_.size() / n;
  if (selected_.size() != count_) throw DomainError("SampleRun: selected size mismatch");
}

namespace {

void validate_clamp(const DependencyNetwork& network, const ClampSet& clamp) {
  const VariableSpace& space = network.space();
  for (const auto& [var, value] : clamp.entries()) {
    if (var < 0 || var >= space.num_variables()) {
      throw DomainError("clamp: variable " + std::to_string(var) + " out of range");
    }
    if (value < 0 || value >= space.cardinality(var)) {
      throw DomainError("clamp: value " + std::to_string(value) + " out of range for X" +
                        std::to_string(var));
    }
  }
  if (clamp.size() >= static_cast<std::size_t>(space.num_variables())) {
    throw DomainError("clamp: all nodes clamped; nothing to sample");
  }
}

void validate_policy(const DependencyNetwork& network, const ClampSet& clamp,
                     const ScanPolicy& policy) {
  const int n = network.num_nodes();
  if (policy.kind == ScanPolicy::Kind::kRandom) {
    if (policy.weights.size() != n) throw DomainError("scan policy: weight count mismatch");
    for (int i = 0; i < n; ++i) {
      if (clamp.is_clamped(i) && policy.weights[i] > 0.0) {
        throw DomainError("scan policy: positive weight on clamped node " + std::to_string(i));
      }
    }
  } else {
    std::size_t free_count = static_cast<std::size_t>(n) - clamp.size();
    if (policy.order.size() != free_count) {
      throw DomainError("scan policy: sequential order must visit each unclamped node once");
    }
    for (int i : policy.order) {
      if (i < 0 || i >= n) throw DomainError("scan policy: order node out of range");
      if (clamp.is_clamped(i)) {
        throw DomainError("scan policy: clamped node " + std::to_string(i) + " in order");
      }
    }
  }
}

}  // namespace

SampleRun conditional_pseudo_gibbs(const DependencyNetwork& network, const ClampSet& clamp,
                                   const ScanPolicy& policy, std::size_t n_steps,
                                   std::uint64_t seed, const std::optional<JointState>& init) {
  if (n_steps < 1) throw DomainError("pseudo_gibbs: n_steps must be >= 1");
  validate_clamp(network, clamp);
  validate_policy(network, clamp, policy);

  const VariableSpace& space = network.space();
  const int n = space.num_variables();
  Rng rng(seed);

  JointState x(n);
  if (init.has_value()) {
    validate_state(space, *init);
    x = *init;
    for (const auto& [var, value] : clamp.entries()) {
      if (x[var] != value) {
        throw DomainError("pseudo_gibbs: init state disagrees with clamp on X" +
                          std::to_string(var));
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      const std::int32_t fixed = clamp.value_of(i);
      x[i] = fixed >= 0 ? fixed : static_cast<std::int32_t>(rng.next_index(space.cardinality(i)));
    }
  }

  std::vector<std::int32_t> states;
  states.reserve(n_steps * static_cast<std::size_t>(n));
  std::vector<std::int32_t> selected;
  selected.reserve(n_steps);

  const auto& weights = policy.weights.values();
  for (std::size_t t = 0; t < n_steps; ++t) {
    states.insert(states.end(), x.begin(), x.end());

    int i;
    if (policy.kind == ScanPolicy::Kind::kRandom) {
      i = rng.next_categorical(weights);
    } else {
      i = policy.order[t % policy.order.size()];
    }
    selected.push_back(i);

    const NetworkNode& nd = network.node(i);
    const std::int32_t y = nd.source.evaluate(x);
    x[i] = static_cast<std::int32_t>(rng.next_categorical(nd.table.row(y)));
  }
  return SampleRun(space, std::move(states), std::move(selected), seed, policy);
}

SampleRun pseudo_gibbs(const DependencyNetwork& network, const ScanPolicy& policy,
                       std::size_t n_steps, std::uint64_t seed,
                       const std::optional<JointState>& init) {
  return conditional_pseudo_gibbs(network, ClampSet{}, policy, n_steps, seed, init);
}

DenseDistribution frequencies(const SampleRun& run) {
  if (run.size() == 0) throw DomainError("frequencies: empty run");
  const VariableSpace& space = run.space();
  if (space.total_states() > kDenseStateCap) {
    throw CapacityError("frequencies: dense cap exceeded");
  }
  std::vector<std::int64_t> counts(space.total_states(), 0);
  for (std::size_t t = 0; t < run.size(); ++t) {
    counts[encode_state(space, run.state(t))] += 1;
  }
  std::vector<double> probs(space.total_states());
  const double n = static_cast<double>(run.size());
  for (std::size_t x = 0; x < counts.size(); ++x) {
    probs[x] = static_cast<double>(counts[x]) / n;
  }
  return DenseDistribution(space, std::move(probs));
}

}  // namespace depnet

#include "depnet/learning.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>

#include "depnet/numerics.hpp"

namespace depnet {

namespace {

// (1/N) * (N_y ln N_y - sum_c c ln c); the weighted empirical conditional
// entropy of one leaf. Shared by every cost path so local deltas and global
// recomputation agree to rounding.
double leaf_entropy_term(const LeafStats& s, std::int64_t n_samples) {
  if (s.total <= 0) return 0.0;
  double acc = static_cast<double>(s.total) * std::log(static_cast<double>(s.total));
  for (std::int64_t c : s.counts) {
    if (c > 0) acc -= static_cast<double>(c) * std::log(static_cast<double>(c));
  }
  return acc / static_cast<double>(n_samples);
}

int env_thread_count() {
  if (const char* env = std::getenv("DEPNET_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int count, const std::function<void(int)>& fn) {
  const int threads = std::min(env_thread_count(), count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

double mdl_penalty(std::int64_t k, std::int64_t n_samples) {
  if (k < 0) throw DomainError("mdl_penalty: k must be non-negative");
  if (n_samples < 1) throw DomainError("mdl_penalty: N must be >= 1");
  return static_cast<double>(k) * std::log(static_cast<double>(n_samples)) /
         (2.0 * static_cast<double>(n_samples));
}

PenaltySpec PenaltySpec::mdl() {
  PenaltySpec p;
  p.fn_ = [](std::int64_t k, std::int64_t n) { return mdl_penalty(k, n); };
  return p;
}

PenaltySpec PenaltySpec::none() {
  PenaltySpec p;
  p.fn_ = [](std::int64_t, std::int64_t) { return 0.0; };
  return p;
}

PenaltySpec PenaltySpec::custom(std::function<double(std::int64_t, std::int64_t)> fn) {
  if (!fn) throw DomainError("PenaltySpec::custom: empty function");
  PenaltySpec p;
  p.fn_ = std::move(fn);
  return p;
}

double PenaltySpec::operator()(std::int64_t k, std::int64_t n_samples) const {
  const double r = fn_(k, n_samples);
  if (!(r >= 0.0)) throw DomainError("penalty R(k,N) must be non-negative");
  return r;
}

std::vector<LeafStats> collect_leaf_stats(const Dataset& data, int node,
                                          const InformationSource& source) {
  if (!(source.space() == data.space()) || source.owner() != node) {
    throw DomainError("collect_leaf_stats: source does not belong to this node/space");
  }
  const std::int32_t card = data.space().cardinality(node);
  std::vector<LeafStats> stats(source.leaf_count());
  for (auto& s : stats) s.counts.assign(card, 0);
  for (std::size_t k = 0; k < data.size(); ++k) {
    const auto sample = data.sample(k);
    LeafStats& s = stats[source.evaluate(sample)];
    s.total += 1;
    s.counts[sample[node]] += 1;
  }
  return stats;
}

double leaf_cost(const LeafStats& stats, std::int64_t n_samples, std::int32_t card,
                 const PenaltySpec& penalty) {
  if (n_samples < 1) throw DomainError("leaf_cost: N must be >= 1");
  return leaf_entropy_term(stats, n_samples) + penalty(card - 1, n_samples);
}

double node_cost(const Dataset& data, int node, const InformationSource& source,
                 const PenaltySpec& penalty) {
  if (data.size() == 0) throw DomainError("node_cost: empty dataset");
  const std::int32_t card = data.space().cardinality(node);
  const auto stats = collect_leaf_stats(data, node, source);
  StableAccumulator acc;
  for (const LeafStats& s : stats) acc.add(leaf_cost(s, data.size(), card, penalty));
  return acc.total();
}

double delta_split(const Dataset& data, int node, const InformationSource& source, std::int32_t y,
                   int j, const PenaltySpec& penalty) {
  if (j == node) throw DomainError("delta_split: cannot split on the owner variable");
  if (j < 0 || j >= data.space().num_variables()) throw DomainError("delta_split: bad variable");
  if (y < 0 || y >= source.leaf_count()) throw DomainError("delta_split: bad leaf");
  const std::int32_t card_i = data.space().cardinality(node);
  const std::int32_t card_j = data.space().cardinality(j);

  LeafStats parent;
  parent.counts.assign(card_i, 0);
  std::vector<LeafStats> children(card_j);
  for (auto& c : children) c.counts.assign(card_i, 0);
  for (std::size_t k = 0; k < data.size(); ++k) {
    const auto sample = data.sample(k);
    if (source.evaluate(sample) != y) continue;
    parent.total += 1;
    parent.counts[sample[node]] += 1;
    children[sample[j]].total += 1;
    children[sample[j]].counts[sample[node]] += 1;
  }
  double delta = -leaf_cost(parent, data.size(), card_i, penalty);
  for (const LeafStats& c : children) delta += leaf_cost(c, data.size(), card_i, penalty);
  return delta;
}

double delta_merge(const Dataset& data, int node, const InformationSource& source, std::int32_t y0,
                   std::int32_t y1, const PenaltySpec& penalty) {
  if (!(y0 < y1)) throw DomainError("delta_merge: requires y0 < y1");
  if (y0 < 0 || y1 >= source.leaf_count()) throw DomainError("delta_merge: bad leaf");
  const std::int32_t card_i = data.space().cardinality(node);

  LeafStats a, b;
  a.counts.assign(card_i, 0);
  b.counts.assign(card_i, 0);
  for (std::size_t k = 0; k < data.size(); ++k) {
    const auto sample = data.sample(k);
    const std::int32_t leaf = source.evaluate(sample);
    if (leaf == y0) {
      a.total += 1;
      a.counts[sample[node]] += 1;
    } else if (leaf == y1) {
      b.total += 1;
      b.counts[sample[node]] += 1;
    }
  }
  LeafStats merged;
  merged.total = a.total + b.total;
  merged.counts.assign(card_i, 0);
  for (std::int32_t v = 0; v < card_i; ++v) merged.counts[v] = a.counts[v] + b.counts[v];
  return leaf_cost(merged, data.size(), card_i, penalty) -
         leaf_cost(a, data.size(), card_i, penalty) - leaf_cost(b, data.size(), card_i, penalty);
}

ConditionalTable learn_parameters(const Dataset& data, int node,
                                  const InformationSource& source) {
  if (data.size() == 0) throw DomainError("learn_parameters: empty dataset");
  const std::int32_t card = data.space().cardinality(node);
  const auto stats = collect_leaf_stats(data, node, source);
  std::vector<double> rows(stats.size() * static_cast<std::size_t>(card));
  for (std::size_t y = 0; y < stats.size(); ++y) {
    const LeafStats& s = stats[y];
    for (std::int32_t v = 0; v < card; ++v) {
      rows[y * card + v] = s.total > 0
                               ? static_cast<double>(s.counts[v]) / static_cast<double>(s.total)
                               : 1.0 / static_cast<double>(card);
    }
  }
  return ConditionalTable(node, card, source.leaf_count(), std::move(rows));
}

ConditionalTable smoothed_parameters(const Dataset& data, int node,
                                     const InformationSource& source, double alpha) {
  if (data.size() == 0) throw DomainError("smoothed_parameters: empty dataset");
  if (!(alpha >= 0.0)) throw DomainError("smoothed_parameters: alpha must be >= 0");
  const std::int32_t card = data.space().cardinality(node);
  const auto stats = collect_leaf_stats(data, node, source);
  std::vector<double> rows(stats.size() * static_cast<std::size_t>(card));
  for (std::size_t y = 0; y < stats.size(); ++y) {
    const LeafStats& s = stats[y];
    const double denom = static_cast<double>(s.total) + alpha * card;
    for (std::int32_t v = 0; v < card; ++v) {
      rows[y * card + v] = denom > 0.0
                               ? (static_cast<double>(s.counts[v]) + alpha) / denom
                               : 1.0 / static_cast<double>(card);
    }
  }
  return ConditionalTable(node, card, source.leaf_count(), std::move(rows));
}

void write_cost_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace) {
  os << "iteration,op,delta,cost,leaf_count\n";
  char buf[64];
  auto put = [&](double v) {
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    os.write(buf, end - buf);
  };
  for (const TraceRow& row : trace) {
    os << row.iteration << ',' << row.op << ',';
    put(row.delta);
    os << ',';
    put(row.cost);
    os << ',' << row.leaf_count << '\n';
  }
}

NodeStructureLearner::NodeStructureLearner(const Dataset& data, int node, LearnConfig config)
    : data_(data), node_(node), config_(std::move(config)) {
  if (data_.size() == 0) throw DomainError("NodeStructureLearner: empty dataset");
  if (node_ < 0 || node_ >= data_.space().num_variables()) {
    throw DomainError("NodeStructureLearner: node out of range");
  }
  card_ = data_.space().cardinality(node_);
  leaf_of_.assign(data_.size(), 0);
  LeafStats root;
  root.total = static_cast<std::int64_t>(data_.size());
  root.counts.assign(card_, 0);
  for (std::size_t k = 0; k < data_.size(); ++k) root.counts[data_.sample(k)[node_]] += 1;
  stats_.push_back(std::move(root));
  cost_ = leaf_cost_of(stats_[0]);
  trace_.push_back(TraceRow{0, "init", 0.0, cost_, 1});
}

double NodeStructureLearner::leaf_cost_of(const LeafStats& s) const {
  return leaf_cost(s, static_cast<std::int64_t>(data_.size()), card_, config_.penalty);
}

std::vector<NodeStructureLearner::Candidate> NodeStructureLearner::candidates() const {
  const int n = data_.space().num_variables();
  const std::int32_t leaves = leaf_count();
  const std::int64_t n_samples = static_cast<std::int64_t>(data_.size());

  // One pass: per (leaf, variable) child counts over (x_j, x_i).
  std::vector<std::vector<std::int64_t>> child_counts(
      static_cast<std::size_t>(leaves) * n);
  for (std::int32_t y = 0; y < leaves; ++y) {
    if (stats_[y].total == 0) continue;
    for (int j = 0; j < n; ++j) {
      if (j == node_) continue;
      child_counts[static_cast<std::size_t>(y) * n + j].assign(
          static_cast<std::size_t>(data_.space().cardinality(j)) * card_, 0);
    }
  }
  for (std::size_t k = 0; k < data_.size(); ++k) {
    const auto sample = data_.sample(k);
    const std::int32_t y = leaf_of_[k];
    const std::int32_t xi = sample[node_];
    for (int j = 0; j < n; ++j) {
      if (j == node_) continue;
      child_counts[static_cast<std::size_t>(y) * n + j]
                  [static_cast<std::size_t>(sample[j]) * card_ + xi] += 1;
    }
  }

  std::vector<Candidate> result;
  LeafStats child;
  for (std::int32_t y = 0; y < leaves; ++y) {
    if (stats_[y].total == 0) continue;  // redundant split
    const double parent_cost = leaf_cost_of(stats_[y]);
    for (int j = 0; j < n; ++j) {
      if (j == node_) continue;
      const auto& counts = child_counts[static_cast<std::size_t>(y) * n + j];
      const std::int32_t card_j = data_.space().cardinality(j);
      int populated = 0;
      for (std::int32_t w = 0; w < card_j; ++w) {
        std::int64_t total = 0;
        for (std::int32_t v = 0; v < card_; ++v) total += counts[static_cast<std::size_t>(w) * card_ + v];
        if (total > 0) ++populated;
      }
      if (populated <= 1) continue;  // x_j constant within the leaf
      double delta = -parent_cost;
      for (std::int32_t w = 0; w < card_j; ++w) {
        child.total = 0;
        child.counts.assign(card_, 0);
        for (std::int32_t v = 0; v < card_; ++v) {
          child.counts[v] = counts[static_cast<std::size_t>(w) * card_ + v];
          child.total += child.counts[v];
        }
        delta += leaf_cost(child, n_samples, card_, config_.penalty);
      }
      result.push_back(Candidate{SourceOp::split(y, j), delta});
    }
  }

  std::int64_t merge_budget = config_.merge_candidate_cap;
  LeafStats merged;
  for (std::int32_t y0 = 0; y0 < leaves && merge_budget != 0; ++y0) {
    for (std::int32_t y1 = y0 + 1; y1 < leaves && merge_budget != 0; ++y1) {
      merged.total = stats_[y0].total + stats_[y1].total;
      merged.counts.assign(card_, 0);
      for (std::int32_t v = 0; v < card_; ++v) {
        merged.counts[v] = stats_[y0].counts[v] + stats_[y1].counts[v];
      }
      const double delta = leaf_cost(merged, n_samples, card_, config_.penalty) -
                           leaf_cost_of(stats_[y0]) - leaf_cost_of(stats_[y1]);
      result.push_back(Candidate{SourceOp::merge(y0, y1), delta});
      if (merge_budget > 0) --merge_budget;
    }
  }
  return result;
}

void NodeStructureLearner::apply(const SourceOp& op) {
  const std::int32_t leaves = leaf_count();
  if (op.kind == SourceOp::Kind::kSplit) {
    const std::int32_t card_j = data_.space().cardinality(op.b);
    for (std::size_t k = 0; k < leaf_of_.size(); ++k) {
      std::int32_t& v = leaf_of_[k];
      if (v == op.a) {
        v = leaves - 1 + data_.sample(k)[op.b];
      } else if (v > op.a) {
        --v;
      }
    }
    stats_.assign(static_cast<std::size_t>(leaves - 1 + card_j), LeafStats{});
  } else {
    for (std::size_t k = 0; k < leaf_of_.size(); ++k) {
      std::int32_t& v = leaf_of_[k];
      if (v == op.b) {
        v = op.a;
      } else if (v > op.b) {
        --v;
      }
    }
    stats_.assign(static_cast<std::size_t>(leaves - 1), LeafStats{});
  }
  for (auto& s : stats_) s.counts.assign(card_, 0);
  for (std::size_t k = 0; k < leaf_of_.size(); ++k) {
    LeafStats& s = stats_[leaf_of_[k]];
    s.total += 1;
    s.counts[data_.sample(k)[node_]] += 1;
  }
  ops_.push_back(op);
}

bool NodeStructureLearner::step() {
  if (static_cast<std::size_t>(iteration_) >= config_.max_iterations) return false;
  const auto cands = candidates();
  if (cands.empty()) return false;
  std::size_t best = 0;
  for (std::size_t k = 1; k < cands.size(); ++k) {
    if (cands[k].delta < cands[best].delta) best = k;
  }
  if (cands[best].delta >= 0.0) return false;

  const double cost_before = cost_;
  apply(cands[best].op);
  StableAccumulator acc;
  for (const LeafStats& s : stats_) acc.add(leaf_cost_of(s));
  cost_ = acc.total();
  if (!(cost_ < cost_before)) {  // floating-point guard; candidates are within rounding of 0
    cost_ = cost_before;
    ops_.pop_back();
    // roll back leaf assignments and stats by rebuilding from the op log
    const InformationSource src(data_.space(), node_, ops_);
    for (std::size_t k = 0; k < leaf_of_.size(); ++k) {
      leaf_of_[k] = src.evaluate(data_.sample(k));
    }
    stats_.assign(src.leaf_count(), LeafStats{});
    for (auto& s : stats_) s.counts.assign(card_, 0);
    for (std::size_t k = 0; k < leaf_of_.size(); ++k) {
      LeafStats& s = stats_[leaf_of_[k]];
      s.total += 1;
      s.counts[data_.sample(k)[node_]] += 1;
    }
    return false;
  }

  ++iteration_;
  const SourceOp& op = cands[best].op;
  const std::string label =
      op.kind == SourceOp::Kind::kSplit
          ? "split(" + std::to_string(op.a) + "," + std::to_string(op.b) + ")"
          : "merge(" + std::to_string(op.a) + "," + std::to_string(op.b) + ")";
  trace_.push_back(TraceRow{iteration_, label, cands[best].delta, cost_, leaf_count()});
  return true;
}

InformationSource NodeStructureLearner::source() const {
  return InformationSource(data_.space(), node_, ops_);
}

NodeLearnResult structure_learn_node(const Dataset& data, int node, const LearnConfig& config) {
  NodeStructureLearner learner(data, node, config);
  while (learner.step()) {
  }
  InformationSource source = learner.source();
  const double alpha = config.sampling_alpha >= 0.0
                           ? config.sampling_alpha
                           : 1.0 / static_cast<double>(data.size());
  ConditionalTable mle = learn_parameters(data, node, source);
  ConditionalTable sampling = smoothed_parameters(data, node, source, alpha);
  return NodeLearnResult{std::move(source), std::move(mle), std::move(sampling),
                         learner.trace()};
}

LearnResult learn_network_detailed(const Dataset& data, const LearnConfig& config) {
  if (data.size() == 0) throw DomainError("learn_network: empty dataset");
  const int n = data.space().num_variables();
  std::vector<std::optional<NodeLearnResult>> slots(n);
  parallel_for(n, [&](int i) { slots[i] = structure_learn_node(data, i, config); });

  std::vector<NetworkNode> nodes;
  std::vector<NodeLearnResult> detail;
  nodes.reserve(n);
  detail.reserve(n);
  for (int i = 0; i < n; ++i) {
    NodeLearnResult& r = *slots[i];
    nodes.push_back(NetworkNode{r.source, r.sampling});
    detail.push_back(std::move(r));
  }
  DependencyNetwork net(data.space(), std::move(nodes), ScanWeights::uniform(n));
  return LearnResult{std::move(net), std::move(detail)};
}

DependencyNetwork learn_network(const Dataset& data, const LearnConfig& config) {
  return learn_network_detailed(data, config).network;
}

}  // namespace depnet

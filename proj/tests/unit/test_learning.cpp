#include <doctest.h>

#include <cmath>
#include <sstream>

#include "depnet/depnet.hpp"
#include "../support.hpp"

using namespace depnet;
using testsupport::binary_space;
using testsupport::random_distribution;
using testsupport::random_source;

namespace {

Dataset counting_dataset() {
  // (0,0), (0,0), (1,1), (0,1)
  return Dataset(VariableSpace({2, 2}), {0, 0, 0, 0, 1, 1, 0, 1});
}

// i.i.d. product dataset over binary variables with marginals p1[i].
Dataset product_dataset(Rng& rng, const std::vector<double>& p1, std::size_t n) {
  const int vars = static_cast<int>(p1.size());
  std::vector<std::int32_t> values;
  values.reserve(n * vars);
  for (std::size_t k = 0; k < n; ++k) {
    for (int i = 0; i < vars; ++i) {
      values.push_back(rng.next_unit() < p1[i] ? 1 : 0);
    }
  }
  return Dataset(binary_space(vars), std::move(values));
}

}  // namespace

TEST_SUITE("learning") {

TEST_CASE("mdl penalty values") {
  CHECK(mdl_penalty(0, 50) == 0.0);
  CHECK(mdl_penalty(1, 100) == doctest::Approx(std::log(100.0) / 200.0).epsilon(1e-15));
  CHECK(mdl_penalty(1, 100) == doctest::Approx(0.0230259).epsilon(1e-5));
  CHECK(mdl_penalty(12, 100000) ==
        doctest::Approx(12.0 * std::log(1e5) / 2e5).epsilon(1e-15));
  CHECK(mdl_penalty(12, 100000) == doctest::Approx(6.9078e-4).epsilon(1e-4));
  CHECK_THROWS_AS(mdl_penalty(1, 0), DomainError);
  CHECK_THROWS_AS(mdl_penalty(-1, 10), DomainError);
  CHECK_THROWS_AS(PenaltySpec::custom([](std::int64_t, std::int64_t) { return -1.0; })(1, 1),
                  DomainError);
}

TEST_CASE("learn_parameters: counting example and single leaf") {
  const Dataset data = counting_dataset();
  const InformationSource y_is_x0(data.space(), 1, {SourceOp::split(0, 0)});
  const ConditionalTable table = learn_parameters(data, 1, y_is_x0);

  JointState probe{0, 0};
  const std::int32_t leaf0 = y_is_x0.evaluate(probe);
  probe[0] = 1;
  const std::int32_t leaf1 = y_is_x0.evaluate(probe);
  CHECK(table.at(leaf0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(table.at(leaf0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(table.at(leaf1, 0) == doctest::Approx(0.0));
  CHECK(table.at(leaf1, 1) == doctest::Approx(1.0));

  const InformationSource trivial = InformationSource::trivial(data.space(), 1);
  const ConditionalTable marg = learn_parameters(data, 1, trivial);
  CHECK(marg.at(0, 0) == doctest::Approx(0.5));
  CHECK(marg.at(0, 1) == doctest::Approx(0.5));
}

TEST_CASE("learn_parameters: per-row grid search confirms the minimizer") {
  Rng rng(401);
  const VariableSpace space = binary_space(2);
  const DenseDistribution p = random_distribution(rng, space);
  const Dataset data = sample_exact(p, 400, 11);
  const DenseDistribution pd = empirical_distribution(data);
  const InformationSource src(space, 0, {SourceOp::split(0, 1)});
  const ConditionalTable mle = learn_parameters(data, 0, src);

  for (std::int32_t y = 0; y < 2; ++y) {
    double best_t = -1.0, best_kl = std::numeric_limits<double>::infinity();
    for (int g = 1; g < 1000; ++g) {
      const double t = g / 1000.0;
      std::vector<double> rows = {mle.at(0, 0), mle.at(0, 1), mle.at(1, 0), mle.at(1, 1)};
      rows[2 * y] = 1.0 - t;
      rows[2 * y + 1] = t;
      const ConditionalTable cand(0, 2, 2, rows);
      const double kl = kl_to_full_conditional_manifold(pd, 0, cand, src).as_double();
      if (kl < best_kl) {
        best_kl = kl;
        best_t = t;
      }
    }
    CHECK(std::abs(best_t - mle.at(y, 1)) <= 1.5e-3);
  }
}

TEST_CASE("Thm-4 entropy identity: KL to manifold equals the entropy gap") {
  Rng rng(409);
  const VariableSpace space({2, 3, 2});
  for (int t = 0; t < 20; ++t) {
    const DenseDistribution p = random_distribution(rng, space);
    const Dataset data = sample_exact(p, 500, 1000 + t);
    const DenseDistribution pd = empirical_distribution(data);
    const int i = rng.next_index(3);
    const InformationSource src = random_source(rng, space, i, rng.next_index(4));
    const ConditionalTable mle = learn_parameters(data, i, src);
    const double lhs = kl_to_full_conditional_manifold(pd, i, mle, src).value();
    const double rhs = conditional_entropy(pd, i, src) - conditional_entropy(pd, i);
    CHECK(std::abs(lhs - rhs) <= 1e-10);
  }
}

TEST_CASE("smoothed parameters are strictly positive and rows sum to 1") {
  const Dataset data = counting_dataset();
  const InformationSource src(data.space(), 1, {SourceOp::split(0, 0)});
  const ConditionalTable smoothed = smoothed_parameters(data, 1, src, 0.25);
  for (std::int32_t y = 0; y < 2; ++y) {
    for (std::int32_t v = 0; v < 2; ++v) CHECK(smoothed.at(y, v) > 0.0);
  }
  // empty leaf (value x_0 = 1 has one sample; make an empty leaf via a 3-way source)
  const VariableSpace s32({2, 3});
  Dataset d32(s32, {0, 0, 1, 0, 0, 1});  // x_1 = 2 never observed
  const InformationSource src2(s32, 0, {SourceOp::split(0, 1)});
  const ConditionalTable mle = learn_parameters(d32, 0, src2);
  JointState probe{0, 2};
  const std::int32_t empty_leaf = src2.evaluate(probe);
  CHECK(mle.at(empty_leaf, 0) == doctest::Approx(0.5));  // uniform fill
}

TEST_CASE("leaf_cost examples") {
  const PenaltySpec mdl = PenaltySpec::mdl();
  const PenaltySpec none = PenaltySpec::none();

  LeafStats pure;
  pure.total = 50;
  pure.counts = {50, 0};
  CHECK(leaf_cost(pure, 100, 2, mdl) == doctest::Approx(std::log(100.0) / 200.0).epsilon(1e-15));

  LeafStats half;
  half.total = 4;
  half.counts = {2, 2};
  CHECK(leaf_cost(half, 4, 2, none) == doctest::Approx(std::log(2.0)).epsilon(1e-14));

  LeafStats empty;
  empty.counts = {0, 0};
  CHECK(leaf_cost(empty, 100, 2, mdl) == doctest::Approx(mdl_penalty(1, 100)).epsilon(1e-15));
}

TEST_CASE("node_cost decomposes as the sum of leaf costs") {
  Rng rng(419);
  const VariableSpace space({2, 2, 3});
  const DenseDistribution p = random_distribution(rng, space);
  const Dataset data = sample_exact(p, 300, 3);
  const int i = 1;
  const InformationSource src = random_source(rng, space, i, 3);
  const PenaltySpec mdl = PenaltySpec::mdl();
  const auto stats = collect_leaf_stats(data, i, src);
  StableAccumulator acc;
  for (const LeafStats& s : stats) acc.add(leaf_cost(s, data.size(), 2, mdl));
  CHECK(node_cost(data, i, src, mdl) == doctest::Approx(acc.total()).epsilon(1e-15));
}

TEST_CASE("delta_split: identical child conditionals give zero gain") {
  // leaf samples (x_j, x_i): (0,0)x2, (0,1)x2, (1,0)x1, (1,1)x1
  const VariableSpace space = binary_space(2);
  Dataset data(space, {0, 0, 0, 1, 0, 0, 0, 1, 1, 0, 1, 1});  // (x0,x1) pairs, node i = 1
  const InformationSource trivial = InformationSource::trivial(space, 1);
  const double d = delta_split(data, 1, trivial, 0, 0, PenaltySpec::none());
  CHECK(std::abs(d) <= 1e-12);
  // with MDL the same split costs one extra penalty unit
  const double dm = delta_split(data, 1, trivial, 0, 0, PenaltySpec::mdl());
  CHECK(dm == doctest::Approx(mdl_penalty(1, 6)).epsilon(1e-12));
}

TEST_CASE("delta_split: splitting a pure leaf only multiplies the penalty") {
  const VariableSpace space({2, 3});
  // node 0 pure (always 0); x_1 varies over 3 values
  Dataset data(space, {0, 0, 0, 1, 0, 2, 0, 0, 0, 1, 0, 2});
  const InformationSource trivial = InformationSource::trivial(space, 0);
  const double d = delta_split(data, 0, trivial, 0, 1, PenaltySpec::mdl());
  CHECK(d == doctest::Approx(2.0 * mdl_penalty(1, 6)).epsilon(1e-12));
}

TEST_CASE("delta_merge: identical conditionals save one penalty unit") {
  const VariableSpace space = binary_space(2);
  // Y = X_0; both leaves have conditional (1/2, 1/2)
  Dataset data(space, {0, 0, 0, 1, 1, 0, 1, 1});
  const InformationSource src(space, 1, {SourceOp::split(0, 0)});
  const double d = delta_merge(data, 1, src, 0, 1, PenaltySpec::mdl());
  CHECK(d == doctest::Approx(-mdl_penalty(1, 4)).epsilon(1e-12));

  // two pure leaves with different majority values: entropy strictly increases
  Dataset det(space, {0, 0, 0, 0, 1, 1, 1, 1});
  const InformationSource src2(space, 1, {SourceOp::split(0, 0)});
  const double d2 = delta_merge(det, 1, src2, 0, 1, PenaltySpec::none());
  CHECK(d2 > 0.0);
  CHECK(d2 == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("delta_merge inverts the split it undoes") {
  Rng rng(431);
  const VariableSpace space({2, 2, 2});
  const DenseDistribution p = random_distribution(rng, space);
  const Dataset data = sample_exact(p, 250, 77);
  const PenaltySpec mdl = PenaltySpec::mdl();
  const InformationSource before = InformationSource::trivial(space, 0);
  const double ds = delta_split(data, 0, before, 0, 2, mdl);
  const InformationSource after(space, 0, {SourceOp::split(0, 2)});
  // binary split of the only leaf leaves the children at indices 0 and 1
  const double dm = delta_merge(data, 0, after, 0, 1, mdl);
  CHECK(dm == doctest::Approx(-ds).epsilon(1e-12));
}

TEST_CASE("deltas agree with global cost recomputation") {
  Rng rng(433);
  const VariableSpace space({2, 3, 2});
  const DenseDistribution p = random_distribution(rng, space);
  const Dataset data = sample_exact(p, 400, 5);
  const PenaltySpec mdl = PenaltySpec::mdl();
  for (int t = 0; t < 10; ++t) {
    const int i = rng.next_index(3);
    const InformationSource src = random_source(rng, space, i, rng.next_index(3));
    const double base = node_cost(data, i, src, mdl);

    for (std::int32_t y = 0; y < src.leaf_count(); ++y) {
      for (int j = 0; j < 3; ++j) {
        if (j == i) continue;
        std::vector<SourceOp> ops = src.ops();
        ops.push_back(SourceOp::split(y, j));
        const InformationSource next(space, i, ops);
        const double global = node_cost(data, i, next, mdl) - base;
        CHECK(std::abs(delta_split(data, i, src, y, j, mdl) - global) <= 1e-12);
      }
    }
    if (src.leaf_count() >= 2) {
      std::vector<SourceOp> ops = src.ops();
      ops.push_back(SourceOp::merge(0, 1));
      const InformationSource next(space, i, ops);
      const double global = node_cost(data, i, next, mdl) - base;
      CHECK(std::abs(delta_merge(data, i, src, 0, 1, mdl) - global) <= 1e-12);
    }
  }
}

TEST_CASE("structure learning: independent variable keeps the single leaf") {
  int successes = 0;
  for (int seed = 0; seed < 20; ++seed) {
    Rng rng(9000 + seed);
    const Dataset data = product_dataset(rng, {0.35, 0.6, 0.5}, 10000);
    const NodeLearnResult res = structure_learn_node(data, 0, LearnConfig{});
    if (res.source.leaf_count() == 1) ++successes;
  }
  CHECK(successes >= 18);
}

TEST_CASE("structure learning: deterministic dependence is found") {
  Rng rng(443);
  std::vector<std::int32_t> values;
  for (int k = 0; k < 1000; ++k) {
    const std::int32_t x0 = rng.next_unit() < 0.5 ? 0 : 1;
    values.push_back(x0);
    values.push_back(x0);  // X_1 = X_0
  }
  const Dataset data(binary_space(2), std::move(values));
  const NodeLearnResult res = structure_learn_node(data, 1, LearnConfig{});
  REQUIRE(res.source.leaf_count() == 2);
  REQUIRE(res.source.ops().size() == 1);
  CHECK(res.source.ops()[0] == SourceOp::split(0, 0));
  // point-mass rows
  JointState probe{0, 0};
  const std::int32_t l0 = res.source.evaluate(probe);
  CHECK(res.mle.at(l0, 0) == doctest::Approx(1.0));
  CHECK(res.sampling.at(l0, 0) > 0.99);
  CHECK(res.sampling.at(l0, 1) > 0.0);
}

TEST_CASE("cost trace decreases strictly across accepted iterations") {
  Rng rng(449);
  const VariableSpace space({2, 2, 3});
  const DenseDistribution p = random_distribution(rng, space);
  const Dataset data = sample_exact(p, 2000, 13);
  const NodeLearnResult res = structure_learn_node(data, 0, LearnConfig{});
  REQUIRE(!res.trace.empty());
  for (std::size_t k = 1; k < res.trace.size(); ++k) {
    CHECK(res.trace[k].cost < res.trace[k - 1].cost);
    CHECK(res.trace[k].delta < 0.0);
  }
  std::ostringstream os;
  write_cost_trace_csv(os, res.trace);
  CHECK(os.str().rfind("iteration,op,delta,cost,leaf_count\n", 0) == 0);
}

TEST_CASE("learner steps match standalone delta functions") {
  Rng rng(457);
  const VariableSpace space = binary_space(3);
  const DenseDistribution p = random_distribution(rng, space);
  const Dataset data = sample_exact(p, 300, 21);
  LearnConfig config;
  NodeStructureLearner learner(data, 2, config);
  for (int step = 0; step < 5; ++step) {
    const InformationSource src = learner.source();
    for (const auto& cand : learner.candidates()) {
      const double expected =
          cand.op.kind == SourceOp::Kind::kSplit
              ? delta_split(data, 2, src, cand.op.a, cand.op.b, config.penalty)
              : delta_merge(data, 2, src, cand.op.a, cand.op.b, config.penalty);
      CHECK(cand.delta == doctest::Approx(expected).epsilon(1e-12));
    }
    if (!learner.step()) break;
  }
}

TEST_CASE("learn_network: constant data gives single leaves and positive tables") {
  const VariableSpace space = binary_space(3);
  std::vector<std::int32_t> values(3 * 50, 0);
  const Dataset data(space, std::move(values));
  const LearnResult res = learn_network_detailed(data, LearnConfig{});
  for (int i = 0; i < 3; ++i) {
    CHECK(res.nodes[i].source.leaf_count() == 1);
    CHECK(res.network.node(i).table.at(0, 0) > 0.9);
    CHECK(res.network.node(i).table.at(0, 1) > 0.0);
  }
  CHECK(tables_bounded_below(res.network, 1e-9));
}

TEST_CASE("learn_network is deterministic and satisfies the FC bound") {
  Rng rng(461);
  const VariableSpace space = binary_space(4);
  const DenseDistribution p = random_distribution(rng, space);
  const Dataset data = sample_exact(p, 2000, 31);

  const DependencyNetwork a = learn_network(data, LearnConfig{});
  const DependencyNetwork b = learn_network(data, LearnConfig{});
  CHECK(network_to_json(a) == network_to_json(b));

  const DenseDistribution pd = empirical_distribution(data);
  const FcLimitReport rep = verify_fc_limit(pd, a);
  CHECK(rep.slack >= -1e-9);
}

TEST_CASE("merge cap 0 disables merges (split-only mode)") {
  Rng rng(463);
  const VariableSpace space = binary_space(3);
  const DenseDistribution p = random_distribution(rng, space);
  const Dataset data = sample_exact(p, 800, 17);
  LearnConfig config;
  config.merge_candidate_cap = 0;
  const LearnResult res = learn_network_detailed(data, config);
  for (const auto& node : res.nodes) {
    for (const SourceOp& op : node.source.ops()) {
      CHECK(op.kind == SourceOp::Kind::kSplit);
    }
  }
}

}  // TEST_SUITE

#include <doctest.h>

#include <algorithm>
#include <set>

#include "depnet/depnet.hpp"
#include "../support.hpp"

using namespace depnet;
using testsupport::binary_space;
using testsupport::random_distribution;
using testsupport::random_source;
using testsupport::random_table;

TEST_SUITE("network") {

TEST_CASE("empty op log is the identically-zero function") {
  VariableSpace space({2, 3, 2});
  const InformationSource src = InformationSource::trivial(space, 1);
  CHECK(src.leaf_count() == 1);
  for (std::size_t idx = 0; idx < space.total_states(); ++idx) {
    CHECK(src.evaluate(decode_state(space, idx)) == 0);
  }
}

TEST_CASE("single split yields y = x_j") {
  VariableSpace space({2, 3, 2});
  const InformationSource src(space, 0, {SourceOp::split(0, 1)});
  CHECK(src.leaf_count() == 3);
  for (std::size_t idx = 0; idx < space.total_states(); ++idx) {
    const JointState x = decode_state(space, idx);
    CHECK(src.evaluate(x) == x[1]);
  }
}

TEST_CASE("split then merge back gives the constant function") {
  VariableSpace space = binary_space(2);
  const InformationSource src(space, 0, {SourceOp::split(0, 1), SourceOp::merge(0, 1)});
  CHECK(src.leaf_count() == 1);
  for (std::size_t idx = 0; idx < space.total_states(); ++idx) {
    CHECK(src.evaluate(decode_state(space, idx)) == 0);
  }
}

TEST_CASE("evaluate ignores the owner coordinate") {
  Rng rng(101);
  VariableSpace space({2, 3, 2, 2});
  for (int t = 0; t < 20; ++t) {
    const int owner = rng.next_index(4);
    const InformationSource src = random_source(rng, space, owner, rng.next_index(6));
    for (std::size_t idx = 0; idx < space.total_states(); ++idx) {
      JointState x = decode_state(space, idx);
      const std::int32_t y = src.evaluate(x);
      for (std::int32_t v = 0; v < space.cardinality(owner); ++v) {
        x[owner] = v;
        CHECK(src.evaluate(x) == y);
      }
    }
  }
}

TEST_CASE("materialize matches evaluate and partitions the domain") {
  Rng rng(103);
  VariableSpace space({2, 3, 2});
  const InformationSource empty = InformationSource::trivial(binary_space(2), 0);
  CHECK(materialize_source(empty) == std::vector<std::int32_t>{0, 0});

  const InformationSource split(binary_space(2), 0, {SourceOp::split(0, 1)});
  CHECK(materialize_source(split) == std::vector<std::int32_t>{0, 1});

  for (int t = 0; t < 20; ++t) {
    const int owner = rng.next_index(3);
    const InformationSource src = random_source(rng, space, owner, rng.next_index(6));
    const auto leaves = materialize_source(src);
    std::vector<std::int64_t> sizes(src.leaf_count(), 0);
    for (const std::int32_t y : leaves) {
      REQUIRE(y >= 0);
      REQUIRE(y < src.leaf_count());
      ++sizes[y];
    }
    const std::size_t reduced_total = space.total_states() /
                                      static_cast<std::size_t>(space.cardinality(owner));
    std::int64_t total = 0;
    for (const std::int64_t s : sizes) total += s;
    CHECK(static_cast<std::size_t>(total) == reduced_total);
  }
}

TEST_CASE("leaf count bookkeeping holds after every op") {
  Rng rng(107);
  VariableSpace space({2, 3, 2, 2});
  for (int t = 0; t < 50; ++t) {
    const int owner = rng.next_index(4);
    const InformationSource src = random_source(rng, space, owner, 8);
    std::int64_t expected = 1;
    std::vector<SourceOp> prefix;
    for (const SourceOp& op : src.ops()) {
      prefix.push_back(op);
      if (op.kind == SourceOp::Kind::kSplit) {
        expected += space.cardinality(op.b) - 1;
      } else {
        expected -= 1;
      }
      const InformationSource partial(space, owner, prefix);
      CHECK(partial.leaf_count() == expected);
    }
  }
}

TEST_CASE("malformed op logs are rejected") {
  VariableSpace space = binary_space(3);
  // dangling leaf reference
  CHECK_THROWS_AS(InformationSource(space, 0, {SourceOp::split(1, 1)}), ModelError);
  // split on the owner
  CHECK_THROWS_AS(InformationSource(space, 0, {SourceOp::split(0, 0)}), ModelError);
  // merge with y0 >= y1
  CHECK_THROWS_AS(InformationSource(space, 0, {SourceOp::split(0, 1), SourceOp::merge(1, 1)}),
                  ModelError);
  // merge out of range
  CHECK_THROWS_AS(InformationSource(space, 0, {SourceOp::merge(0, 1)}), ModelError);
}

TEST_CASE("materialize respects the dense cap") {
  // 22 binary variables: the reduced space has 2^21 > 2^20 assignments
  const InformationSource src = InformationSource::trivial(binary_space(22), 0);
  CHECK_THROWS_AS(materialize_source(src), CapacityError);
  // sampling-scale spaces cannot be flat-indexed at all
  const VariableSpace huge = binary_space(80);
  CHECK_THROWS_AS(encode_state(huge, JointState(80, 0)), CapacityError);
  CHECK_THROWS_AS(decode_state(huge, 0), CapacityError);
}

TEST_CASE("conditional table invariants") {
  CHECK_THROWS_AS(ConditionalTable(0, 2, 1, {0.49, 0.49}), ModelError);  // row sum
  CHECK_THROWS_AS(ConditionalTable(0, 2, 1, {1.5, -0.5}), ModelError);   // negative
  CHECK_THROWS_AS(ConditionalTable(0, 2, 2, {1.0, 0.0}), ModelError);    // size
  const ConditionalTable ok(0, 2, 2, {0.25, 0.75, 1.0, 0.0});
  CHECK(ok.at(0, 1) == 0.75);
  CHECK(ok.row(1)[0] == 1.0);
}

TEST_CASE("genuine gibbs network: uniform and counting example") {
  VariableSpace s22({2, 2});
  const auto uniform = genuine_gibbs_network(DenseDistribution::uniform(s22));
  CHECK(uniform.uniform_rows.empty());
  for (int i = 0; i < 2; ++i) {
    const ConditionalTable& t = uniform.network.node(i).table;
    for (std::int32_t y = 0; y < t.leaf_count(); ++y) {
      CHECK(t.at(y, 0) == doctest::Approx(0.5));
      CHECK(t.at(y, 1) == doctest::Approx(0.5));
    }
  }

  // p = (0.5, 0, 0.25, 0.25): node 1 rows are p(X_1 | X_0)
  const DenseDistribution p(s22, {0.5, 0.0, 0.25, 0.25});
  const auto res = genuine_gibbs_network(p);
  const NetworkNode& node1 = res.network.node(1);
  JointState probe{0, 0};
  const std::int32_t leaf_x0_0 = node1.source.evaluate(probe);
  probe[0] = 1;
  const std::int32_t leaf_x0_1 = node1.source.evaluate(probe);
  CHECK(node1.table.at(leaf_x0_0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(node1.table.at(leaf_x0_0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(node1.table.at(leaf_x0_1, 0) == doctest::Approx(0.0));
  CHECK(node1.table.at(leaf_x0_1, 1) == doctest::Approx(1.0));

  // the x_0 = 1, x_1 = 0 cell is empty but no X_{-i} context has zero mass
  CHECK(res.uniform_rows.empty());

  // a zero-probability context gets flagged and filled uniform
  const DenseDistribution q(s22, {0.5, 0.5, 0.0, 0.0});  // x_1 = 1 never occurs
  const auto flagged = genuine_gibbs_network(q);
  CHECK(flagged.uniform_rows.size() == 1);
  CHECK(flagged.uniform_rows[0].first == 0);  // node 0's context x_1 = 1 is empty
}

TEST_CASE("genuine gibbs sources are lossless") {
  Rng rng(109);
  VariableSpace space({2, 3, 2});
  const DenseDistribution p = random_distribution(rng, space);
  const auto res = genuine_gibbs_network(p);
  for (int i = 0; i < 3; ++i) {
    const auto leaves = materialize_source(res.network.node(i).source);
    std::set<std::int32_t> distinct(leaves.begin(), leaves.end());
    CHECK(distinct.size() == leaves.size());  // one-to-one
  }
}

TEST_CASE("network assembly validation") {
  VariableSpace s22({2, 2});
  const InformationSource s0 = InformationSource::trivial(s22, 0);
  const InformationSource s1 = InformationSource::trivial(s22, 1);
  const ConditionalTable t0(0, 2, 1, {0.5, 0.5});
  const ConditionalTable t1(1, 2, 1, {0.5, 0.5});
  CHECK_NOTHROW(DependencyNetwork(s22, {NetworkNode{s0, t0}, NetworkNode{s1, t1}},
                                  ScanWeights::uniform(2)));
  // owner mismatch
  CHECK_THROWS_AS(DependencyNetwork(s22, {NetworkNode{s1, t1}, NetworkNode{s0, t0}},
                                    ScanWeights::uniform(2)),
                  ModelError);
  // leaf count mismatch
  const InformationSource split(s22, 0, {SourceOp::split(0, 1)});
  CHECK_THROWS_AS(DependencyNetwork(s22, {NetworkNode{split, t0}, NetworkNode{s1, t1}},
                                    ScanWeights::uniform(2)),
                  ModelError);
}

}  // TEST_SUITE

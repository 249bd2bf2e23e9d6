#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "depnet/depnet.hpp"
#include "../support.hpp"

using namespace depnet;
using testsupport::binary_space;
using testsupport::random_distribution;

namespace {

DependencyNetwork point_mass_network(const VariableSpace& space) {
  std::vector<NetworkNode> nodes;
  for (int i = 0; i < space.num_variables(); ++i) {
    std::vector<double> row(space.cardinality(i), 0.0);
    row[0] = 1.0;
    nodes.push_back(NetworkNode{InformationSource::trivial(space, i),
                                ConditionalTable(i, space.cardinality(i), 1, row)});
  }
  return DependencyNetwork(space, std::move(nodes), ScanWeights::uniform(space.num_variables()));
}

}  // namespace

TEST_SUITE("sampler") {

TEST_CASE("point-mass tables absorb into the all-zero state") {
  VariableSpace space = binary_space(3);
  const DependencyNetwork net = point_mass_network(space);
  const SampleRun run =
      pseudo_gibbs(net, ScanPolicy::sequential_natural(3), 50, 7, JointState{1, 1, 1});
  // after one full sweep every recorded state is all-zeros
  for (std::size_t t = 3; t < run.size(); ++t) {
    for (int i = 0; i < 3; ++i) CHECK(run.state(t)[i] == 0);
  }
}

TEST_CASE("same seed reproduces the run exactly") {
  Rng rng(211);
  VariableSpace space({2, 3, 2});
  const DependencyNetwork net = testsupport::random_network(rng, space);
  const ScanPolicy policy = ScanPolicy::random_uniform(3);
  const SampleRun a = pseudo_gibbs(net, policy, 500, 42);
  const SampleRun b = pseudo_gibbs(net, policy, 500, 42);
  REQUIRE(a.size() == b.size());
  for (std::size_t t = 0; t < a.size(); ++t) {
    CHECK(a.selected(t) == b.selected(t));
    for (int i = 0; i < 3; ++i) CHECK(a.state(t)[i] == b.state(t)[i]);
  }
  const SampleRun c = pseudo_gibbs(net, policy, 500, 43);
  bool differs = false;
  for (std::size_t t = 0; t < a.size() && !differs; ++t) {
    for (int i = 0; i < 3; ++i) differs |= a.state(t)[i] != c.state(t)[i];
  }
  CHECK(differs);
}

TEST_CASE("consecutive states differ in at most the selected coordinate") {
  Rng rng(223);
  VariableSpace space({2, 2, 3});
  const DependencyNetwork net = testsupport::random_network(rng, space);
  const SampleRun run = pseudo_gibbs(net, ScanPolicy::random_uniform(3), 2000, 5);
  for (std::size_t t = 0; t + 1 < run.size(); ++t) {
    int changed = 0;
    for (int i = 0; i < 3; ++i) {
      if (run.state(t)[i] != run.state(t + 1)[i]) {
        ++changed;
        CHECK(i == run.selected(t));
      }
    }
    CHECK(changed <= 1);
  }
}

TEST_CASE("genuine-Gibbs frequencies approach the source distribution") {
  Rng rng(227);
  VariableSpace s22({2, 2});
  const DenseDistribution p = random_distribution(rng, s22);
  const auto genuine = genuine_gibbs_network(p);
  const std::size_t n = 1'000'000;
  const SampleRun run = pseudo_gibbs(genuine.network, ScanPolicy::random_uniform(2), n, 99);
  const DenseDistribution freq = frequencies(run);
  for (std::size_t x = 0; x < p.size(); ++x) {
    const double sigma = std::sqrt(p[x] * (1.0 - p[x]) / static_cast<double>(n));
    CHECK(std::abs(freq[x] - p[x]) <= 15.0 * sigma);  // 3-sigma band, 5x for autocorrelation
  }
}

TEST_CASE("clamped coordinates stay fixed; unclamped weights are renormalized") {
  Rng rng(229);
  VariableSpace space({2, 3, 2, 2});
  const DependencyNetwork net = testsupport::random_network(rng, space);
  const ClampSet clamp(std::vector<ClampEntry>{{1, 2}, {3, 0}});
  const std::vector<int> free_nodes{0, 2};
  const ScanPolicy policy = ScanPolicy::random(ScanWeights::uniform_over(4, free_nodes));
  const SampleRun run = conditional_pseudo_gibbs(net, clamp, policy, 5000, 3);
  for (std::size_t t = 0; t < run.size(); ++t) {
    CHECK(run.state(t)[1] == 2);
    CHECK(run.state(t)[3] == 0);
    CHECK((run.selected(t) == 0 || run.selected(t) == 2));
  }
}

TEST_CASE("clamping everything except one node samples its row i.i.d.") {
  Rng rng(233);
  VariableSpace space = binary_space(3);
  const DependencyNetwork net = testsupport::random_network(rng, space);
  const ClampSet clamp(std::vector<ClampEntry>{{0, 1}, {2, 0}});
  const std::vector<int> free_nodes{1};
  const std::size_t n = 200'000;
  const SampleRun run = conditional_pseudo_gibbs(
      net, clamp, ScanPolicy::random(ScanWeights::uniform_over(3, free_nodes)), n, 17);

  JointState ctx{1, 0, 0};
  const std::int32_t y = net.node(1).source.evaluate(ctx);
  const auto row = net.node(1).table.row(y);
  std::size_t count1 = 0;
  for (std::size_t t = 0; t < run.size(); ++t) count1 += run.state(t)[1] == 1;
  const double f1 = static_cast<double>(count1) / static_cast<double>(n);
  const double sigma = std::sqrt(row[1] * (1.0 - row[1]) / static_cast<double>(n));
  // first sample comes from the uniform init; treat the band generously
  CHECK(std::abs(f1 - row[1]) <= 3.0 * sigma + 1e-4);
}

TEST_CASE("empty clamp set with uniform weights reproduces pseudo_gibbs exactly") {
  Rng rng(239);
  VariableSpace space({2, 3, 2});
  const DependencyNetwork net = testsupport::random_network(rng, space);
  const SampleRun plain = pseudo_gibbs(net, ScanPolicy::random_uniform(3), 400, 11);
  const SampleRun clamped =
      conditional_pseudo_gibbs(net, ClampSet{}, ScanPolicy::random_uniform(3), 400, 11);
  for (std::size_t t = 0; t < plain.size(); ++t) {
    for (int i = 0; i < 3; ++i) CHECK(plain.state(t)[i] == clamped.state(t)[i]);
  }
}

TEST_CASE("clamp validation errors") {
  Rng rng(241);
  VariableSpace space = binary_space(2);
  const DependencyNetwork net = testsupport::random_network(rng, space);
  CHECK_THROWS_AS(conditional_pseudo_gibbs(net, ClampSet({{0, 0}, {1, 1}}),
                                           ScanPolicy::random_uniform(2), 10, 1),
                  DomainError);
  CHECK_THROWS_AS(conditional_pseudo_gibbs(net, ClampSet({{0, 5}}),
                                           ScanPolicy::random_uniform(2), 10, 1),
                  DomainError);
  // positive weight on a clamped node
  CHECK_THROWS_AS(conditional_pseudo_gibbs(net, ClampSet({{0, 1}}),
                                           ScanPolicy::random_uniform(2), 10, 1),
                  DomainError);
  CHECK_THROWS_AS(ClampSet({{0, 0}, {0, 1}}), DomainError);
}

TEST_CASE("frequencies: point runs and concatenation additivity") {
  Rng rng(251);
  VariableSpace space = binary_space(2);
  const DependencyNetwork net = testsupport::random_network(rng, space);
  const SampleRun one = pseudo_gibbs(net, ScanPolicy::random_uniform(2), 1, 3);
  const DenseDistribution f1 = frequencies(one);
  CHECK(f1[encode_state(space, one.state(0))] == 1.0);

  const SampleRun a = pseudo_gibbs(net, ScanPolicy::random_uniform(2), 300, 5);
  const SampleRun b = pseudo_gibbs(net, ScanPolicy::random_uniform(2), 700, 6);
  std::vector<std::int32_t> cat;
  std::vector<std::int32_t> sel;
  for (std::size_t t = 0; t < a.size(); ++t) {
    cat.insert(cat.end(), a.state(t).begin(), a.state(t).end());
    sel.push_back(a.selected(t));
  }
  for (std::size_t t = 0; t < b.size(); ++t) {
    cat.insert(cat.end(), b.state(t).begin(), b.state(t).end());
    sel.push_back(b.selected(t));
  }
  const SampleRun joined(space, std::move(cat), std::move(sel), 0,
                         ScanPolicy::random_uniform(2));
  const DenseDistribution fj = frequencies(joined);
  const DenseDistribution fa = frequencies(a);
  const DenseDistribution fb = frequencies(b);
  for (std::size_t x = 0; x < fj.size(); ++x) {
    CHECK(fj[x] == doctest::Approx(0.3 * fa[x] + 0.7 * fb[x]).epsilon(1e-12));
  }
}

TEST_CASE("sequential scan cycles the order") {
  Rng rng(257);
  VariableSpace space = binary_space(3);
  const DependencyNetwork net = testsupport::random_network(rng, space);
  const std::vector<int> order{2, 0, 1};
  const SampleRun run = pseudo_gibbs(net, ScanPolicy::sequential(order), 30, 9);
  for (std::size_t t = 0; t < run.size(); ++t) {
    CHECK(run.selected(t) == order[t % 3]);
  }
}

}  // TEST_SUITE

#include <doctest.h>

#include <cmath>

#include "depnet/depnet.hpp"
#include "../support.hpp"

using namespace depnet;
using testsupport::binary_space;
using testsupport::random_distribution;

TEST_SUITE("state_space") {

TEST_CASE("encode: mixed-radix with variable 0 least significant") {
  VariableSpace s22({2, 2});
  CHECK(encode_state(s22, JointState{0, 0}) == 0);
  CHECK(encode_state(s22, JointState{1, 0}) == 1);

  VariableSpace s232({2, 3, 2});
  // 1 + 2*2 + 1*6
  CHECK(encode_state(s232, JointState{1, 2, 1}) == 11);
}

TEST_CASE("decode: inverse of encode") {
  VariableSpace s22({2, 2});
  CHECK(decode_state(s22, 3) == JointState{1, 1});
  CHECK(decode_state(s22, 0) == JointState{0, 0});
  VariableSpace s232({2, 3, 2});
  CHECK(decode_state(s232, 11) == JointState{1, 2, 1});
}

TEST_CASE("encode/decode round-trip over whole spaces") {
  for (const auto& cards : {std::vector<std::int32_t>{2, 3, 2, 5},
                            std::vector<std::int32_t>{3, 3, 3, 3},
                            std::vector<std::int32_t>(16, 2)}) {
    VariableSpace space(cards);
    REQUIRE(space.total_states() <= (std::size_t{1} << 16));
    for (std::size_t idx = 0; idx < space.total_states(); ++idx) {
      CHECK(encode_state(space, decode_state(space, idx)) == idx);
    }
  }
}

TEST_CASE("codec errors") {
  VariableSpace s22({2, 2});
  CHECK_THROWS_AS(encode_state(s22, JointState{0, 2}), DomainError);
  CHECK_THROWS_AS(encode_state(s22, JointState{-1, 0}), DomainError);
  CHECK_THROWS_AS(encode_state(s22, JointState{0}), DomainError);
  CHECK_THROWS_AS(decode_state(s22, 4), DomainError);
  CHECK_THROWS_AS(VariableSpace({2, 1}), DomainError);
}

TEST_CASE("dense distribution invariants") {
  VariableSpace s22({2, 2});
  CHECK_THROWS_AS(DenseDistribution(s22, {0.5, 0.25, 0.23, 0.0}), DomainError);  // mass 0.98
  CHECK_THROWS_AS(DenseDistribution(s22, {1.5, -0.5, 0.0, 0.0}), DomainError);   // negative
  CHECK_THROWS_AS(DenseDistribution(s22, {1.0, 0.0, 0.0}), DomainError);         // size
  // cap: 2^21 states
  CHECK_THROWS_AS(DenseDistribution::uniform(binary_space(21)), CapacityError);
  CHECK(DenseDistribution::uniform(s22).full_support());
  CHECK_FALSE(DenseDistribution::point_mass(s22, 1).full_support());
}

TEST_CASE("empirical distribution by counting") {
  VariableSpace s22({2, 2});
  Dataset data(s22, {0, 0, 0, 0, 1, 1, 0, 1});  // (0,0),(0,0),(1,1),(0,1)
  const DenseDistribution p = empirical_distribution(data);
  CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p[1] == 0.0);
  CHECK(p[2] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(p[3] == doctest::Approx(0.25).epsilon(1e-15));

  Dataset one(s22, {1, 0});
  const DenseDistribution q = empirical_distribution(one);
  CHECK(q[1] == 1.0);

  // N copies of the same state: point mass independent of N
  std::vector<std::int32_t> rep;
  for (int k = 0; k < 17; ++k) {
    rep.push_back(1);
    rep.push_back(0);
  }
  CHECK(empirical_distribution(Dataset(s22, rep))[1] == 1.0);

  CHECK_THROWS_AS(empirical_distribution(Dataset(s22, {})), DomainError);
  CHECK_THROWS_AS(Dataset(s22, {0, 5}), DomainError);
}

TEST_CASE("marginal examples") {
  VariableSpace s22({2, 2});
  const DenseDistribution u = DenseDistribution::uniform(s22);
  const std::vector<int> keep0{0};
  const DenseDistribution m0 = marginal(u, keep0);
  CHECK(m0[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m0[1] == doctest::Approx(0.5).epsilon(1e-15));

  const DenseDistribution p(s22, {0.5, 0.0, 0.25, 0.25});
  const std::vector<int> keep1{1};
  const DenseDistribution m1 = marginal(p, keep1);
  CHECK(m1[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m1[1] == doctest::Approx(0.5).epsilon(1e-15));

  const std::vector<int> all{0, 1};
  const DenseDistribution same = marginal(p, all);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(same[i] == p[i]);

  CHECK_THROWS_AS(marginal(p, std::vector<int>{}), DomainError);
  CHECK_THROWS_AS(marginal(p, std::vector<int>{0, 0}), DomainError);
}

TEST_CASE("marginal preserves mass and commutes") {
  Rng rng(20260811);
  VariableSpace space({2, 3, 2, 2});
  for (int trial = 0; trial < 20; ++trial) {
    const DenseDistribution p = random_distribution(rng, space);
    const std::vector<int> ab{0, 2, 3};
    const DenseDistribution pab = marginal(p, ab);
    CHECK(std::abs(stable_sum(pab.probs()) - 1.0) <= 1e-12);
    // A = {0, 3}: positions {0, 2} inside the reduced space of {0, 2, 3}
    const std::vector<int> a_orig{0, 3};
    const std::vector<int> a_reduced{0, 2};
    const DenseDistribution left = marginal(pab, a_reduced);
    const DenseDistribution right = marginal(p, a_orig);
    for (std::size_t i = 0; i < left.size(); ++i) {
      CHECK(left[i] == doctest::Approx(right[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("condition_on: hand example and mass") {
  VariableSpace s22({2, 2});
  const DenseDistribution p(s22, {0.5, 0.0, 0.25, 0.25});
  const std::vector<ClampEntry> clamp{{0, 0}};
  const auto slice = condition_on(p, clamp);
  CHECK(slice.probability == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(slice.dist[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(slice.dist[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const std::vector<ClampEntry> zero_mass{{0, 1}, {1, 0}};
  CHECK_THROWS_AS(condition_on(p, zero_mass), DomainError);
  const std::vector<ClampEntry> all{{0, 0}, {1, 0}};
  CHECK_THROWS_AS(condition_on(p, all), DomainError);
}

TEST_CASE("total variation") {
  VariableSpace s22({2, 2});
  const DenseDistribution a = DenseDistribution::point_mass(s22, 0);
  const DenseDistribution b = DenseDistribution::point_mass(s22, 3);
  CHECK(total_variation(a, b) == doctest::Approx(1.0));
  CHECK(total_variation(a, a) == 0.0);
}

TEST_CASE("space drop and saturation") {
  VariableSpace s({2, 3, 2});
  CHECK(s.drop(1) == VariableSpace({2, 2}));
  VariableSpace big(std::vector<std::int32_t>(80, 2));  // saturates
  CHECK(big.total_states() > kDenseStateCap);
}

}  // TEST_SUITE

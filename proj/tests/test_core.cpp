// Copyright 2026 The ohs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <map>
#include <set>

#include "ohs/core.hpp"
#include "ohs/instance_io.hpp"
#include "ohs/random.hpp"
#include "ohs/rational.hpp"
#include "support/exhaustive.hpp"

namespace ohs {
namespace {

TEST(RationalTest, NormalizesAndCompares) {
  EXPECT_EQ(Rational(2, 4), Rational(1, 2));
  EXPECT_EQ(Rational(3, -6), Rational(-1, 2));
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
  EXPECT_EQ(Rational(1, 3) + Rational(1, 6), Rational(1, 2));
  EXPECT_EQ(Rational(7, 2).ceil(), 4);
  EXPECT_EQ(Rational(-7, 2).floor(), -4);
  EXPECT_EQ(Rational::parse("6/8"), Rational(3, 4));
  EXPECT_EQ(Rational::parse("5"), Rational(5));
  EXPECT_EQ(Rational(3, 4).str(), "3/4");
  EXPECT_THROW(Rational(1, 0), std::exception);
}

TEST(RationalTest, OverflowIsReported) {
  Rational big(std::int64_t{1} << 62);
  EXPECT_THROW(big * Rational(4), std::overflow_error);
}

TEST(SetSystemTest, RejectsEmptyAndOutOfRangeSets) {
  EXPECT_THROW(SetSystem(2, {{}}), InvalidInstance);
  EXPECT_THROW(SetSystem(2, {{0, 2}}), InvalidInstance);
  EXPECT_THROW(SetSystem({Rational(-1)}, {{0}}), InvalidInstance);
  SetSystem s(3, {{2, 0, 0}});
  EXPECT_EQ(s.set(0), (ElementSet{0, 2}));
}

TEST(ArrivalTest, DeliversInOrderThenEnds) {
  SetSystem sys(3, {{0, 1}, {2}});
  auto stream = ArrivalStream::identity(2);
  EXPECT_EQ(deliver_next(stream, sys), (ElementSet{0, 1}));
  EXPECT_EQ(deliver_next(stream, sys), (ElementSet{2}));
  EXPECT_THROW(deliver_next(stream, sys), EndOfStream);
  EXPECT_EQ(stream.cursor(), 2u);
}

TEST(ArrivalTest, RejectsNonPermutation) {
  EXPECT_THROW(ArrivalStream({0, 0}), std::invalid_argument);
}

TEST(SolutionTest, IsHit) {
  IntegralSolution one;
  one.add(1, Rational(1));
  EXPECT_TRUE(is_hit({0, 1}, one));
  EXPECT_FALSE(is_hit({0, 1}, IntegralSolution{}));
  IntegralSolution two;
  two.add(0, Rational(1));
  two.add(1, Rational(1));
  EXPECT_FALSE(is_hit({2}, two));
}

TEST(SolutionTest, CostIsExactSumAndMembershipMonotone) {
  SetSystem sys({Rational(1, 3), Rational(1, 6), Rational(5)}, {{0, 1, 2}});
  IntegralSolution sol;
  EXPECT_TRUE(sol.add(0, sys));
  EXPECT_TRUE(sol.add(1, sys));
  EXPECT_FALSE(sol.add(1, sys));
  EXPECT_EQ(sol.cost(), Rational(1, 2));
  EXPECT_EQ(sol.chosen(), (ElementSet{0, 1}));
}

TEST(SolutionTest, VerifyFeasible) {
  SetSystem sys(3, {{0, 1}, {1, 2}});
  IntegralSolution mid;
  mid.add(1, sys);
  EXPECT_TRUE(verify_feasible(sys, mid, 2));
  IntegralSolution left;
  left.add(0, sys);
  EXPECT_FALSE(verify_feasible(sys, left, 2));
  EXPECT_TRUE(verify_feasible(sys, IntegralSolution{}, 0));
  EXPECT_THROW(verify_feasible(sys, mid, 3), std::out_of_range);
}

TEST(DualizeTest, SmallExample) {
  SetSystem sys(2, {{0}, {0, 1}});
  auto dual = dualize(sys);
  EXPECT_EQ(dual.n(), 2u);
  ASSERT_EQ(dual.m(), 2u);
  EXPECT_EQ(dual.set(0), (ElementSet{0, 1}));
  EXPECT_EQ(dual.set(1), (ElementSet{1}));
}

TEST(DualizeTest, EmptySystem) {
  SetSystem sys(4, {});
  EXPECT_EQ(dualize(sys).n(), 0u);
}

TEST(DualizeTest, MatchesIncidenceTranspose) {
  Rng rng(2024);
  auto sys = testing::random_system(5, 5, false, rng, 0.5);
  std::vector<ElementId> kept;
  auto dual = dualize(sys, &kept);
  // Transpose of the 0/1 incidence matrix, built directly.
  bool m[5][5] = {};
  for (std::size_t j = 0; j < 5; ++j)
    for (auto e : sys.set(j)) m[j][e] = true;
  std::size_t row = 0;
  for (std::size_t e = 0; e < 5; ++e) {
    ElementSet col;
    for (std::size_t j = 0; j < 5; ++j)
      if (m[j][e]) col.push_back(static_cast<ElementId>(j));
    if (col.empty()) continue;
    ASSERT_LT(row, dual.m());
    EXPECT_EQ(kept[row], e);
    EXPECT_EQ(dual.set(row), col);
    ++row;
  }
  EXPECT_EQ(row, dual.m());
}

// dualize(dualize(I)) equals I restricted to covered elements, up to the
// order of sets, on every small random system.
TEST(DualizeTest, InvolutionOnCoveredElements) {
  Rng rng(7);
  for (int it = 0; it < 300; ++it) {
    std::size_t n = 1 + rng.below(6), m = rng.below(7);
    auto sys = testing::random_system(n, m, false, rng, 0.4);
    std::vector<ElementId> kept;
    auto dual = dualize(sys, &kept);
    auto back = dualize(dual);
    std::vector<ElementId> remap(n, 0);
    for (std::size_t i = 0; i < kept.size(); ++i) remap[kept[i]] = static_cast<ElementId>(i);
    std::multiset<ElementSet> expect, got(back.sets().begin(), back.sets().end());
    for (const auto& s : sys.sets()) {
      ElementSet r;
      for (auto e : s) r.push_back(remap[e]);
      expect.insert(r);
    }
    EXPECT_EQ(back.n(), kept.size());
    EXPECT_EQ(got, expect);
  }
}

TEST(InstanceIoTest, RoundTripPreservesSystemAndOrder) {
  Rng rng(99);
  for (int it = 0; it < 20; ++it) {
    auto sys = testing::random_system(1 + rng.below(10), 1 + rng.below(10), true, rng);
    std::vector<std::size_t> order(sys.m());
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(order));
    ArrivalStream stream(order);
    auto back = instance_from_json(nlohmann::json::parse(to_json(sys, &stream).dump()));
    EXPECT_EQ(back.system, sys);
    EXPECT_EQ(back.stream.order(), order);
  }
}

TEST(InstanceIoTest, OrderDefaultsToGiven) {
  auto j = nlohmann::json::parse(R"({"n":3,"weighted":true,"costs":["1/2","3","2/4"],"sets":[[0,1],[2]]})");
  auto f = instance_from_json(j);
  EXPECT_EQ(f.system.cost(2), Rational(1, 2));
  EXPECT_EQ(f.stream.order(), (std::vector<std::size_t>{0, 1}));
  EXPECT_THROW(instance_from_json(nlohmann::json::parse(R"({"n":1,"sets":[[0]],"order":[0,1]})")),
               std::exception);
}

TEST(RandomTest, DerivedSeedsAreDeterministicAndDistinct) {
  EXPECT_EQ(derive_seed(5, seed_purpose::kInstance, 3),
            derive_seed(5, seed_purpose::kInstance, 3));
  std::set<std::uint64_t> seeds;
  for (std::uint64_t p = 1; p <= 3; ++p)
    for (std::uint64_t k = 0; k < 100; ++k) seeds.insert(derive_seed(5, p, k));
  EXPECT_EQ(seeds.size(), 300u);
}

TEST(RandomTest, BelowIsUnbiasedEnough) {
  Rng rng(1);
  std::map<std::uint64_t, int> counts;
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) ++counts[rng.below(6)];
  for (const auto& [v, c] : counts) {
    EXPECT_LT(v, 6u);
    EXPECT_NEAR(c, draws / 6, 5 * std::sqrt(draws / 6.0));
  }
}

}  // namespace
}  // namespace ohs

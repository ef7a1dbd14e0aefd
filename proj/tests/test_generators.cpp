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

#include "ohs/complexity.hpp"
#include "ohs/generators.hpp"
#include "ohs/instance_io.hpp"
#include "ohs/oracle.hpp"

namespace ohs {
namespace {

constexpr Family kAllFamilies[] = {Family::kIntervals, Family::kDisks,
                                   Family::kSquares, Family::kLines,
                                   Family::kHalfspaces3d};

TEST(ContainmentTest, HandExamples) {
  std::vector<Point> line = {{Rational(1)}, {Rational(2)}, {Rational(3)}};
  Range iv{RangeKind::kInterval, {Rational(3, 2), Rational(7, 2)}};
  EXPECT_EQ(range_members(iv, line), (ElementSet{1, 2}));
  Range all{RangeKind::kInterval, {Rational(0), Rational(10)}};
  EXPECT_EQ(range_members(all, line), (ElementSet{0, 1, 2}));

  std::vector<Point> plane = {{Rational(0), Rational(0)}, {Rational(2), Rational(0)}};
  Range disk{RangeKind::kDisk, {Rational(0), Rational(0), Rational(1)}};
  EXPECT_EQ(range_members(disk, plane), (ElementSet{0}));

  Range square{RangeKind::kSquare, {Rational(0), Rational(0), Rational(2)}};
  EXPECT_TRUE(contains(square, {Rational(1), Rational(1)}));
  EXPECT_FALSE(contains(square, {Rational(1), Rational(101, 100)}));

  std::vector<Point> space = {{Rational(0), Rational(0), Rational(1)},
                              {Rational(0), Rational(0), Rational(-1)}};
  Range upper{RangeKind::kHalfspace, {Rational(0), Rational(0), Rational(1), Rational(0)}};
  EXPECT_EQ(range_members(upper, space), (ElementSet{0}));

  Range slab{RangeKind::kSlab, {Rational(1), Rational(-1), Rational(0), Rational(1, 2)}};
  EXPECT_TRUE(contains(slab, {Rational(3), Rational(5, 2)}));
  EXPECT_FALSE(contains(slab, {Rational(3), Rational(2)}));
}

TEST(ContainmentTest, BuildSystemRejectsEmptyRange) {
  std::vector<Point> line = {{Rational(1)}};
  Range miss{RangeKind::kInterval, {Rational(2), Rational(3)}};
  EXPECT_THROW(build_system(line, {miss}, {Rational(1)}, false), DegenerateRange);
}

// Disk membership recomputed independently with long double distances on
// points whose coordinates are exact in binary.
TEST(ContainmentTest, DisksAgreeWithIndependentPredicate) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto inst = generate(Family::kDisks, 30, 40, seed, CostModel::kUnit);
    for (std::size_t j = 0; j < inst.ranges.size(); ++j) {
      const auto& q = inst.ranges[j].params;
      ElementSet expect;
      for (std::size_t i = 0; i < inst.points.size(); ++i) {
        const auto& p = inst.points[i];
        Rational dx = p[0] - q[0], dy = p[1] - q[1];
        // Cross-multiplied integer comparison, avoiding Rational::operator<=.
        Rational lhs = dx * dx + dy * dy, rhs = q[2] * q[2];
        __int128 a = static_cast<__int128>(lhs.num()) * rhs.den();
        __int128 b = static_cast<__int128>(rhs.num()) * lhs.den();
        if (a <= b) expect.push_back(static_cast<ElementId>(i));
      }
      EXPECT_EQ(inst.system.set(j), expect);
    }
  }
}

TEST(GeneratorTest, EveryRangeNonemptyAndSizesRight) {
  for (auto fam : kAllFamilies) {
    auto inst = generate(fam, 40, 60, 3, CostModel::kUniform);
    EXPECT_EQ(inst.system.n(), 40u);
    EXPECT_EQ(inst.system.m(), 60u);
    EXPECT_EQ(inst.ranges.size(), 60u);
    EXPECT_TRUE(inst.system.weighted());
    for (const auto& s : inst.system.sets()) EXPECT_FALSE(s.empty());
    for (std::size_t e = 0; e < 40; ++e) {
      EXPECT_GE(inst.system.cost(static_cast<ElementId>(e)), Rational(1));
      EXPECT_LE(inst.system.cost(static_cast<ElementId>(e)), Rational(100));
    }
  }
  EXPECT_THROW(generate(Family::kIntervals, 0, 5, 1, CostModel::kUnit), std::invalid_argument);
}

TEST(GeneratorTest, IntervalPointsAreDistinctAndSorted) {
  auto inst = generate(Family::kIntervals, 64, 16, 9, CostModel::kUnit);
  for (std::size_t i = 1; i < inst.points.size(); ++i)
    EXPECT_LT(inst.points[i - 1][0], inst.points[i][0]);
  EXPECT_TRUE(is_consecutive(inst.system, inst.system.m()));
}

TEST(GeneratorTest, PowerLawCostsInRange) {
  auto inst = generate(Family::kSquares, 200, 10, 4, CostModel::kPowerLaw);
  int cheap = 0;
  for (std::size_t e = 0; e < 200; ++e) {
    Rational c = inst.system.cost(static_cast<ElementId>(e));
    EXPECT_GE(c, Rational(1));
    EXPECT_LE(c, Rational(100));
    if (c <= Rational(2)) ++cheap;
  }
  // P(c <= 2) = 1 - 2^{-3/2}, about 0.65.
  EXPECT_GT(cheap, 100);
}

TEST(GeneratorTest, DeterministicReplay) {
  for (auto fam : kAllFamilies) {
    auto a = generate(fam, 64, 128, 77, CostModel::kPowerLaw);
    auto b = generate(fam, 64, 128, 77, CostModel::kPowerLaw);
    EXPECT_EQ(a.system, b.system);
    EXPECT_EQ(to_json(a.system).dump(), to_json(b.system).dump());
    EXPECT_EQ(geometry_json(a).dump(), geometry_json(b).dump());
    auto c = generate(fam, 64, 128, 78, CostModel::kPowerLaw);
    EXPECT_NE(to_json(a.system).dump(), to_json(c.system).dump());
  }
}

TEST(GeneratorTest, VcDimensionWithinFamilyBound) {
  for (auto fam : kAllFamilies)
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      auto inst = generate(fam, 10, 40, seed, CostModel::kUnit);
      EXPECT_LE(vc_dimension(inst.system).dimension, family_vc_dimension(fam))
          << to_string(fam) << " seed " << seed;
    }
}

TEST(GeneratorTest, IntervalsShallowCellsLinear) {
  // Traces of intervals on U' are contiguous runs of U', so at most
  // |U'| * k + 1 of size <= k.
  auto inst = generate(Family::kIntervals, 8, 60, 5, CostModel::kUnit);
  for (std::uint32_t mask = 1; mask < 256; ++mask) {
    ElementSet sub;
    for (std::uint32_t e = 0; e < 8; ++e)
      if (mask >> e & 1U) sub.push_back(e);
    for (std::size_t k = 1; k <= 4; ++k)
      EXPECT_LE(shallow_cell_count(inst.system, sub, k), sub.size() * k + 1);
  }
}

TEST(OrderTest, Policies) {
  EXPECT_EQ(make_order(3, OrderPolicy::kGiven).order(), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(make_order(3, OrderPolicy::kReverse).order(), (std::vector<std::size_t>{2, 1, 0}));
  auto a = make_order(5, OrderPolicy::kRandom, 7).order();
  EXPECT_EQ(a, make_order(5, OrderPolicy::kRandom, 7).order());
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
}

TEST(StringsTest, RoundTrip) {
  for (auto fam : kAllFamilies) EXPECT_EQ(family_from_string(to_string(fam)), fam);
  for (auto c : {CostModel::kUnit, CostModel::kUniform, CostModel::kPowerLaw})
    EXPECT_EQ(cost_model_from_string(to_string(c)), c);
  EXPECT_THROW(family_from_string("triangles"), std::invalid_argument);
}

TEST(AdversaryTest, DepthOne) {
  DyadicIntervalAdversary adv(1);
  EXPECT_EQ(adv.n(), 2u);
  EXPECT_EQ(adv.next(IntegralSolution{}), (ElementSet{0, 1}));
  EXPECT_TRUE(adv.done());
  EXPECT_THROW(adv.next(IntegralSolution{}), EndOfStream);
}

// A leftmost picker is forced to take depth points while one point suffices.
TEST(AdversaryTest, LeftmostPickerAtDepthThree) {
  DyadicIntervalAdversary adv(3);
  IntegralSolution sol;
  std::size_t t = 0;
  while (!adv.done()) {
    const auto& s = adv.next(sol);
    ++t;
    EXPECT_FALSE(is_hit(s, sol));
    sol.add(s.front(), Rational(1));
  }
  EXPECT_EQ(sol.size(), 3u);
  const auto& sys = adv.instance().system;
  EXPECT_EQ(sys.m(), 3u);
  EXPECT_EQ(exact_opt(sys, t).opt_cost, BigRational(1));
  // The sets are nested.
  for (std::size_t j = 1; j < sys.m(); ++j)
    EXPECT_TRUE(std::includes(sys.set(j - 1).begin(), sys.set(j - 1).end(),
                              sys.set(j).begin(), sys.set(j).end()));
}

TEST(AdversaryTest, RejectsBadDepth) {
  EXPECT_THROW(DyadicIntervalAdversary(0), std::invalid_argument);
}

}  // namespace
}  // namespace ohs

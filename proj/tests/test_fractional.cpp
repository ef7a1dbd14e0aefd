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

#include "ohs/fractional.hpp"
#include "ohs/generators.hpp"
#include "support/exhaustive.hpp"

namespace ohs {
namespace {

std::vector<Rational> unit(std::size_t n) { return std::vector<Rational>(n, Rational(1)); }

TEST(FractionTest, Grid) {
  EXPECT_EQ(Fraction::one().raw(), Fraction::kOne);
  EXPECT_EQ(Fraction::from_raw(Fraction::kOne + 5), Fraction::one());
  auto third = Fraction::at_least_inverse(3);
  EXPECT_GE(third.exact(), BigRational(1, 3));
  EXPECT_LT(third.exact() - BigRational(1, 3), BigRational(1, 1) / BigRational(Fraction::kOne));
  EXPECT_EQ(Fraction::at_least_inverse(4).exact(), BigRational(1, 4));
  EXPECT_EQ(Fraction::at_least_inverse(4).ceil_times(8), 2u);
  EXPECT_EQ(third.ceil_times(3), 2u);  // just above 1/3, so 3x is just above 1
  EXPECT_EQ(Fraction().ceil_times(100), 0u);
}

TEST(FracProcessTest, SingletonGoesToOne) {
  FractionalState st(3);
  frac_process(st, {1}, unit(3));
  EXPECT_EQ(st.x[1], Fraction::one());
  EXPECT_TRUE(st.x[0].is_zero());
}

// One round of x <- 2x + 1/2 from zero already gives sum 1.
TEST(FracProcessTest, PairUnitCosts) {
  FractionalState st(2);
  auto rounds = frac_process(st, {0, 1}, unit(2));
  EXPECT_EQ(rounds, 1u);
  EXPECT_EQ(st.x[0].exact(), BigRational(1, 2));
  EXPECT_EQ(st.x[1].exact(), BigRational(1, 2));
}

TEST(FracProcessTest, RedeliveryIsNoOp) {
  FractionalState st(4);
  frac_process(st, {0, 1, 2}, unit(4));
  auto before = st.x;
  EXPECT_EQ(frac_process(st, {0, 1, 2}, unit(4)), 0u);
  EXPECT_EQ(st.x, before);
}

TEST(FracProcessTest, EmptySetIsInfeasible) {
  FractionalState st(2);
  EXPECT_THROW(frac_process(st, {}, unit(2)), InfeasibleArrival);
}

TEST(FracProcessTest, ZeroCostJumpsToOne) {
  FractionalState st(2);
  frac_process(st, {0, 1}, {Rational(0), Rational(5)});
  EXPECT_EQ(st.x[0], Fraction::one());
}

TEST(FracProcessTest, MultiplicativeStepRoundsUp) {
  // c = 3, |S| = 2 from zero: 1/6 each round, then (4/3)x + 1/6.
  FractionalState st(2);
  std::vector<Rational> c = {Rational(3), Rational(3)};
  frac_process(st, {0, 1}, c);
  // Hand rounds: 1/6, 7/18, 37/54, so three rounds with sum 37/27 >= 1.
  EXPECT_EQ(st.update_rounds, 3u);
  EXPECT_GE(st.x[0].exact(), BigRational(37, 54));
  EXPECT_LT(st.x[0].exact() - BigRational(37, 54), BigRational(8, 1) / BigRational(Fraction::kOne));
}

TEST(FracProcessTest, MonotoneFeasibleOnRandomStreams) {
  Rng rng(17);
  for (int it = 0; it < 50; ++it) {
    auto sys = testing::random_system(12, 30, true, rng, 0.25);
    FractionalState st(sys.n());
    for (std::size_t t = 0; t < sys.m(); ++t) {
      auto before = st.x;
      frac_process(st, sys.set(t), sys.costs());
      EXPECT_TRUE(is_covered(st, sys.set(t)));
      for (std::size_t e = 0; e < sys.n(); ++e) EXPECT_GE(st.x[e], before[e]);
    }
    for (std::size_t t = 0; t < sys.m(); ++t) EXPECT_TRUE(is_covered(st, sys.set(t)));
  }
}

TEST(FracCostTest, Values) {
  FractionalState st(5);
  EXPECT_EQ(frac_cost(st, unit(5)), BigRational(0));
  for (auto& v : st.x) v = Fraction::one();
  EXPECT_EQ(frac_cost(st, unit(5)), BigRational(5));
}

TEST(FracCostTest, MatchesIndependentDotProduct) {
  Rng rng(3);
  auto sys = testing::random_system(10, 20, true, rng);
  FractionalState st(sys.n());
  for (std::size_t t = 0; t < sys.m(); ++t) frac_process(st, sys.set(t), sys.costs());
  BigRational dot = 0;
  for (std::size_t e = 0; e < sys.n(); ++e) {
    const Rational& c = sys.cost(static_cast<ElementId>(e));
    dot += BigRational(BigInt(c.num()) * BigInt(st.x[e].raw()),
                       BigInt(c.den()) * BigInt(Fraction::kOne));
  }
  EXPECT_EQ(frac_cost(st, sys.costs()), dot);
}

TEST(PhaseTest, PhaseOf) {
  EXPECT_EQ(phase_of(Rational(0)), 0);
  EXPECT_EQ(phase_of(Rational(1)), 0);
  EXPECT_EQ(phase_of(Rational(3, 2)), 0);
  EXPECT_EQ(phase_of(Rational(2)), 1);
  EXPECT_EQ(phase_of(Rational(1023)), 9);
  EXPECT_EQ(phase_of(Rational(1024)), 10);
}

TEST(PhaseWrapperTest, CheapElementsStartAtOne) {
  std::vector<Rational> c = {Rational(1, 8), Rational(1), Rational(8), Rational(1, 3)};
  PhaseWrapper w(c);
  FractionalState st(4);
  w.enter_phase(st, 0);
  EXPECT_EQ(st.x[0], Fraction::one());                  // 1/8 <= 1/4
  EXPECT_EQ(st.x[1].exact(), BigRational(1, 4));        // 1/4 < 1 < 2
  EXPECT_TRUE(st.x[2].is_zero());                       // 8 >= 2
  EXPECT_EQ(st.x[3].exact(), BigRational(1, 4));
}

TEST(PhaseWrapperTest, Exclusion) {
  std::vector<Rational> c = {Rational(8), Rational(4), Rational(3)};
  PhaseWrapper w(c);
  EXPECT_TRUE(w.excluded(0, 1));
  EXPECT_TRUE(w.excluded(1, 1));  // 4 >= 2^2
  EXPECT_FALSE(w.excluded(2, 1));
  EXPECT_FALSE(w.excluded(0, 3));
}

TEST(PhaseWrapperTest, AdvancesUntilServiceable) {
  std::vector<Rational> c = {Rational(8), Rational(1)};
  PhaseWrapper w(c);
  FractionalState st(2);
  auto served = w.phase_wrap(st, {0}, 0);
  EXPECT_EQ(served, (ElementSet{0}));
  EXPECT_EQ(st.phase, 3);  // 8 < 2^4
  EXPECT_TRUE(is_covered(st, {0}));
  EXPECT_THROW(w.enter_phase(st, 1), std::logic_error);
}

TEST(PhaseWrapperTest, FloorAndMonotoneOnWeightedStreams) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto inst = generate(Family::kIntervals, 32, 100, seed, CostModel::kPowerLaw);
    const auto& sys = inst.system;
    PhaseWrapper w(sys.costs());
    FractionalState st(sys.n());
    const auto floor_value = Fraction::at_least_inverse(sys.n());
    Rng rng(seed);
    int phase = 0;
    for (std::size_t t = 0; t < sys.m(); ++t) {
      auto before = st.x;
      if (rng.bernoulli(0.05)) ++phase;
      auto served = w.phase_wrap(st, sys.set(t), phase);
      EXPECT_TRUE(is_covered(st, served));
      for (std::size_t e = 0; e < sys.n(); ++e) {
        EXPECT_GE(st.x[e], before[e]);
        if (!st.x[e].is_zero()) EXPECT_GE(st.x[e], floor_value);
      }
    }
  }
}

}  // namespace
}  // namespace ohs

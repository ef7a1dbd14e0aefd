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

#include "ohs/complexity.hpp"
#include "ohs/fractional.hpp"
#include "ohs/uniformize.hpp"
#include "support/exhaustive.hpp"

namespace ohs {
namespace {

CloneSet clones(std::size_t n, std::initializer_list<std::pair<ElementId, std::uint32_t>> pairs) {
  CloneSet out;
  for (auto [e, i] : pairs) out.push_back(encode_clone(n, e, i));
  std::sort(out.begin(), out.end());
  return out;
}

struct Run {
  SetSystem sys;
  CloneSystem cs;
  FractionalState st;
};

Run run_unweighted(const SetSystem& sys) {
  Run r{sys, CloneSystem(sys.n()), FractionalState(sys.n())};
  for (std::size_t t = 0; t < sys.m(); ++t) {
    frac_process(r.st, sys.set(t), sys.costs());
    r.cs.uniformize_step(r.st, sys.set(t));
  }
  return r;
}

TEST(CloneIdTest, EncodeDecode) {
  for (std::size_t n : {1u, 4u, 17u})
    for (ElementId e = 0; e < n; ++e)
      for (std::uint32_t i = 0; i <= n; ++i) {
        auto c = encode_clone(n, e, i);
        EXPECT_EQ(decode_clone(n, c), (Clone{e, i}));
        EXPECT_LT(c, n * (n + 1));
      }
  // Lexicographic order in (element, index).
  EXPECT_LT(encode_clone(4, 0, 4), encode_clone(4, 1, 0));
}

TEST(UniformizeStepTest, FullElement) {
  CloneSystem cs(4);
  FractionalState st(4);
  st.x[2] = Fraction::one();
  const auto& t = cs.uniformize_step(st, {2});
  EXPECT_EQ(t, clones(4, {{2, 0}, {2, 1}, {2, 2}, {2, 3}, {2, 4}}));
  EXPECT_EQ(cs.n_prime(), 5u);
  EXPECT_EQ(cs.B(), 4u);
  EXPECT_EQ(cs.N(), 20u);
}

TEST(UniformizeStepTest, HalfElements) {
  CloneSystem cs(4);
  FractionalState st(4);
  st.x[0] = st.x[1] = Fraction::from_raw(Fraction::kOne / 2);
  const auto& t = cs.uniformize_step(st, {0, 1});
  EXPECT_EQ(t.size(), 6u);
  EXPECT_EQ(t, clones(4, {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2}}));
}

TEST(UniformizeStepTest, ZeroValueGivesIndexZeroOnly) {
  CloneSystem cs(4);
  FractionalState st(4);
  st.x[0] = Fraction::one();
  const auto& t = cs.uniformize_step(st, {0, 3});
  EXPECT_EQ(t, clones(4, {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}, {3, 0}}));
  EXPECT_EQ(cs.top(3), 0);
  EXPECT_EQ(cs.top(1), -1);
  EXPECT_FALSE(cs.active(cs.id(1, 0)));
  EXPECT_TRUE(cs.active(cs.id(3, 0)));
}

TEST(ProjTest, Examples) {
  EXPECT_EQ(proj(6, clones(6, {{3, 0}, {3, 2}, {5, 1}})), (ElementSet{3, 5}));
  EXPECT_EQ(proj(6, {}), ElementSet{});
  EXPECT_EQ(lift_solution(4, {1, 2}), clones(4, {{1, 0}, {2, 0}}));
  EXPECT_EQ(lower_solution(4, clones(4, {{1, 0}, {1, 3}})), (ElementSet{1}));
  EXPECT_EQ(lower_solution(4, lift_solution(4, {0, 3})), (ElementSet{0, 3}));
}

TEST(UniformizeTest, SizeFloorProjectionAndBudget) {
  Rng rng(9);
  for (int it = 0; it < 100; ++it) {
    std::size_t n = 2 + rng.below(15);
    auto sys = testing::random_system(n, 1 + rng.below(40), it % 2 == 0, rng, 0.3);
    CloneSystem cs(n);
    FractionalState st(n);
    for (std::size_t t = 0; t < sys.m(); ++t) {
      frac_process(st, sys.set(t), sys.costs());
      const auto& tt = cs.uniformize_step(st, sys.set(t));
      EXPECT_GE(tt.size(), cs.B());
      EXPECT_EQ(proj(n, tt), sys.set(t));
      EXPECT_TRUE(std::is_sorted(tt.begin(), tt.end()));
      // Indices of each element form a prefix 0..k.
      std::map<ElementId, std::uint32_t> count;
      for (auto c : tt) {
        auto [e, i] = decode_clone(n, c);
        EXPECT_EQ(i, count[e]++);
      }
    }
    double sum = 0;
    for (auto v : st.x) sum += v.to_double();
    EXPECT_LE(static_cast<double>(cs.n_prime()), n * (1 + sum) + n + 1e-9);
  }
}

// For t < t' and e in both sets, the clones of e in T_t are a subset of
// those in T_t'. This implies the chain property for every V''.
TEST(UniformizeTest, PairwisePrefixNesting) {
  Rng rng(10);
  for (int it = 0; it < 100; ++it) {
    std::size_t n = 2 + rng.below(5);
    auto r = run_unweighted(testing::random_system(n, 1 + rng.below(8), false, rng, 0.5));
    for (std::size_t a = 0; a < r.cs.m(); ++a)
      for (std::size_t b = a + 1; b < r.cs.m(); ++b)
        for (auto c : r.cs.set(a)) {
          auto e = decode_clone(n, c).element;
          const auto& sb = r.sys.set(b);
          if (!std::binary_search(sb.begin(), sb.end(), e)) continue;
          EXPECT_TRUE(std::binary_search(r.cs.set(b).begin(), r.cs.set(b).end(), c));
        }
  }
}

// Brute force over every V'' when V' is small.
TEST(UniformizeTest, ChainPropertyExhaustive) {
  Rng rng(11);
  int checked = 0;
  for (int it = 0; it < 400 && checked < 60; ++it) {
    std::size_t n = 2 + rng.below(3);
    auto r = run_unweighted(testing::random_system(n, 1 + rng.below(6), false, rng, 0.5));
    if (r.cs.n_prime() > 14) continue;
    ++checked;
    std::vector<CloneId> active;
    for (ElementId e = 0; e < n; ++e)
      for (std::int64_t i = 0; i <= r.cs.top(e); ++i)
        active.push_back(r.cs.id(e, static_cast<std::uint32_t>(i)));
    std::vector<std::uint32_t> masks;
    for (const auto& t : r.cs.sets()) {
      std::uint32_t m = 0;
      for (std::size_t k = 0; k < active.size(); ++k)
        if (std::binary_search(t.begin(), t.end(), active[k])) m |= 1U << k;
      masks.push_back(m);
    }
    auto project = [&](std::uint32_t m) {
      std::uint32_t p = 0;
      for (std::size_t k = 0; k < active.size(); ++k)
        if (m >> k & 1U) p |= 1U << decode_clone(n, active[k]).element;
      return p;
    };
    for (std::uint32_t sub = 0; sub < (1U << active.size()); ++sub)
      for (std::size_t a = 0; a < masks.size(); ++a)
        for (std::size_t b = a + 1; b < masks.size(); ++b) {
          std::uint32_t ta = masks[a] & sub, tb = masks[b] & sub;
          if (project(ta) != project(tb)) continue;
          EXPECT_TRUE((ta & tb) == ta || (ta & tb) == tb);
        }
  }
  EXPECT_GE(checked, 20);
}

std::vector<CloneId> active_clones(const CloneSystem& cs) {
  std::vector<CloneId> active;
  for (ElementId e = 0; e < cs.n(); ++e)
    for (std::int64_t i = 0; i <= cs.top(e); ++i)
      active.push_back(cs.id(e, static_cast<std::uint32_t>(i)));
  return active;
}

bool shattered_by(const CloneSystem& cs, const std::vector<CloneId>& sub) {
  std::set<std::vector<bool>> traces;
  for (const auto& t : cs.sets()) {
    std::vector<bool> tr;
    for (auto c : sub) tr.push_back(std::binary_search(t.begin(), t.end(), c));
    traces.insert(tr);
  }
  return traces.size() == (std::size_t{1} << sub.size());
}

// Two clones of one element are never shattered together: the clone with the
// larger index only appears alongside the smaller one.
TEST(UniformizeTest, ShatteredClonesHaveDistinctElements) {
  Rng rng(12);
  for (int it = 0; it < 100; ++it) {
    std::size_t n = 2 + rng.below(4);
    auto r = run_unweighted(testing::random_system(n, 4 + rng.below(8), false, rng, 0.5));
    auto active = active_clones(r.cs);
    for (std::size_t a = 0; a < active.size(); ++a)
      for (std::size_t b = a + 1; b < active.size(); ++b)
        if (decode_clone(n, active[a]).element == decode_clone(n, active[b]).element)
          EXPECT_FALSE(shattered_by(r.cs, {active[a], active[b]}));
  }
}

// The clone system can shatter a pair whose elements are not shattered by
// the original sets. S0 contains element 2 while x_2 is still 1/2, so its
// trace drops (2,3) and supplies the empty trace that F lacks on {1, 2}.
TEST(UniformizeTest, VcDimensionCanGrow) {
  SetSystem sys(3, {{0, 2}, {1, 2}, {1}, {2}});
  auto r = run_unweighted(sys);
  EXPECT_EQ(vc_dimension(sys).dimension, 1);
  EXPECT_EQ(r.cs.set(0), clones(3, {{0, 0}, {0, 1}, {0, 2}, {2, 0}, {2, 1}, {2, 2}}));
  EXPECT_TRUE(shattered_by(r.cs, {r.cs.id(1, 2), r.cs.id(2, 3)}));
  std::vector<ElementSet> sets;
  auto active = active_clones(r.cs);
  for (const auto& t : r.cs.sets()) {
    ElementSet s;
    for (std::size_t k = 0; k < active.size(); ++k)
      if (std::binary_search(t.begin(), t.end(), active[k])) s.push_back(static_cast<ElementId>(k));
    sets.push_back(s);
  }
  EXPECT_EQ(testing::vc_by_traces(sets, active.size()), 2u);
}

TEST(UniformizeTest, JsonUsesPairs) {
  CloneSystem cs(2);
  FractionalState st(2);
  st.x[1] = Fraction::from_raw(Fraction::kOne / 2);
  cs.uniformize_step(st, {0, 1});
  auto j = to_json(cs);
  EXPECT_EQ(j["sets"][0].dump(), "[[0,0],[1,0],[1,1]]");
  EXPECT_EQ(j["B"], 2);
  EXPECT_EQ(j["N"], 6);
}

}  // namespace
}  // namespace ohs

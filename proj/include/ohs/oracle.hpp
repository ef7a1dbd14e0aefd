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

// Exact offline optima: OPT (integral) and LP (fractional) of the first t
// sets of a system.
//
// Systems in which every set is a contiguous id range (interval systems with
// ids in coordinate order) have a totally unimodular constraint matrix, so
// LP = OPT and both come from an O(n + m) dynamic program. Everything else
// goes through reductions, component splitting, and branch and bound with
// LP bounds; the LP itself is solved exactly.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ohs/bigrational.hpp"
#include "ohs/core.hpp"
#include "ohs/lp.hpp"

namespace ohs {

class BudgetExceeded : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleBudget {
  std::uint64_t max_nodes = 2'000'000;
};

struct OracleResult {
  BigRational opt_cost = 0;
  BigRational lp_cost = 0;
  ElementSet opt_witness;
  std::string method;
};

// Costs scaled to integers by the lcm of their denominators.
struct ScaledCosts {
  std::vector<std::int64_t> weight;
  std::int64_t denom = 1;

  explicit ScaledCosts(const std::vector<Rational>& costs) {
    std::int64_t l = 1;
    for (const auto& c : costs) {
      __int128 next = static_cast<__int128>(l / std::gcd(l, c.den())) * c.den();
      if (next > (std::int64_t{1} << 40))
        throw BudgetExceeded("cost denominators too fine for exact search");
      l = static_cast<std::int64_t>(next);
    }
    denom = l;
    __int128 total = 0;
    weight.reserve(costs.size());
    for (const auto& c : costs) {
      __int128 w = static_cast<__int128>(c.num()) * (l / c.den());
      total += w;
      if (total > (std::int64_t{1} << 52))
        throw BudgetExceeded("total cost too large for exact search");
      weight.push_back(static_cast<std::int64_t>(w));
    }
  }

  BigRational to_cost(std::int64_t scaled) const {
    return BigRational(BigInt(scaled), BigInt(denom));
  }
};

inline bool is_consecutive(const SetSystem& system, std::size_t upto) {
  for (std::size_t t = 0; t < upto; ++t) {
    const auto& s = system.set(t);
    if (s.back() - s.front() + 1 != s.size()) return false;
  }
  return true;
}

namespace detail {

struct IntervalDpResult {
  std::int64_t cost = 0;
  ElementSet witness;
};

// Min-weight stabbing of intervals [lo_j, hi_j] over points 0..n-1.
// best[q] (q >= 1) is the cheapest point set whose last point is q-1 and that
// stabs every interval ending before q-1; best[0] = 0 is "nothing chosen".
inline IntervalDpResult interval_dp(std::size_t n,
                                    const std::vector<std::int64_t>& weight,
                                    const std::vector<std::pair<std::int64_t, std::int64_t>>& ivals) {
  std::vector<std::int64_t> max_lo_ending_at(n, -1);
  std::int64_t max_lo_all = -1;
  for (auto [lo, hi] : ivals) {
    max_lo_ending_at[static_cast<std::size_t>(hi)] =
        std::max(max_lo_ending_at[static_cast<std::size_t>(hi)], lo);
    max_lo_all = std::max(max_lo_all, lo);
  }
  constexpr std::int64_t kInf = INT64_MAX / 4;
  std::vector<std::int64_t> best(n + 1, kInf);
  std::vector<std::int64_t> from(n + 1, -1);
  best[0] = 0;
  std::deque<std::size_t> window;  // indices q with increasing best[q]
  window.push_back(0);
  std::int64_t lo_bound = -1;  // max lo over intervals ending before i
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) lo_bound = std::max(lo_bound, max_lo_ending_at[i - 1]);
    // Predecessors q in [lo_bound + 1, i].
    auto first = static_cast<std::size_t>(lo_bound + 1);
    while (!window.empty() && window.front() < first) window.pop_front();
    if (!window.empty() && best[window.front()] < kInf) {
      best[i + 1] = best[window.front()] + weight[i];
      from[i + 1] = static_cast<std::int64_t>(window.front());
    }
    while (!window.empty() && best[window.back()] >= best[i + 1])
      window.pop_back();
    window.push_back(i + 1);
  }
  std::size_t end = 0;
  std::int64_t answer = kInf;
  for (auto q = static_cast<std::size_t>(max_lo_all + 1); q <= n; ++q)
    if (best[q] < answer) {
      answer = best[q];
      end = q;
    }
  IntervalDpResult out;
  out.cost = answer;
  for (std::size_t q = end; q > 0; q = static_cast<std::size_t>(from[q]))
    out.witness.push_back(static_cast<ElementId>(q - 1));
  std::reverse(out.witness.begin(), out.witness.end());
  return out;
}

inline IntervalDpResult interval_dp(const SetSystem& system, std::size_t upto,
                                    const ScaledCosts& scaled) {
  std::vector<std::pair<std::int64_t, std::int64_t>> ivals;
  ivals.reserve(upto);
  for (std::size_t t = 0; t < upto; ++t)
    ivals.emplace_back(system.set(t).front(), system.set(t).back());
  return interval_dp(system.n(), scaled.weight, ivals);
}

// Fixed-width bitset over a dynamic universe.
class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t n) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(std::size_t i) {
    words_[i / 64] &= ~(std::uint64_t{1} << (i % 64));
  }
  bool test(std::size_t i) const {
    return (words_[i / 64] >> (i % 64)) & 1U;
  }
  bool subset_of(const Bits& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & ~o.words_[w]) return false;
    return true;
  }
  friend bool operator==(const Bits&, const Bits&) = default;

 private:
  std::vector<std::uint64_t> words_;
};

// A reduced hitting-set problem on local ids.
struct Problem {
  std::vector<std::int64_t> weight;
  std::vector<ElementId> original;  // local id -> original id
  std::vector<ElementSet> sets;
};

// Removes dominated sets and elements and takes forced elements until a
// fixpoint. Forced picks (original ids) are appended to `forced`.
inline Problem reduce(Problem p, ElementSet& forced, std::int64_t& forced_cost) {
  for (;;) {
    bool changed = false;
    // Forced elements: singleton sets.
    std::vector<bool> take(p.weight.size(), false);
    for (const auto& s : p.sets)
      if (s.size() == 1) take[s[0]] = true;
    if (std::find(take.begin(), take.end(), true) != take.end()) {
      changed = true;
      std::vector<ElementSet> kept;
      for (auto& s : p.sets) {
        bool hit = std::any_of(s.begin(), s.end(),
                               [&](ElementId e) { return take[e]; });
        if (!hit) kept.push_back(std::move(s));
      }
      p.sets = std::move(kept);
      for (std::size_t e = 0; e < take.size(); ++e)
        if (take[e]) {
          forced.push_back(p.original[e]);
          forced_cost += p.weight[e];
        }
    }
    // Set dominance: drop duplicates and strict supersets.
    std::sort(p.sets.begin(), p.sets.end(),
              [](const ElementSet& a, const ElementSet& b) {
                return a.size() != b.size() ? a.size() < b.size() : a < b;
              });
    {
      const std::size_t n = p.weight.size();
      std::vector<ElementSet> kept;
      std::vector<Bits> kept_bits;
      for (auto& s : p.sets) {
        Bits bits(n);
        for (auto e : s) bits.set(e);
        bool dominated = false;
        for (const auto& k : kept_bits)
          if (k.subset_of(bits)) {
            dominated = true;
            break;
          }
        if (dominated) {
          changed = true;
          continue;
        }
        kept.push_back(std::move(s));
        kept_bits.push_back(std::move(bits));
      }
      p.sets = std::move(kept);
    }
    // Element dominance: e is redundant if some f with weight <= w_e lies in
    // every set containing e (ties keep the smaller id).
    {
      const std::size_t n = p.weight.size();
      std::vector<Bits> occurs(n, Bits(p.sets.size()));
      std::vector<std::size_t> freq(n, 0);
      for (std::size_t j = 0; j < p.sets.size(); ++j)
        for (auto e : p.sets[j]) {
          occurs[e].set(j);
          ++freq[e];
        }
      std::vector<bool> drop(n, false);
      for (std::size_t e = 0; e < n; ++e) {
        if (freq[e] == 0) {
          drop[e] = true;
          continue;
        }
        for (std::size_t f = 0; f < n && !drop[e]; ++f) {
          if (f == e || drop[f] || freq[f] < freq[e]) continue;
          if (p.weight[f] > p.weight[e]) continue;
          if (!occurs[e].subset_of(occurs[f])) continue;
          bool same = freq[f] == freq[e] && p.weight[f] == p.weight[e];
          if (same && f > e) continue;
          drop[e] = true;
        }
      }
      // Compact ids.
      std::vector<ElementId> remap(n, 0);
      Problem q;
      for (std::size_t e = 0; e < n; ++e) {
        if (drop[e]) continue;
        remap[e] = static_cast<ElementId>(q.weight.size());
        q.weight.push_back(p.weight[e]);
        q.original.push_back(p.original[e]);
      }
      if (q.weight.size() != n) changed = true;
      for (auto& s : p.sets) {
        ElementSet t;
        for (auto e : s)
          if (!drop[e]) t.push_back(remap[e]);
        q.sets.push_back(std::move(t));
      }
      p = std::move(q);
    }
    if (!changed) return p;
  }
}

inline std::vector<Problem> split_components(const Problem& p) {
  const std::size_t n = p.weight.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& s : p.sets)
    for (std::size_t i = 1; i < s.size(); ++i)
      parent[find(s[i])] = find(s[0]);
  std::vector<std::int64_t> comp_of(n, -1);
  std::vector<Problem> comps;
  std::vector<ElementId> local(n, 0);
  for (std::size_t e = 0; e < n; ++e) {
    std::size_t r = find(e);
    if (comp_of[r] < 0) {
      comp_of[r] = static_cast<std::int64_t>(comps.size());
      comps.emplace_back();
    }
    auto& c = comps[static_cast<std::size_t>(comp_of[r])];
    local[e] = static_cast<ElementId>(c.weight.size());
    c.weight.push_back(p.weight[e]);
    c.original.push_back(p.original[e]);
  }
  for (const auto& s : p.sets) {
    auto& c = comps[static_cast<std::size_t>(comp_of[find(s[0])])];
    ElementSet t;
    for (auto e : s) t.push_back(local[e]);
    c.sets.push_back(std::move(t));
  }
  return comps;
}

class BranchAndBound {
 public:
  BranchAndBound(const Problem& p, std::uint64_t& nodes, std::uint64_t budget)
      : p_(p), nodes_(nodes), budget_(budget) {
    const std::size_t n = p.weight.size();
    status_.assign(n, kFree);
    containing_.assign(n, {});
    for (std::size_t j = 0; j < p.sets.size(); ++j)
      for (auto e : p.sets[j]) containing_[e].push_back(j);
    hit_count_.assign(p.sets.size(), 0);
  }

  // Returns (cost, local witness).
  std::pair<std::int64_t, ElementSet> run() {
    greedy_incumbent();
    search(0);
    return {best_cost_, best_};
  }

 private:
  static constexpr char kFree = 0, kChosen = 1, kExcluded = 2;

  void choose(ElementId e) {
    status_[e] = kChosen;
    for (auto j : containing_[e]) ++hit_count_[j];
  }
  void unchoose(ElementId e) {
    status_[e] = kFree;
    for (auto j : containing_[e]) --hit_count_[j];
  }

  void greedy_incumbent() {
    const std::size_t n = p_.weight.size();
    std::vector<bool> hit(p_.sets.size(), false);
    std::vector<ElementId> picked;
    std::size_t remaining = p_.sets.size();
    while (remaining > 0) {
      double best_ratio = 0;
      std::size_t best_e = n;
      for (std::size_t e = 0; e < n; ++e) {
        std::size_t gain = 0;
        for (auto j : containing_[e])
          if (!hit[j]) ++gain;
        if (gain == 0) continue;
        double ratio = static_cast<double>(p_.weight[e]) / static_cast<double>(gain);
        if (best_e == n || ratio < best_ratio) {
          best_ratio = ratio;
          best_e = e;
        }
      }
      picked.push_back(static_cast<ElementId>(best_e));
      for (auto j : containing_[best_e])
        if (!hit[j]) {
          hit[j] = true;
          --remaining;
        }
    }
    // Drop redundant picks, most expensive first.
    std::sort(picked.begin(), picked.end(), [&](ElementId a, ElementId b) {
      return p_.weight[a] > p_.weight[b];
    });
    std::vector<int> cover(p_.sets.size(), 0);
    for (auto e : picked)
      for (auto j : containing_[e]) ++cover[j];
    ElementSet keep;
    for (auto e : picked) {
      bool needed = std::any_of(containing_[e].begin(), containing_[e].end(),
                                [&](std::size_t j) { return cover[j] == 1; });
      if (needed) {
        keep.push_back(e);
      } else {
        for (auto j : containing_[e]) --cover[j];
      }
    }
    std::sort(keep.begin(), keep.end());
    best_ = keep;
    best_cost_ = 0;
    for (auto e : keep) best_cost_ += p_.weight[e];
  }

  // LP bound over unhit sets restricted to free elements. Sets *integral_x
  // when the LP optimum is integral (and hence optimal for this node).
  double lp_bound(std::optional<ElementSet>* integral) {
    std::vector<std::int64_t> row_of(p_.weight.size(), -1);
    std::vector<ElementId> rows;
    std::vector<Rational> caps;
    for (std::size_t e = 0; e < p_.weight.size(); ++e)
      if (status_[e] == kFree) {
        row_of[e] = static_cast<std::int64_t>(rows.size());
        rows.push_back(static_cast<ElementId>(e));
        caps.emplace_back(p_.weight[e]);
      }
    PackingSimplex<double> lp(caps);
    for (std::size_t j = 0; j < p_.sets.size(); ++j) {
      if (hit_count_[j] > 0) continue;
      ElementSet col;
      for (auto e : p_.sets[j])
        if (row_of[e] >= 0) col.push_back(static_cast<ElementId>(row_of[e]));
      lp.add_column(col);
    }
    lp.solve();
    double value = lp.value();
    auto x = lp.covering();
    ElementSet chosen;
    bool is_integral = true;
    for (std::size_t r = 0; r < x.size(); ++r) {
      if (x[r] > 1 - 1e-9 && x[r] < 1 + 1e-9) {
        chosen.push_back(rows[r]);
      } else if (std::abs(x[r]) > 1e-9) {
        is_integral = false;
        break;
      }
    }
    if (is_integral) *integral = std::move(chosen);
    return value;
  }

  void record(std::int64_t cost) {
    if (cost >= best_cost_) return;
    best_cost_ = cost;
    best_.clear();
    for (std::size_t e = 0; e < status_.size(); ++e)
      if (status_[e] == kChosen) best_.push_back(static_cast<ElementId>(e));
  }

  void search(std::int64_t cost) {
    if (++nodes_ > budget_)
      throw BudgetExceeded("branch and bound node budget exhausted");
    if (cost >= best_cost_) return;
    // Most constrained unhit set.
    std::size_t pick = p_.sets.size();
    std::size_t pick_free = 0;
    for (std::size_t j = 0; j < p_.sets.size(); ++j) {
      if (hit_count_[j] > 0) continue;
      std::size_t free = 0;
      for (auto e : p_.sets[j])
        if (status_[e] == kFree) ++free;
      if (free == 0) return;
      if (pick == p_.sets.size() || free < pick_free) {
        pick = j;
        pick_free = free;
      }
    }
    if (pick == p_.sets.size()) {
      record(cost);
      return;
    }
    std::optional<ElementSet> integral;
    double bound = static_cast<double>(cost) + lp_bound(&integral);
    double tol = 1e-6 * std::max(1.0, bound);
    // Costs are integers: a better solution costs at most best - 1.
    if (bound > static_cast<double>(best_cost_ - 1) + tol) return;
    if (integral) {
      std::int64_t total = cost;
      for (auto e : *integral) total += p_.weight[e];
      if (total < best_cost_) {
        for (auto e : *integral) choose(e);
        record(total);
        for (auto e : *integral) unchoose(e);
      }
      return;
    }
    // Branch: the set is hit by its first chosen element in this order.
    ElementSet order;
    for (auto e : p_.sets[pick])
      if (status_[e] == kFree) order.push_back(e);
    auto effectiveness = [&](ElementId e) {
      std::size_t gain = 0;
      for (auto j : containing_[e])
        if (hit_count_[j] == 0) ++gain;
      return static_cast<double>(p_.weight[e]) / static_cast<double>(gain);
    };
    std::vector<std::pair<double, ElementId>> keyed;
    for (auto e : order) keyed.emplace_back(effectiveness(e), e);
    std::sort(keyed.begin(), keyed.end());
    std::vector<ElementId> excluded;
    for (auto [key, e] : keyed) {
      choose(e);
      search(cost + p_.weight[e]);
      unchoose(e);
      status_[e] = kExcluded;
      excluded.push_back(e);
    }
    for (auto e : excluded) status_[e] = kFree;
  }

  const Problem& p_;
  std::uint64_t& nodes_;
  std::uint64_t budget_;
  std::vector<char> status_;
  std::vector<std::vector<std::size_t>> containing_;
  std::vector<int> hit_count_;
  ElementSet best_;
  std::int64_t best_cost_ = 0;
};

}  // namespace detail

// Exact LP optimum of the first `upto` sets.
inline BigRational lp_opt(const SetSystem& system, std::size_t upto) {
  if (upto > system.m()) throw std::out_of_range("lp_opt: upto exceeds m");
  if (upto == 0) return 0;
  if (is_consecutive(system, upto)) {
    try {
      ScaledCosts scaled(system.costs());
      return scaled.to_cost(detail::interval_dp(system, upto, scaled).cost);
    } catch (const BudgetExceeded&) {
      // fall through to the simplex
    }
  }
  return covering_lp_certified(system, upto).value;
}

// Exact integral optimum of the first `upto` sets, with witness.
inline OracleResult exact_opt(const SetSystem& system, std::size_t upto,
                              OracleBudget budget = {}) {
  if (upto > system.m()) throw std::out_of_range("exact_opt: upto exceeds m");
  OracleResult out;
  if (upto == 0) {
    out.method = "empty";
    return out;
  }
  ScaledCosts scaled(system.costs());
  if (is_consecutive(system, upto)) {
    auto dp = detail::interval_dp(system, upto, scaled);
    out.opt_cost = scaled.to_cost(dp.cost);
    out.lp_cost = out.opt_cost;
    out.opt_witness = std::move(dp.witness);
    out.method = "interval-dp";
    return out;
  }
  detail::Problem p;
  p.weight = scaled.weight;
  p.original.resize(system.n());
  std::iota(p.original.begin(), p.original.end(), ElementId{0});
  for (std::size_t t = 0; t < upto; ++t) p.sets.push_back(system.set(t));
  ElementSet witness;
  std::int64_t total = 0;
  p = detail::reduce(std::move(p), witness, total);
  std::uint64_t nodes = 0;
  for (const auto& comp : detail::split_components(p)) {
    if (comp.sets.empty()) continue;
    auto [cost, local] =
        detail::BranchAndBound(comp, nodes, budget.max_nodes).run();
    total += cost;
    for (auto e : local) witness.push_back(comp.original[e]);
  }
  std::sort(witness.begin(), witness.end());
  out.opt_cost = scaled.to_cost(total);
  out.opt_witness = std::move(witness);
  out.lp_cost = covering_lp_certified(system, upto).value;
  out.method = "branch-and-bound";
  return out;
}

// Online LP lower bound on OPT for the phase discipline. Sets are appended
// as they arrive; phase() returns floor(log2(max(1, LP))) exactly. Interval
// systems use the exact DP; other systems a warm-started floating-point
// simplex, escalated to an exact solve whenever the value is too close to a
// power of two to decide.
class LpLowerBound {
 public:
  explicit LpLowerBound(const SetSystem& universe)
      : costs_(universe.costs()), lp_(universe.costs()),
        prefix_(universe.prefix(0)) {
    try {
      scaled_.emplace(costs_);
    } catch (const BudgetExceeded&) {
    }
  }

  void add_set(const ElementSet& s) {
    prefix_.add_set(s);
    lp_.add_column(s);
    if (s.back() - s.front() + 1 != s.size()) consecutive_ = false;
    stale_ = true;
  }

  double value() {
    refresh();
    return value_;
  }

  int phase() {
    refresh();
    if (exact_) return phase_of_exact(*exact_);
    double v = std::max(1.0, value_);
    int k = static_cast<int>(std::floor(std::log2(v)));
    double lo = std::ldexp(1.0, k), hi = std::ldexp(1.0, k + 1);
    double tol = 1e-7 * v;
    if (v - lo > tol && hi - v > tol) return k;
    ++exact_solves_;
    PackingSimplex<BigRational> exact(costs_);
    for (const auto& s : prefix_.sets()) exact.add_column(s);
    exact.install_basis(lp_.basis());
    exact.solve();
    return phase_of_exact(exact.value());
  }

  std::uint64_t exact_solves() const { return exact_solves_; }

 private:
  static int phase_of_exact(const BigRational& v) {
    int i = 0;
    while (i < 62 && BigRational(BigInt(1) << (i + 1)) <= v) ++i;
    return i;
  }

  void refresh() {
    if (!stale_) return;
    stale_ = false;
    exact_.reset();
    if (consecutive_ && scaled_) {
      auto dp = detail::interval_dp(prefix_, prefix_.m(), *scaled_);
      exact_ = scaled_->to_cost(dp.cost);
      value_ = big_to_double(*exact_);
      return;
    }
    lp_.solve();
    value_ = lp_.value();
  }

  std::vector<Rational> costs_;
  PackingSimplex<double> lp_;
  SetSystem prefix_;
  std::optional<ScaledCosts> scaled_;
  std::optional<BigRational> exact_;
  double value_ = 0;
  bool consecutive_ = true;
  bool stale_ = false;
  std::uint64_t exact_solves_ = 0;
};

}  // namespace ohs

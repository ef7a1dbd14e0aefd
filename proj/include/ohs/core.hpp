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

// Set-system data model and the online arrival protocol.
//
// A SetSystem is a universe of n cost-bearing elements {0, ..., n-1} plus an
// ordered list of nonempty subsets. Sets are stored as sorted id vectors so
// that iteration order, and hence every seeded run, is reproducible.
// Unweighted instances are ordinary instances with every cost equal to 1.

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ohs/rational.hpp"

namespace ohs {

using ElementId = std::uint32_t;
using ElementSet = std::vector<ElementId>;  // sorted, no duplicates

class EndOfStream : public std::out_of_range {
 public:
  EndOfStream() : std::out_of_range("arrival stream exhausted") {}
};

class InvalidInstance : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline ElementSet normalized(ElementSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

// Merge-based intersection test on sorted sets.
inline bool intersects(const ElementSet& a, const ElementSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j)
      ++i;
    else
      ++j;
  }
  return false;
}

inline bool is_subset(const ElementSet& small, const ElementSet& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

class SetSystem {
 public:
  SetSystem() = default;

  // Unit costs.
  SetSystem(std::size_t n, std::vector<ElementSet> sets)
      : SetSystem(std::vector<Rational>(n, Rational(1)), std::move(sets),
                  false) {}

  SetSystem(std::vector<Rational> costs, std::vector<ElementSet> sets,
            bool weighted = true)
      : costs_(std::move(costs)), weighted_(weighted) {
    sets_.reserve(sets.size());
    for (auto& s : sets) add_set(std::move(s));
    for (const auto& c : costs_)
      if (c < Rational(0)) throw InvalidInstance("negative element cost");
  }

  std::size_t n() const { return costs_.size(); }
  std::size_t m() const { return sets_.size(); }
  bool weighted() const { return weighted_; }

  const ElementSet& set(std::size_t j) const { return sets_.at(j); }
  const std::vector<ElementSet>& sets() const { return sets_; }
  const Rational& cost(ElementId e) const { return costs_.at(e); }
  const std::vector<Rational>& costs() const { return costs_; }

  void add_set(ElementSet s) {
    s = normalized(std::move(s));
    if (s.empty()) throw InvalidInstance("empty set in set system");
    if (s.back() >= n())
      throw InvalidInstance("set member " + std::to_string(s.back()) +
                            " outside universe of size " +
                            std::to_string(n()));
    sets_.push_back(std::move(s));
  }

  // The system formed by the first `t` sets.
  SetSystem prefix(std::size_t t) const {
    SetSystem out;
    out.costs_ = costs_;
    out.weighted_ = weighted_;
    out.sets_.assign(sets_.begin(),
                     sets_.begin() + static_cast<std::ptrdiff_t>(
                                         std::min(t, sets_.size())));
    return out;
  }

  // Same sets, delivered in `order`.
  SetSystem reordered(const std::vector<std::size_t>& order) const {
    SetSystem out;
    out.costs_ = costs_;
    out.weighted_ = weighted_;
    out.sets_.reserve(order.size());
    for (auto j : order) out.sets_.push_back(sets_.at(j));
    return out;
  }

  friend bool operator==(const SetSystem&, const SetSystem&) = default;

 private:
  std::vector<Rational> costs_;
  std::vector<ElementSet> sets_;
  bool weighted_ = false;
};

// A monotone integral solution. Elements can be added, never removed.
class IntegralSolution {
 public:
  IntegralSolution() = default;
  explicit IntegralSolution(std::size_t n) : member_(n, false) {}

  // Returns true if `e` was not already chosen.
  bool add(ElementId e, const Rational& cost) {
    if (e >= member_.size()) member_.resize(e + 1, false);
    if (member_[e]) return false;
    member_[e] = true;
    chosen_.insert(std::upper_bound(chosen_.begin(), chosen_.end(), e), e);
    cost_ += cost;
    return true;
  }
  bool add(ElementId e, const SetSystem& system) {
    return add(e, system.cost(e));
  }

  bool contains(ElementId e) const {
    return e < member_.size() && member_[e];
  }
  const ElementSet& chosen() const { return chosen_; }
  std::size_t size() const { return chosen_.size(); }
  const Rational& cost() const { return cost_; }

  // True iff every element of `other` is also chosen here.
  bool includes(const IntegralSolution& other) const {
    return is_subset(other.chosen_, chosen_);
  }

 private:
  std::vector<bool> member_;
  ElementSet chosen_;
  Rational cost_{0};
};

inline bool is_hit(const ElementSet& set, const IntegralSolution& sol) {
  return std::any_of(set.begin(), set.end(),
                     [&](ElementId e) { return sol.contains(e); });
}

// True iff the first `upto` sets are all hit.
inline bool verify_feasible(const SetSystem& system,
                            const IntegralSolution& sol, std::size_t upto) {
  if (upto > system.m())
    throw std::out_of_range("verify_feasible: upto exceeds number of sets");
  for (std::size_t t = 0; t < upto; ++t)
    if (!is_hit(system.set(t), sol)) return false;
  return true;
}

inline bool verify_feasible(const SetSystem& system,
                            const IntegralSolution& sol) {
  return verify_feasible(system, sol, system.m());
}

inline Rational solution_cost(const SetSystem& system, const ElementSet& sol) {
  Rational total(0);
  for (auto e : sol) total += system.cost(e);
  return total;
}

// Order in which an adversary delivers the sets of a system.
class ArrivalStream {
 public:
  ArrivalStream() = default;
  explicit ArrivalStream(std::vector<std::size_t> order)
      : order_(std::move(order)) {
    auto sorted = order_;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
      if (sorted[i] != i)
        throw std::invalid_argument("arrival order is not a permutation");
  }
  static ArrivalStream identity(std::size_t m) {
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    return ArrivalStream(std::move(order));
  }

  const std::vector<std::size_t>& order() const { return order_; }
  std::size_t cursor() const { return cursor_; }
  std::size_t size() const { return order_.size(); }
  bool done() const { return cursor_ >= order_.size(); }

  // Index (into the system) of the set delivered next.
  std::size_t peek() const {
    if (done()) throw EndOfStream();
    return order_[cursor_];
  }
  std::size_t advance() {
    std::size_t j = peek();
    ++cursor_;
    return j;
  }

 private:
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
};

inline const ElementSet& deliver_next(ArrivalStream& stream,
                                      const SetSystem& system) {
  if (stream.size() != system.m())
    throw std::invalid_argument("stream length differs from set count");
  return system.set(stream.advance());
}

// The dual system: one element per set of `system`, one set per element that
// lies in at least one set. Elements contained in no set would produce empty
// dual sets and are dropped; `kept` (if given) receives the original id of
// each dual set.
inline SetSystem dualize(const SetSystem& system,
                         std::vector<ElementId>* kept = nullptr) {
  std::vector<ElementSet> incidence(system.n());
  for (std::size_t j = 0; j < system.m(); ++j)
    for (auto e : system.set(j))
      incidence[e].push_back(static_cast<ElementId>(j));
  std::vector<ElementSet> dual_sets;
  if (kept) kept->clear();
  for (std::size_t e = 0; e < system.n(); ++e) {
    if (incidence[e].empty()) continue;
    dual_sets.push_back(std::move(incidence[e]));
    if (kept) kept->push_back(static_cast<ElementId>(e));
  }
  return SetSystem(std::vector<Rational>(system.m(), Rational(1)),
                   std::move(dual_sets), false);
}

}  // namespace ohs

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

// Online uniformization into a clone system.
//
// Element e has potential clones (e, 0), ..., (e, n). When S_t arrives with
// fractional solution x, the clone set is
//   T_t = {(e, i) : e in S_t, 0 <= i <= ceil(n * x_e)},
// so every clone set has at least n members whenever x covers S_t, and the
// clones of e seen so far always form a prefix 0..k_e.

#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "json.hpp"
#include "ohs/core.hpp"
#include "ohs/fractional.hpp"

namespace ohs {

// Clone (e, i) of a universe of size n is encoded as e * (n + 1) + i, so
// the natural order on ids is lexicographic in (element, index).
using CloneId = std::uint64_t;
using CloneSet = std::vector<CloneId>;  // sorted

struct Clone {
  ElementId element;
  std::uint32_t index;
  friend bool operator==(const Clone&, const Clone&) = default;
};

inline CloneId encode_clone(std::size_t n, ElementId e, std::uint32_t i) {
  return static_cast<CloneId>(e) * (n + 1) + i;
}

inline Clone decode_clone(std::size_t n, CloneId c) {
  return {static_cast<ElementId>(c / (n + 1)),
          static_cast<std::uint32_t>(c % (n + 1))};
}

class CloneSystem {
 public:
  explicit CloneSystem(std::size_t n = 0)
      : n_(n), top_(n, -1) {}

  std::size_t n() const { return n_; }
  std::size_t B() const { return n_; }
  std::size_t N() const { return n_ * (n_ + 1); }
  std::size_t n_prime() const { return n_prime_; }
  std::size_t m() const { return sets_.size(); }

  const CloneSet& set(std::size_t t) const { return sets_.at(t); }
  const std::vector<CloneSet>& sets() const { return sets_; }

  // Highest clone index of e in V', or -1 if no clone of e is active.
  std::int64_t top(ElementId e) const { return top_.at(e); }
  bool active(CloneId c) const {
    auto [e, i] = decode_clone(n_, c);
    return static_cast<std::int64_t>(i) <= top_[e];
  }

  CloneId id(ElementId e, std::uint32_t i) const {
    return encode_clone(n_, e, i);
  }
  Clone clone(CloneId c) const { return decode_clone(n_, c); }

  // Appends T_t built from S_t and x. Clones not seen before join V'.
  const CloneSet& uniformize_step(const FractionalState& state,
                                  const ElementSet& s) {
    CloneSet t;
    for (auto e : s) {
      auto k = static_cast<std::int64_t>(state.x.at(e).ceil_times(n_));
      for (std::int64_t i = 0; i <= k; ++i)
        t.push_back(id(e, static_cast<std::uint32_t>(i)));
      if (k > top_[e]) {
        n_prime_ += static_cast<std::size_t>(k - top_[e]);
        top_[e] = k;
      }
    }
    sets_.push_back(std::move(t));
    return sets_.back();
  }

 private:
  std::size_t n_;
  std::vector<std::int64_t> top_;
  std::size_t n_prime_ = 0;
  std::vector<CloneSet> sets_;
};

// Elements with at least one clone in `clones`.
inline ElementSet proj(std::size_t n, const CloneSet& clones) {
  ElementSet out;
  for (auto c : clones) {
    ElementId e = decode_clone(n, c).element;
    if (out.empty() || out.back() != e) out.push_back(e);
  }
  return normalized(std::move(out));
}

inline CloneSet lift_solution(std::size_t n, const ElementSet& elements) {
  CloneSet out;
  for (auto e : elements) out.push_back(encode_clone(n, e, 0));
  std::sort(out.begin(), out.end());
  return out;
}

inline ElementSet lower_solution(std::size_t n, const CloneSet& clones) {
  return proj(n, clones);
}

inline nlohmann::json to_json(const CloneSystem& cs) {
  nlohmann::json j;
  j["n"] = cs.n();
  j["B"] = cs.B();
  j["N"] = cs.N();
  j["N_prime"] = cs.n_prime();
  auto sets = nlohmann::json::array();
  for (const auto& t : cs.sets()) {
    auto pairs = nlohmann::json::array();
    for (auto c : t) {
      auto [e, i] = cs.clone(c);
      pairs.push_back({e, i});
    }
    sets.push_back(std::move(pairs));
  }
  j["sets"] = std::move(sets);
  return j;
}

}  // namespace ohs

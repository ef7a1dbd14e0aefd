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

// Combinatorial complexity of set systems.
//
// Two kinds of tools live here. The brute-force ones (vc_dimension,
// shallow_cell_count) measure a concrete system and are only meant for
// validation on small inputs. The symbolic ones (SccProfile, eval_phi) are
// a-priori bounds phi(l, k) on the number of distinct traces of size <= k on
// any l-element restriction, divided by l. The rounding algorithms take phi
// as a parameter at sizes far past brute-force range.

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ohs/core.hpp"

namespace ohs {

class LimitExceeded : public std::length_error {
  using std::length_error::length_error;
};

enum class PhiFamily {
  kLinearPower,  // c * k^p
  kVcPoly,       // l^d
  kConstant,     // c
};

struct SccProfile {
  PhiFamily family = PhiFamily::kLinearPower;
  Rational c{8};
  double p = 1.0;
  double d = 2.0;
  // (a, b)-well-behavedness parameters: a in (1, 2), b >= 2.
  double a = 1.5;
  double b = 8.0;

  static SccProfile linear_power(Rational c, double p, double a = 1.5,
                                 double b = 8.0) {
    return {PhiFamily::kLinearPower, c, p, 0.0, a, b};
  }
  static SccProfile vc_poly(double d, double a = 1.5, double b = 8.0) {
    return {PhiFamily::kVcPoly, Rational(1), 0.0, d, a, b};
  }
  static SccProfile constant(Rational c, double a = 1.5, double b = 2.0) {
    return {PhiFamily::kConstant, c, 0.0, 0.0, a, b};
  }

  void validate() const {
    if (c < Rational(0) || p < 0 || d < 0)
      throw std::invalid_argument("phi parameters must be non-negative");
    if (!(a > 1.0 && a < 2.0))
      throw std::invalid_argument("well-behaved exponent a must lie in (1,2)");
    if (!(b >= 2.0)) throw std::invalid_argument("well-behaved b must be >= 2");
  }
};

// phi(l, k). Arguments are real because the level construction evaluates phi
// at fractional sizes such as B / 2^l.
inline double eval_phi(const SccProfile& profile, double l, double k) {
  switch (profile.family) {
    case PhiFamily::kLinearPower:
      return profile.c.to_double() * std::pow(k, profile.p);
    case PhiFamily::kVcPoly:
      return std::pow(l, profile.d);
    case PhiFamily::kConstant:
      return profile.c.to_double();
  }
  return 0.0;
}

struct WellBehavedReport {
  bool ok = true;
  // First violation found, if any.
  double l = 0, k = 0;
  std::string reason;
};

// Checks monotonicity and phi(l, k) <= phi(l/2, k/2)^a on a geometric grid of
// `samples` values per axis with b <= k <= l <= max_arg.
inline WellBehavedReport check_well_behaved_detail(const SccProfile& profile,
                                                   int samples,
                                                   double max_arg = 1 << 20) {
  WellBehavedReport report;
  if (samples < 2) samples = 2;
  std::vector<double> grid;
  double ratio = std::pow(max_arg / profile.b, 1.0 / (samples - 1));
  double v = profile.b;
  for (int i = 0; i < samples; ++i, v *= ratio) grid.push_back(std::round(v));
  grid.back() = max_arg;
  for (std::size_t ki = 0; ki < grid.size(); ++ki) {
    for (std::size_t li = ki; li < grid.size(); ++li) {
      double k = grid[ki], l = grid[li];
      double here = eval_phi(profile, l, k);
      if (li + 1 < grid.size() && eval_phi(profile, grid[li + 1], k) < here) {
        return {false, l, k, "decreasing in l"};
      }
      if (ki + 1 <= li && eval_phi(profile, l, grid[ki + 1]) < here) {
        return {false, l, k, "decreasing in k"};
      }
      double half = eval_phi(profile, l / 2, k / 2);
      if (here > std::pow(half, profile.a) * (1 + 1e-12)) {
        return {false, l, k, "phi(l,k) > phi(l/2,k/2)^a"};
      }
    }
  }
  return report;
}

inline bool check_well_behaved(const SccProfile& profile, int samples,
                               double max_arg = 1 << 20) {
  return check_well_behaved_detail(profile, samples, max_arg).ok;
}

struct VcWitness {
  ElementSet shattered;
  int dimension = 0;
};

inline constexpr std::size_t kVcBruteForceLimit = 16;
inline constexpr std::size_t kShallowCellLimit = 12;

namespace detail {

inline std::vector<std::uint32_t> set_masks(const SetSystem& system) {
  std::vector<std::uint32_t> masks;
  masks.reserve(system.m());
  for (const auto& s : system.sets()) {
    std::uint32_t mask = 0;
    for (auto e : s) mask |= std::uint32_t{1} << e;
    masks.push_back(mask);
  }
  return masks;
}

// Calls f(mask) for every k-subset of {0..n-1} in lexicographic order until f
// returns true. Returns whether f returned true.
template <typename F>
bool for_each_k_subset(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return false;
  if (k == 0) return f(std::uint32_t{0});
  std::uint32_t mask = (std::uint32_t{1} << k) - 1;
  const std::uint32_t limit = std::uint32_t{1} << n;
  while (mask < limit) {
    if (f(mask)) return true;
    // Gosper's hack.
    std::uint32_t c = mask & (0 - mask);
    std::uint32_t r = mask + c;
    mask = (((r ^ mask) >> 2) / c) | r;
  }
  return false;
}

}  // namespace detail

// Largest shattered element subset, by exhaustive search in increasing size
// with early exit (shattering is hereditary). A system without sets shatters
// nothing, not even the empty set; it reports dimension 0.
inline VcWitness vc_dimension(const SetSystem& system,
                              std::size_t limit = kVcBruteForceLimit) {
  if (system.n() > limit || system.n() > 31)
    throw LimitExceeded("vc_dimension: n=" + std::to_string(system.n()) +
                        " exceeds brute-force limit " + std::to_string(limit));
  VcWitness best;
  auto masks = detail::set_masks(system);
  if (masks.empty()) return best;
  std::vector<std::uint8_t> seen(std::size_t{1} << system.n(), 0);
  std::vector<std::uint32_t> touched;
  for (std::size_t k = 1; k <= system.n(); ++k) {
    if (masks.size() < (std::size_t{1} << k)) break;
    std::uint32_t found = 0;
    bool any = detail::for_each_k_subset(system.n(), k, [&](std::uint32_t y) {
      std::size_t distinct = 0;
      touched.clear();
      for (auto s : masks) {
        std::uint32_t trace = s & y;
        if (!seen[trace]) {
          seen[trace] = 1;
          touched.push_back(trace);
          ++distinct;
        }
      }
      for (auto t : touched) seen[t] = 0;
      if (distinct == (std::size_t{1} << k)) {
        found = y;
        return true;
      }
      return false;
    });
    if (!any) break;
    best.dimension = static_cast<int>(k);
    best.shattered.clear();
    for (std::uint32_t e = 0; e < system.n(); ++e)
      if (found & (std::uint32_t{1} << e)) best.shattered.push_back(e);
  }
  return best;
}

// Number of distinct traces S ∩ subset with |S ∩ subset| <= k. The empty
// trace counts once if some set misses `subset` entirely.
inline std::size_t shallow_cell_count(const SetSystem& system,
                                      const ElementSet& subset, std::size_t k) {
  std::vector<bool> in_subset(system.n(), false);
  for (auto e : subset) {
    if (e >= system.n())
      throw std::out_of_range("shallow_cell_count: subset outside universe");
    in_subset[e] = true;
  }
  std::set<ElementSet> traces;
  ElementSet trace;
  for (const auto& s : system.sets()) {
    trace.clear();
    for (auto e : s)
      if (in_subset[e]) trace.push_back(e);
    if (trace.size() <= k) traces.insert(trace);
  }
  return traces.size();
}

// Largest shallow_cell_count(U', k) / |U'| over all nonempty U' of size
// <= max_size. Exhaustive; limited to n <= kShallowCellLimit.
inline double max_shallow_cell_ratio(const SetSystem& system, std::size_t k,
                                     std::size_t max_size) {
  if (system.n() > kShallowCellLimit)
    throw LimitExceeded("max_shallow_cell_ratio: n exceeds limit");
  double best = 0;
  ElementSet subset;
  for (std::size_t size = 1; size <= std::min(max_size, system.n()); ++size) {
    detail::for_each_k_subset(system.n(), size, [&](std::uint32_t mask) {
      subset.clear();
      for (std::uint32_t e = 0; e < system.n(); ++e)
        if (mask & (std::uint32_t{1} << e)) subset.push_back(e);
      double ratio = static_cast<double>(shallow_cell_count(system, subset, k)) /
                     static_cast<double>(size);
      best = std::max(best, ratio);
      return false;
    });
  }
  return best;
}

inline std::string to_string(PhiFamily f) {
  switch (f) {
    case PhiFamily::kLinearPower:
      return "linear-power";
    case PhiFamily::kVcPoly:
      return "vc-poly";
    case PhiFamily::kConstant:
      return "constant";
  }
  return "unknown";
}

inline nlohmann::json to_json(const SccProfile& p) {
  nlohmann::json j;
  j["family"] = to_string(p.family);
  j["c"] = p.c.str();
  j["p"] = p.p;
  j["d"] = p.d;
  j["a"] = p.a;
  j["b"] = p.b;
  return j;
}

inline SccProfile profile_from_json(const nlohmann::json& j) {
  SccProfile p;
  auto family = j.value("family", std::string("linear-power"));
  if (family == "linear-power")
    p.family = PhiFamily::kLinearPower;
  else if (family == "vc-poly")
    p.family = PhiFamily::kVcPoly;
  else if (family == "constant")
    p.family = PhiFamily::kConstant;
  else
    throw std::invalid_argument("unknown phi family '" + family + "'");
  if (j.contains("c")) {
    const auto& c = j.at("c");
    p.c = c.is_string() ? Rational::parse(c.get<std::string>())
                        : Rational(c.get<std::int64_t>());
  }
  p.p = j.value("p", p.p);
  p.d = j.value("d", p.d);
  p.a = j.value("a", p.a);
  p.b = j.value("b", p.b);
  p.validate();
  return p;
}

}  // namespace ohs

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

// Online fractional hitting set.
//
// The solver is the multiplicative-plus-additive covering update: while the
// arriving set S has sum_{e in S} x_e < 1, every e in S is raised to
// x_e * (1 + 1/c_e) + 1/(|S| * c_e), capped at 1.
//
// Fractional values live on the grid 2^-48 and every update rounds up. All
// comparisons (coverage, the 1/n floor, ceil(n * x_e)) are therefore exact
// integer comparisons, and rounding up can only help monotonicity and
// feasibility.
//
// PhaseWrapper adds the weighted-mode phase discipline: during phase i
// (lower bound on OPT in [2^i, 2^{i+1})) elements with c_e >= 2^{i+1} are
// invisible to the update, and entering phase i raises x_e to 1 when
// c_e <= 2^i / n and to at least 1/n when 2^i / n < c_e < 2^{i+1}. Every
// positive x_e is then at least 1/n.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "ohs/bigrational.hpp"
#include "ohs/core.hpp"

namespace ohs {

// A value in [0, 1] stored as num / 2^48.
class Fraction {
 public:
  static constexpr int kBits = 48;
  static constexpr std::uint64_t kOne = std::uint64_t{1} << kBits;

  constexpr Fraction() = default;
  static constexpr Fraction from_raw(std::uint64_t raw) {
    Fraction f;
    f.raw_ = raw > kOne ? kOne : raw;
    return f;
  }
  static constexpr Fraction one() { return from_raw(kOne); }
  // Smallest grid value >= 1/n.
  static constexpr Fraction at_least_inverse(std::uint64_t n) {
    return from_raw((kOne + n - 1) / n);
  }

  constexpr std::uint64_t raw() const { return raw_; }
  constexpr bool is_zero() const { return raw_ == 0; }
  double to_double() const { return static_cast<double>(raw_) * 0x1.0p-48; }
  BigRational exact() const {
    return BigRational(BigInt(raw_), BigInt(kOne));
  }

  // ceil(n * x), exact.
  constexpr std::uint64_t ceil_times(std::uint64_t n) const {
    unsigned __int128 p = static_cast<unsigned __int128>(raw_) * n;
    return static_cast<std::uint64_t>((p + kOne - 1) >> kBits);
  }

  friend constexpr auto operator<=>(Fraction, Fraction) = default;

 private:
  std::uint64_t raw_ = 0;
};

class InfeasibleArrival : public std::runtime_error {
 public:
  InfeasibleArrival()
      : std::runtime_error("every element of the arriving set is excluded") {}
};

struct FractionalState {
  explicit FractionalState(std::size_t n = 0)
      : x(n), ever_positive(n, false) {}

  std::size_t n() const { return x.size(); }

  std::vector<Fraction> x;
  std::vector<bool> ever_positive;
  // Weighted-mode bookkeeping; unused by plain frac_process.
  int phase = 0;
  bool phase_started = false;
  double lower_bound = 0.0;
  std::uint64_t update_rounds = 0;

  void raise(ElementId e, Fraction v) {
    if (v > x[e]) {
      x[e] = v;
      if (!v.is_zero()) ever_positive[e] = true;
    }
  }
};

namespace detail {

using Wide = boost::multiprecision::checked_int256_t;

// ceil( (x * (p+q) * k + q * 2^48) / (p * k) ) for x = raw / 2^48, c = p/q.
inline Fraction multiplicative_step(Fraction x, const Rational& c,
                                    std::size_t k) {
  Wide p = c.num(), q = c.den(), kk = k;
  Wide numer = Wide(x.raw()) * (p + q) * kk + q * Wide(Fraction::kOne);
  Wide denom = p * kk;
  Wide raw = (numer + denom - 1) / denom;
  if (raw >= Wide(Fraction::kOne)) return Fraction::one();
  return Fraction::from_raw(raw.convert_to<std::uint64_t>());
}

inline unsigned __int128 coverage(const FractionalState& state,
                                  const ElementSet& s) {
  unsigned __int128 sum = 0;
  for (auto e : s) sum += state.x[e].raw();
  return sum;
}

}  // namespace detail

inline bool is_covered(const FractionalState& state, const ElementSet& s) {
  return detail::coverage(state, s) >= Fraction::kOne;
}

// One arrival of the plain online solver. Returns the number of update
// rounds taken (0 if `s` was already covered).
inline std::uint64_t frac_process(FractionalState& state, const ElementSet& s,
                                  const std::vector<Rational>& costs) {
  if (s.empty()) throw InfeasibleArrival();
  std::uint64_t rounds = 0;
  while (!is_covered(state, s)) {
    ++rounds;
    for (auto e : s) {
      if (costs[e] == Rational(0)) {
        state.raise(e, Fraction::one());
      } else {
        state.raise(e, detail::multiplicative_step(state.x[e], costs[e],
                                                   s.size()));
      }
    }
  }
  state.update_rounds += rounds;
  return rounds;
}

// Exact objective sum_e c_e x_e.
inline BigRational frac_cost(const FractionalState& state,
                             const std::vector<Rational>& costs) {
  BigRational total = 0;
  for (std::size_t e = 0; e < state.n(); ++e)
    if (!state.x[e].is_zero()) total += to_big(costs[e]) * state.x[e].exact();
  return total;
}

// Largest i >= 0 with 2^i <= max(1, value).
inline int phase_of(const Rational& value) {
  int i = 0;
  while (i < 62 && Rational(std::int64_t{1} << (i + 1)) <= value) ++i;
  return i;
}

// Weighted-mode wrapper around frac_process.
class PhaseWrapper {
 public:
  PhaseWrapper(const std::vector<Rational>& costs) : costs_(&costs) {}

  // True iff element e is excluded from updates in `phase`: c_e >= 2^{i+1}.
  bool excluded(ElementId e, int phase) const {
    return (*costs_)[e] >= power(phase + 1);
  }

  // Enters `phase` (which must not be lower than the current one) and applies
  // the phase-start raises.
  void enter_phase(FractionalState& state, int phase) const {
    if (state.phase_started && phase < state.phase)
      throw std::logic_error("phases only advance");
    const std::size_t n = state.n();
    const Rational start = power(phase);
    const Rational next = power(phase + 1);
    const Fraction floor_value = Fraction::at_least_inverse(n);
    for (std::size_t e = 0; e < n; ++e) {
      const Rational& c = (*costs_)[e];
      if (c * Rational(static_cast<std::int64_t>(n)) <= start)
        state.raise(static_cast<ElementId>(e), Fraction::one());
      else if (c < next)
        state.raise(static_cast<ElementId>(e), floor_value);
    }
    state.phase = phase;
    state.phase_started = true;
  }

  // Serves arrival `s` given the phase implied by the current OPT lower
  // bound. Advances the phase further while `s` has no eligible element.
  // Returns the eligible part of `s` that was served.
  ElementSet phase_wrap(FractionalState& state, const ElementSet& s,
                        int lower_bound_phase) const {
    if (s.empty()) throw InfeasibleArrival();
    int target = std::max(state.phase_started ? state.phase : 0,
                          lower_bound_phase);
    if (!state.phase_started || target > state.phase)
      enter_phase(state, target);
    for (;;) {
      ElementSet eligible;
      for (auto e : s)
        if (!excluded(e, state.phase)) eligible.push_back(e);
      if (!eligible.empty()) {
        frac_process(state, eligible, *costs_);
        return eligible;
      }
      enter_phase(state, state.phase + 1);
    }
  }

  static Rational power(int i) {
    if (i < 0 || i > 62) throw std::overflow_error("phase out of range");
    return Rational(std::int64_t{1} << i);
  }

 private:
  const std::vector<Rational>* costs_;
};

inline nlohmann::json to_json(const FractionalState& state) {
  nlohmann::json j;
  auto xs = nlohmann::json::array();
  for (auto v : state.x) xs.push_back(big_str(v.exact()));
  j["x"] = std::move(xs);
  j["phase"] = state.phase;
  j["lower_bound"] = state.lower_bound;
  j["update_rounds"] = state.update_rounds;
  return j;
}

}  // namespace ohs

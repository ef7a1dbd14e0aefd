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

// Online epsilon-net rounding for the unweighted case.
//
// The net H is built over the clone system. A clone is sampled into H with
// probability min(1, alpha / B) the first time it appears (after which it is
// stale and never sampled again); alpha depends on the current doubling
// phase a, with 2^a <= N' < 2^{a+1} and eps = B / 2^{a+1}. If an arriving
// clone set is still unhit, each of its clones joins H with probability
// min(1, beta / |T|), repeated until it is hit.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "ohs/complexity.hpp"
#include "ohs/random.hpp"
#include "ohs/uniformize.hpp"

namespace ohs {

struct NetFinderConfig {
  int d = 2;  // VC dimension of the system
  SccProfile profile = SccProfile::linear_power(Rational(8), 1);
  double c_alpha = 1.0;
  double c_d = 2.0;
  double c_beta = 2.0;
  std::uint64_t max_alteration_rounds = 1'000'000;
  bool trace = false;
};

class AlterationLimit : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// c_alpha * (d + ln(d * phi(ceil(c_d d / eps), ceil(c_d d)))). The logarithm
// is clamped at 0 for profiles with d * phi < 1.
inline double alpha_of(double eps, int d, const SccProfile& profile,
                       double c_alpha = 1.0, double c_d = 2.0) {
  if (!(eps > 0 && eps <= 1)) throw std::domain_error("eps must be in (0, 1]");
  double l = std::ceil(c_d * d / eps);
  double k = std::ceil(c_d * d);
  double arg = d * eval_phi(profile, l, k);
  return c_alpha * (d + std::max(0.0, std::log(arg)));
}

inline double beta_of(int d, double c_beta = 2.0) { return c_beta * d; }

class NetFinderState {
 public:
  NetFinderState(std::size_t n, NetFinderConfig config, std::uint64_t seed)
      : config_(std::move(config)), n_(n), rng_(seed),
        sampled_top_(n, -1), in_h_(n * (n + 1), 0), solution_(n, 0) {}

  const NetFinderConfig& config() const { return config_; }
  int phase() const { return a_; }
  Rational eps() const { return eps_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_of(config_.d, config_.c_beta); }
  std::size_t net_size() const { return h_size_; }
  bool in_net(CloneId c) const { return in_h_.at(c) != 0; }
  bool stale(CloneId c) const {
    auto [e, i] = decode_clone(n_, c);
    return static_cast<std::int64_t>(i) <= sampled_top_[e];
  }
  std::uint64_t alteration_rounds() const { return alteration_rounds_; }
  const std::vector<nlohmann::json>& trace() const { return trace_; }

  // Elements with a clone in H, i.e. proj(H).
  ElementSet solution() const {
    ElementSet out;
    for (std::size_t e = 0; e < n_; ++e)
      if (solution_[e]) out.push_back(static_cast<ElementId>(e));
    return out;
  }
  bool picked(ElementId e) const { return solution_.at(e) != 0; }

  // Serves clone set t, which must be the latest set of `cs`.
  void process(const CloneSystem& cs, const CloneSet& t) {
    const std::size_t b = cs.B();
    if (t.size() < b) throw std::invalid_argument("clone set smaller than B");
    update_phase(cs);
    const double p_base = std::min(1.0, alpha_ / static_cast<double>(b));
    std::size_t base_added = 0;
    std::size_t fresh = 0;
    for (auto c : t) {
      auto [e, i] = decode_clone(n_, c);
      if (static_cast<std::int64_t>(i) <= sampled_top_[e]) continue;
      ++fresh;
      if (rng_.bernoulli(p_base) && add(c)) ++base_added;
    }
    for (auto e : proj(n_, t)) {
      auto k = static_cast<std::int64_t>(cs.top(e));
      sampled_top_[e] = std::max(sampled_top_[e], k);
    }
    const double p_alt =
        std::min(1.0, beta() / static_cast<double>(t.size()));
    std::uint64_t rounds = 0;
    while (!hit(t)) {
      if (++rounds > config_.max_alteration_rounds)
        throw AlterationLimit("alteration loop exceeded its round cap");
      for (auto c : t)
        if (rng_.bernoulli(p_alt)) add(c);
    }
    alteration_rounds_ += rounds;
    if (config_.trace) {
      trace_.push_back({{"t", cs.m() - 1},
                        {"phase", a_},
                        {"eps", eps_.str()},
                        {"alpha", alpha_},
                        {"fresh", fresh},
                        {"base_added", base_added},
                        {"alteration_rounds", rounds}});
    }
  }

 private:
  void update_phase(const CloneSystem& cs) {
    std::size_t np = cs.n_prime();
    int a = 0;
    while ((std::size_t{1} << (a + 1)) <= np) ++a;
    if (a != a_ || alpha_ == 0) {
      a_ = a;
      eps_ = Rational(static_cast<std::int64_t>(cs.B())) /
             Rational(std::int64_t{1} << (a + 1));
      alpha_ = alpha_of(eps_.to_double(), config_.d, config_.profile,
                        config_.c_alpha, config_.c_d);
    }
  }

  bool hit(const CloneSet& t) const {
    return std::any_of(t.begin(), t.end(),
                       [&](CloneId c) { return in_h_[c] != 0; });
  }

  bool add(CloneId c) {
    if (in_h_[c]) return false;
    in_h_[c] = 1;
    ++h_size_;
    solution_[decode_clone(n_, c).element] = 1;
    return true;
  }

  NetFinderConfig config_;
  std::size_t n_;
  Rng rng_;
  std::vector<std::int64_t> sampled_top_;
  std::vector<char> in_h_;
  std::vector<char> solution_;
  std::size_t h_size_ = 0;
  int a_ = -1;
  Rational eps_{1};
  double alpha_ = 0;
  std::uint64_t alteration_rounds_ = 0;
  std::vector<nlohmann::json> trace_;
};

inline void nf_process(NetFinderState& state, const CloneSystem& cs,
                       const CloneSet& t) {
  state.process(cs, t);
}

inline ElementSet nf_solution(const NetFinderState& state) {
  return state.solution();
}

}  // namespace ohs

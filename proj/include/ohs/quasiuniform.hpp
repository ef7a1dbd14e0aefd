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

// Quasi-uniform sampling rounding for the weighted case.
//
// Clones are assigned levels up front: V_0 is the whole clone universe and
// V_{l+1} is a uniformly random subset of V_l of size
// floor(|V_l| * (1/2 + h(|V_l|, B_l))), for l < L*. Every arriving clone set
// T gets, at each level l where |T cap V_l| >= B_l, a backup clone chosen by
// greedy online load balancing; the backup enters Q_l when T is dangerous
// at the next level, |T cap V_{l+1}| < B_{l+1}. The hitting set is
//   H = Q_0 u ... u Q_{L*-1} u (V_{L*} cap V').
// With N_l = c1 N / 2^l and B_l = B / 2^l, L* is the largest l in
// [0, log2(B / c1)] with h(N_l, B_l) <= 1/2. When L* = 0 or
// h(N_0, B_0) > 1/2 the structure is degenerate and H = V'.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "ohs/complexity.hpp"
#include "ohs/random.hpp"
#include "ohs/uniformize.hpp"

namespace ohs {

// sqrt(8 ln(k * ceil(log2 l) * phi(l, k)) / k), or 0 when the logarithm's
// argument is below 1.
inline double h_value(const SccProfile& profile, double l, double k) {
  if (l < 2 || k < 1) throw std::domain_error("h_value needs l >= 2, k >= 1");
  double arg = k * std::ceil(std::log2(l)) * eval_phi(profile, l, k);
  if (arg < 1) return 0.0;
  return std::sqrt(8.0 * std::log(arg) / k);
}

struct QuasiConfig {
  SccProfile profile = SccProfile::linear_power(Rational(8), 1);
  std::int64_t c1 = 64;
  bool trace = false;
};

class LevelStructure {
 public:
  LevelStructure() = default;

  // Levels over clone ids 0..N-1.
  static LevelStructure build(std::size_t N, std::size_t B,
                              const SccProfile& profile, std::int64_t c1,
                              Rng& rng) {
    LevelStructure ls;
    ls.N_ = N;
    ls.B_ = B;
    ls.c1_ = c1;
    ls.profile_ = profile;
    ls.level_.assign(N, 0);
    ls.sizes_ = {N};
    // Level range [0, floor(log2(B / c1))].
    int top = -1;
    while (c1 > 0 && static_cast<std::size_t>(c1) << (top + 1) <= B) ++top;
    for (int l = 0; l <= top; ++l) ls.h_.push_back(h_value(profile, ls.N_l(l), ls.B_l(l)));
    int lstar = -1;
    for (int l = 0; l <= top; ++l)
      if (ls.h_[static_cast<std::size_t>(l)] <= 0.5) lstar = l;
    ls.degenerate_ = lstar <= 0 || ls.h_[0] > 0.5;
    if (ls.degenerate_) {
      ls.lstar_ = 0;
      ls.warnings_ = ls.validate_constants();
      return ls;
    }
    ls.lstar_ = lstar;
    std::vector<CloneId> perm(N);
    std::iota(perm.begin(), perm.end(), CloneId{0});
    rng.shuffle(std::span<CloneId>(perm));
    for (int l = 0; l < lstar; ++l) {
      std::size_t cur = ls.sizes_.back();
      double bias = cur >= 2 ? h_value(profile, static_cast<double>(cur), ls.B_l(l)) : 0.0;
      auto next = static_cast<std::size_t>(
          std::round(static_cast<double>(cur) * (0.5 + bias)));
      next = std::clamp<std::size_t>(next, 1, cur);
      ls.sizes_.push_back(next);
      for (std::size_t r = 0; r < next; ++r)
        ls.level_[perm[r]] = static_cast<std::uint8_t>(l + 1);
    }
    ls.warnings_ = ls.validate_constants();
    return ls;
  }

  std::size_t N() const { return N_; }
  std::size_t B() const { return B_; }
  std::int64_t c1() const { return c1_; }
  int lstar() const { return lstar_; }
  bool degenerate() const { return degenerate_; }
  const SccProfile& profile() const { return profile_; }
  // h(N_l, B_l) for every l in the admissible range.
  const std::vector<double>& h_symbolic() const { return h_; }
  // |V_l| for l = 0..L*.
  const std::vector<std::size_t>& sizes() const { return sizes_; }
  int level(CloneId c) const { return level_.at(c); }
  bool in_level(CloneId c, int l) const { return level_.at(c) >= l; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  double N_l(int l) const {
    return static_cast<double>(c1_) * static_cast<double>(N_) / std::ldexp(1.0, l);
  }
  double B_l(int l) const { return static_cast<double>(B_) / std::ldexp(1.0, l); }
  // count >= B / 2^l, exactly.
  bool at_least_B_l(std::size_t count, int l) const {
    return (static_cast<unsigned __int128>(count) << l) >= B_;
  }

  // h(N_{l+1}, B_{l+1}) >= sqrt(2/a) h(N_l, B_l) for all l < L*.
  bool bias_growth_holds() const {
    const double f = std::sqrt(2.0 / profile_.a);
    for (int l = 0; l + 1 <= lstar_ && !degenerate_; ++l)
      if (h_[static_cast<std::size_t>(l + 1)] <
          f * h_[static_cast<std::size_t>(l)] * (1 - 1e-12))
        return false;
    return true;
  }

 private:
  // Inequalities the level analysis relies on; violations are reported,
  // not fatal.
  std::vector<std::string> validate_constants() const {
    std::vector<std::string> w;
    const double a = profile_.a;
    const double c1 = static_cast<double>(c1_);
    if (!(c1 > profile_.b))
      w.push_back("c1 = " + std::to_string(c1_) + " is not above b");
    if (!(c1 <= std::pow(c1 / 2, a)))
      w.push_back("c1 > (c1/2)^a");
    for (int l = 0; l < lstar_; ++l) {
      double lg = std::ceil(std::log2(N_l(l)));
      if (!(lg <= std::pow(lg / 2, a)))
        w.push_back("ceil(log N_l) > (ceil(log N_l)/2)^a at level " + std::to_string(l));
      double lhs = eval_phi(profile_, N_l(l), B_l(l));
      double rhs = std::pow(eval_phi(profile_, N_l(l + 1), B_l(l + 1)), a);
      if (lhs > rhs * (1 + 1e-12))
        w.push_back("phi not well-behaved between levels " + std::to_string(l) +
                    " and " + std::to_string(l + 1));
    }
    if (static_cast<std::int64_t>(B_) < c1_)
      w.push_back("B < c1: no admissible level");
    return w;
  }

  std::size_t N_ = 0;
  std::size_t B_ = 0;
  std::int64_t c1_ = 0;
  SccProfile profile_;
  int lstar_ = 0;
  bool degenerate_ = true;
  std::vector<double> h_;
  std::vector<std::size_t> sizes_;
  std::vector<std::uint8_t> level_;
  std::vector<std::string> warnings_;
};

// Scale i with count in [2^i B_l, 2^{i+1} B_l), i.e. count * 2^l in
// [2^i B, 2^{i+1} B).
inline int scale_of(std::size_t count, int l, std::size_t B) {
  unsigned __int128 v = static_cast<unsigned __int128>(count) << l;
  if (v < B) throw std::invalid_argument("set below B_l has no scale");
  int i = 0;
  while ((static_cast<unsigned __int128>(B) << (i + 1)) <= v) ++i;
  return i;
}

// Greedy online load balancing, one instance per (level, scale).
class BackupState {
 public:
  explicit BackupState(int levels = 0) : loads_(static_cast<std::size_t>(std::max(levels, 0))) {}

  // Assigns the set whose members at level l are `members` (sorted, nonempty,
  // count >= B_l) to its least-loaded member at scale `scale`; ties go to the
  // smallest id.
  CloneId assign(const std::vector<CloneId>& members, int l, int scale) {
    if (members.empty()) throw std::invalid_argument("backup for empty set");
    auto& table = loads_.at(static_cast<std::size_t>(l));
    CloneId best = members.front();
    std::uint32_t best_load = load_of(table, best, scale);
    for (auto c : members) {
      std::uint32_t ld = load_of(table, c, scale);
      if (ld < best_load) {
        best = c;
        best_load = ld;
      }
    }
    std::uint32_t now = ++table[key(best, scale)];
    auto& mx = max_load_[{l, scale}];
    mx = std::max(mx, now);
    return best;
  }

  std::uint32_t load(int l, CloneId c, int scale) const {
    return load_of(loads_.at(static_cast<std::size_t>(l)), c, scale);
  }
  // Largest load at (level, scale), 0 if none.
  std::uint32_t max_load(int l, int scale) const {
    auto it = max_load_.find({l, scale});
    return it == max_load_.end() ? 0 : it->second;
  }
  const std::map<std::pair<int, int>, std::uint32_t>& max_loads() const {
    return max_load_;
  }

 private:
  using Table = std::unordered_map<std::uint64_t, std::uint32_t>;
  static std::uint64_t key(CloneId c, int scale) {
    return (c << 6) | static_cast<std::uint64_t>(scale);
  }
  static std::uint32_t load_of(const Table& t, CloneId c, int scale) {
    auto it = t.find(key(c, scale));
    return it == t.end() ? 0 : it->second;
  }

  std::vector<Table> loads_;
  std::map<std::pair<int, int>, std::uint32_t> max_load_;
};

// Lambda_l * phi(|V_l|, 2^{i+1} B_l) * 2^{i+1} B_l with
// Lambda_l = max(1, ceil(log2 |V_l|)).
inline double load_bound(const LevelStructure& ls, int l, int scale) {
  double vl = static_cast<double>(ls.sizes().at(static_cast<std::size_t>(l)));
  double lambda = std::max(1.0, std::ceil(std::log2(vl)));
  double k = std::ldexp(ls.B_l(l), scale + 1);
  return lambda * eval_phi(ls.profile(), vl, k) * k;
}

// Backup for clone set t at level l: the members in V_l are balanced at the
// scale given by their count, which must be at least B_l.
inline CloneId assign_backup(BackupState& state, const LevelStructure& ls,
                             const CloneSet& t, int l) {
  std::vector<CloneId> members;
  for (auto c : t)
    if (ls.in_level(c, l)) members.push_back(c);
  if (!ls.at_least_B_l(members.size(), l))
    throw std::invalid_argument("set is below B_l at this level");
  return state.assign(members, l, scale_of(members.size(), l, ls.B()));
}

class QuasiState {
 public:
  // Clone c belongs to element c / clones_per_element; the pipeline uses
  // n + 1 clones per element.
  QuasiState(std::size_t N, std::size_t B, std::size_t clones_per_element,
             QuasiConfig config, std::uint64_t seed)
      : config_(std::move(config)), per_element_(clones_per_element),
        rng_(seed) {
    levels_ = LevelStructure::build(N, B, config_.profile, config_.c1, rng_);
    backup_ = BackupState(levels_.lstar());
    q_.assign(static_cast<std::size_t>(levels_.lstar()), {});
    in_h_.assign(N, 0);
    picked_.assign(N / per_element_ + (N % per_element_ ? 1 : 0), 0);
  }

  // Pipeline form over a universe of n elements.
  QuasiState(std::size_t n, QuasiConfig config, std::uint64_t seed)
      : QuasiState(n * (n + 1), n, n + 1, std::move(config), seed) {}

  const LevelStructure& levels() const { return levels_; }
  const BackupState& backup() const { return backup_; }
  const std::vector<std::vector<CloneId>>& q() const { return q_; }
  bool in_h(CloneId c) const { return in_h_.at(c) != 0; }
  std::size_t h_size() const { return h_size_; }
  const std::vector<nlohmann::json>& trace() const { return trace_; }

  ElementSet solution() const {
    ElementSet out;
    for (std::size_t e = 0; e < picked_.size(); ++e)
      if (picked_[e]) out.push_back(static_cast<ElementId>(e));
    return out;
  }

  // Serves clone set t (sorted). Returns true iff t is hit by H afterwards.
  bool process(const CloneSet& t) {
    if (t.size() < levels_.B())
      throw std::invalid_argument("clone set smaller than B");
    const int lstar = levels_.lstar();
    nlohmann::json rec;
    if (config_.trace) rec["t"] = arrivals_;
    ++arrivals_;
    if (levels_.degenerate()) {
      for (auto c : t) add(c);
      if (config_.trace) {
        rec["degenerate"] = true;
        trace_.push_back(std::move(rec));
      }
      return true;
    }
    std::vector<std::size_t> count(static_cast<std::size_t>(lstar) + 1, 0);
    for (auto c : t)
      for (int l = 0; l <= levels_.level(c); ++l) ++count[static_cast<std::size_t>(l)];
    auto counts_json = nlohmann::json::array();
    auto backups_json = nlohmann::json::array();
    for (int l = 0; l < lstar; ++l) {
      auto cl = count[static_cast<std::size_t>(l)];
      if (!levels_.at_least_B_l(cl, l)) continue;
      std::vector<CloneId> members;
      members.reserve(cl);
      for (auto c : t)
        if (levels_.in_level(c, l)) members.push_back(c);
      int scale = scale_of(cl, l, levels_.B());
      CloneId g = backup_.assign(members, l, scale);
      bool dangerous =
          !levels_.at_least_B_l(count[static_cast<std::size_t>(l + 1)], l + 1);
      if (dangerous) {
        if (add(g)) q_[static_cast<std::size_t>(l)].push_back(g);
      }
      if (config_.trace)
        backups_json.push_back({{"level", l}, {"scale", scale}, {"backup", g},
                                {"dangerous", dangerous}});
    }
    for (auto c : t)
      if (levels_.in_level(c, lstar)) add(c);
    if (config_.trace) {
      for (auto v : count) counts_json.push_back(v);
      rec["counts"] = std::move(counts_json);
      rec["backups"] = std::move(backups_json);
      trace_.push_back(std::move(rec));
    }
    return std::any_of(t.begin(), t.end(),
                       [&](CloneId c) { return in_h_[c] != 0; });
  }

  // Number of (level, scale) load counters exceeding their bound.
  std::size_t load_bound_violations() const {
    std::size_t bad = 0;
    for (const auto& [ls, mx] : backup_.max_loads())
      if (static_cast<double>(mx) > load_bound(levels_, ls.first, ls.second))
        ++bad;
    return bad;
  }

 private:
  bool add(CloneId c) {
    if (in_h_[c]) return false;
    in_h_[c] = 1;
    ++h_size_;
    picked_[c / per_element_] = 1;
    return true;
  }

  QuasiConfig config_;
  std::size_t per_element_;
  Rng rng_;
  LevelStructure levels_;
  BackupState backup_;
  std::vector<std::vector<CloneId>> q_;
  std::vector<char> in_h_;
  std::vector<char> picked_;
  std::size_t h_size_ = 0;
  std::size_t arrivals_ = 0;
  std::vector<nlohmann::json> trace_;
};

inline bool qu_process(QuasiState& state, const CloneSet& t) {
  return state.process(t);
}

inline ElementSet qu_solution(const QuasiState& state) {
  return state.solution();
}

}  // namespace ohs

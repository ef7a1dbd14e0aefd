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

// Geometric hitting-set instances.
//
// Points and ranges have exact rational coordinates; containment is closed
// and evaluated in exact arithmetic. Coordinates come from a bounded integer
// grid jittered by multiples of 1/8, which keeps every product well inside
// 64 bits.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ohs/core.hpp"
#include "ohs/random.hpp"

namespace ohs {

class DegenerateRange : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Point = std::vector<Rational>;

enum class Family { kIntervals, kDisks, kSquares, kLines, kHalfspaces3d };

enum class RangeKind {
  kInterval,   // lo <= x <= hi
  kDisk,       // (x-cx)^2 + (y-cy)^2 <= r^2
  kSquare,     // |x-cx| <= side/2 and |y-cy| <= side/2
  kSlab,       // |a*x + b*y - c| <= w
  kHalfspace,  // a*x + b*y + c*z >= d
};

struct Range {
  RangeKind kind;
  std::vector<Rational> params;
};

inline Rational abs(const Rational& r) { return r < Rational(0) ? -r : r; }

inline bool contains(const Range& range, const Point& p) {
  const auto& q = range.params;
  switch (range.kind) {
    case RangeKind::kInterval:
      return q[0] <= p[0] && p[0] <= q[1];
    case RangeKind::kDisk: {
      Rational dx = p[0] - q[0], dy = p[1] - q[1];
      return dx * dx + dy * dy <= q[2] * q[2];
    }
    case RangeKind::kSquare: {
      Rational half = q[2] / Rational(2);
      return abs(p[0] - q[0]) <= half && abs(p[1] - q[1]) <= half;
    }
    case RangeKind::kSlab:
      return abs(q[0] * p[0] + q[1] * p[1] - q[2]) <= q[3];
    case RangeKind::kHalfspace:
      return q[0] * p[0] + q[1] * p[1] + q[2] * p[2] >= q[3];
  }
  return false;
}

enum class CostModel { kUnit, kUniform, kPowerLaw };

struct GeometricInstance {
  Family family = Family::kIntervals;
  std::vector<Point> points;
  std::vector<Range> ranges;
  SetSystem system;
};

inline ElementSet range_members(const Range& range,
                                const std::vector<Point>& points) {
  ElementSet members;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (contains(range, points[i])) members.push_back(static_cast<ElementId>(i));
  return members;
}

// Builds the set system of `ranges` over `points`. Throws DegenerateRange if
// a range contains no point.
inline SetSystem build_system(const std::vector<Point>& points,
                              const std::vector<Range>& ranges,
                              std::vector<Rational> costs, bool weighted) {
  std::vector<ElementSet> sets;
  sets.reserve(ranges.size());
  for (const auto& r : ranges) {
    auto members = range_members(r, points);
    if (members.empty()) throw DegenerateRange("range contains no point");
    sets.push_back(std::move(members));
  }
  return SetSystem(std::move(costs), std::move(sets), weighted);
}

inline std::vector<Rational> draw_costs(std::size_t n, CostModel model,
                                        Rng& rng) {
  std::vector<Rational> costs(n, Rational(1));
  for (auto& c : costs) {
    switch (model) {
      case CostModel::kUnit:
        break;
      case CostModel::kUniform:
        // Quarter steps in [1, 100].
        c = Rational(rng.between(4, 400), 4);
        break;
      case CostModel::kPowerLaw: {
        // Pareto with tail index 3/2, truncated at 100, rounded up to 1/4.
        double u = 1.0 - rng.uniform01();
        double v = std::min(100.0, std::pow(u, -2.0 / 3.0));
        c = Rational(static_cast<std::int64_t>(std::ceil(v * 4.0)), 4);
        break;
      }
    }
  }
  return costs;
}

namespace detail {

inline constexpr std::int64_t kJitter = 8;

// Grid value plus a random multiple of 1/8 in [0, 1).
inline Rational jittered(std::int64_t cell, Rng& rng) {
  return Rational(cell * kJitter + rng.between(0, kJitter - 1), kJitter);
}

inline Rational uniform_coord(std::int64_t lo, std::int64_t hi, Rng& rng) {
  return Rational(rng.between(lo * kJitter, hi * kJitter), kJitter);
}

// Log-uniform length in [lo, hi], rounded to 1/8.
inline Rational log_uniform(double lo, double hi, Rng& rng) {
  double v = lo * std::pow(hi / lo, rng.uniform01());
  auto eighths = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::llround(v * kJitter)));
  return Rational(eighths, kJitter);
}

// `count` distinct cells from [0, range), in increasing order.
inline std::vector<std::int64_t> distinct_cells(std::size_t count,
                                                std::int64_t range, Rng& rng) {
  std::vector<std::int64_t> cells(static_cast<std::size_t>(range));
  for (std::int64_t i = 0; i < range; ++i) cells[i] = i;
  for (std::size_t i = 0; i < count; ++i) {
    auto j = i + rng.below(cells.size() - i);
    std::swap(cells[i], cells[j]);
  }
  cells.resize(count);
  std::sort(cells.begin(), cells.end());
  return cells;
}

inline constexpr int kMaxResample = 10000;

template <typename Draw>
std::vector<Range> draw_ranges(std::size_t m, const std::vector<Point>& points,
                               Rng& rng, Draw&& draw) {
  std::vector<Range> ranges;
  ranges.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    int attempt = 0;
    for (;;) {
      Range r = draw(rng);
      bool hit = false;
      for (const auto& p : points)
        if (contains(r, p)) {
          hit = true;
          break;
        }
      if (hit) {
        ranges.push_back(std::move(r));
        break;
      }
      if (++attempt >= kMaxResample)
        throw DegenerateRange("could not draw a nonempty range");
    }
  }
  return ranges;
}

inline void check_sizes(std::size_t n, std::size_t m) {
  if (n < 1 || m < 1) throw std::invalid_argument("generator needs n, m >= 1");
}

inline std::int64_t grid_side(std::size_t n, int dims) {
  return 4 * static_cast<std::int64_t>(
                 std::ceil(std::pow(static_cast<double>(n), 1.0 / dims)));
}

}  // namespace detail

// n points at distinct coordinates in [0, 4n), sorted so that element ids
// follow the coordinate order; m intervals with log-uniform lengths.
inline GeometricInstance gen_intervals(std::size_t n, std::size_t m,
                                       std::uint64_t seed,
                                       CostModel costs = CostModel::kUnit) {
  detail::check_sizes(n, m);
  Rng rng(seed);
  GeometricInstance inst;
  inst.family = Family::kIntervals;
  const auto span = static_cast<std::int64_t>(4 * n);
  for (auto cell : detail::distinct_cells(n, span, rng))
    inst.points.push_back({detail::jittered(cell, rng)});
  inst.ranges = detail::draw_ranges(m, inst.points, rng, [&](Rng& r) {
    Rational len = detail::log_uniform(1.0, static_cast<double>(span), r);
    Rational lo = detail::uniform_coord(-len.ceil(), span, r);
    return Range{RangeKind::kInterval, {lo, lo + len}};
  });
  inst.system = build_system(inst.points, inst.ranges,
                             draw_costs(n, costs, rng),
                             costs != CostModel::kUnit);
  return inst;
}

namespace detail {

inline std::vector<Point> grid_points(std::size_t n, int dims, Rng& rng) {
  std::int64_t side = grid_side(n, dims);
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Point p;
    for (int d = 0; d < dims; ++d)
      p.push_back(jittered(rng.between(0, side - 1), rng));
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace detail

inline GeometricInstance gen_disks(std::size_t n, std::size_t m,
                                   std::uint64_t seed,
                                   CostModel costs = CostModel::kUnit) {
  detail::check_sizes(n, m);
  Rng rng(seed);
  GeometricInstance inst;
  inst.family = Family::kDisks;
  inst.points = detail::grid_points(n, 2, rng);
  const auto side = detail::grid_side(n, 2);
  inst.ranges = detail::draw_ranges(m, inst.points, rng, [&](Rng& r) {
    Rational cx = detail::uniform_coord(0, side, r);
    Rational cy = detail::uniform_coord(0, side, r);
    Rational rad = detail::log_uniform(0.5, static_cast<double>(side), r);
    return Range{RangeKind::kDisk, {cx, cy, rad}};
  });
  inst.system = build_system(inst.points, inst.ranges,
                             draw_costs(n, costs, rng),
                             costs != CostModel::kUnit);
  return inst;
}

inline GeometricInstance gen_squares(std::size_t n, std::size_t m,
                                     std::uint64_t seed,
                                     CostModel costs = CostModel::kUnit) {
  detail::check_sizes(n, m);
  Rng rng(seed);
  GeometricInstance inst;
  inst.family = Family::kSquares;
  inst.points = detail::grid_points(n, 2, rng);
  const auto side = detail::grid_side(n, 2);
  inst.ranges = detail::draw_ranges(m, inst.points, rng, [&](Rng& r) {
    Rational cx = detail::uniform_coord(0, side, r);
    Rational cy = detail::uniform_coord(0, side, r);
    Rational len = detail::log_uniform(1.0, static_cast<double>(2 * side), r);
    return Range{RangeKind::kSquare, {cx, cy, len}};
  });
  inst.system = build_system(inst.points, inst.ranges,
                             draw_costs(n, costs, rng),
                             costs != CostModel::kUnit);
  return inst;
}

// Lines as slabs |a*x + b*y - c| <= w. Each slab is anchored at a random
// point, so it is never empty.
inline GeometricInstance gen_lines(std::size_t n, std::size_t m,
                                   std::uint64_t seed,
                                   CostModel costs = CostModel::kUnit,
                                   Rational width = Rational(1, 2)) {
  detail::check_sizes(n, m);
  Rng rng(seed);
  GeometricInstance inst;
  inst.family = Family::kLines;
  inst.points = detail::grid_points(n, 2, rng);
  inst.ranges = detail::draw_ranges(m, inst.points, rng, [&](Rng& r) {
    std::int64_t a = 0, b = 0;
    while (a == 0 && b == 0) {
      a = r.between(-4, 4);
      b = r.between(-4, 4);
    }
    const Point& anchor = inst.points[r.below(inst.points.size())];
    Rational c = Rational(a) * anchor[0] + Rational(b) * anchor[1];
    return Range{RangeKind::kSlab, {Rational(a), Rational(b), c, width}};
  });
  inst.system = build_system(inst.points, inst.ranges,
                             draw_costs(n, costs, rng),
                             costs != CostModel::kUnit);
  return inst;
}

// Half-spaces a.p >= d whose boundary passes through a random point.
inline GeometricInstance gen_halfspaces3d(std::size_t n, std::size_t m,
                                          std::uint64_t seed,
                                          CostModel costs = CostModel::kUnit) {
  detail::check_sizes(n, m);
  Rng rng(seed);
  GeometricInstance inst;
  inst.family = Family::kHalfspaces3d;
  inst.points = detail::grid_points(n, 3, rng);
  inst.ranges = detail::draw_ranges(m, inst.points, rng, [&](Rng& r) {
    std::int64_t a = 0, b = 0, c = 0;
    while (a == 0 && b == 0 && c == 0) {
      a = r.between(-4, 4);
      b = r.between(-4, 4);
      c = r.between(-4, 4);
    }
    const Point& anchor = inst.points[r.below(inst.points.size())];
    Rational d = Rational(a) * anchor[0] + Rational(b) * anchor[1] +
                 Rational(c) * anchor[2];
    return Range{RangeKind::kHalfspace, {Rational(a), Rational(b),
                                         Rational(c), d}};
  });
  inst.system = build_system(inst.points, inst.ranges,
                             draw_costs(n, costs, rng),
                             costs != CostModel::kUnit);
  return inst;
}

inline GeometricInstance generate(Family family, std::size_t n, std::size_t m,
                                  std::uint64_t seed, CostModel costs) {
  switch (family) {
    case Family::kIntervals:
      return gen_intervals(n, m, seed, costs);
    case Family::kDisks:
      return gen_disks(n, m, seed, costs);
    case Family::kSquares:
      return gen_squares(n, m, seed, costs);
    case Family::kLines:
      return gen_lines(n, m, seed, costs);
    case Family::kHalfspaces3d:
      return gen_halfspaces3d(n, m, seed, costs);
  }
  throw std::invalid_argument("unknown family");
}

// VC dimension of each family's range space.
inline int family_vc_dimension(Family family) {
  switch (family) {
    case Family::kIntervals:
    case Family::kLines:
      return 2;
    case Family::kDisks:
    case Family::kSquares:
      return 3;
    case Family::kHalfspaces3d:
      return 4;
  }
  return 0;
}

// The classic dyadic adversary for online interval hitting. Points are
// 0, 1, ..., 2^depth - 1. The first interval covers all of them; every later
// interval is the half of the previous one that the algorithm has not hit.
// All intervals are nested, so a single point in the last one is optimal,
// while any online algorithm must pick a fresh point every round.
class DyadicIntervalAdversary {
 public:
  explicit DyadicIntervalAdversary(int depth) : depth_(depth) {
    if (depth < 1 || depth > 30)
      throw std::invalid_argument("adversary depth must be in [1, 30]");
    hi_ = std::int64_t{1} << depth;
    for (std::int64_t i = 0; i < hi_; ++i)
      instance_.points.push_back({Rational(i)});
    instance_.family = Family::kIntervals;
    instance_.system = SetSystem(static_cast<std::size_t>(hi_), {});
  }

  std::size_t n() const { return static_cast<std::size_t>(std::int64_t{1} << depth_); }
  int depth() const { return depth_; }
  bool done() const { return delivered_ >= depth_; }

  // Next interval given the algorithm's current solution. The first call
  // ignores the solution.
  const ElementSet& next(const IntegralSolution& sol) {
    if (done()) throw EndOfStream();
    if (delivered_ > 0) {
      std::int64_t mid = lo_ + (hi_ - lo_) / 2;
      bool left_hit = false;
      for (auto e : sol.chosen())
        if (static_cast<std::int64_t>(e) >= lo_ &&
            static_cast<std::int64_t>(e) < mid)
          left_hit = true;
      if (left_hit)
        lo_ = mid;
      else
        hi_ = mid;
    }
    ElementSet s;
    for (std::int64_t i = lo_; i < hi_; ++i) s.push_back(static_cast<ElementId>(i));
    instance_.ranges.push_back(
        Range{RangeKind::kInterval, {Rational(lo_), Rational(hi_ - 1)}});
    instance_.system.add_set(s);
    ++delivered_;
    return instance_.system.sets().back();
  }

  // The realized instance (sets delivered so far, in delivery order).
  const GeometricInstance& instance() const { return instance_; }

 private:
  int depth_;
  int delivered_ = 0;
  std::int64_t lo_ = 0;
  std::int64_t hi_ = 0;
  GeometricInstance instance_;
};

enum class OrderPolicy { kGiven, kRandom, kReverse };

inline ArrivalStream make_order(std::size_t m, OrderPolicy policy,
                                std::uint64_t seed = 0) {
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  switch (policy) {
    case OrderPolicy::kGiven:
      break;
    case OrderPolicy::kReverse:
      std::reverse(order.begin(), order.end());
      break;
    case OrderPolicy::kRandom: {
      Rng rng(seed);
      rng.shuffle(std::span<std::size_t>(order));
      break;
    }
  }
  return ArrivalStream(std::move(order));
}

inline std::string to_string(Family f) {
  switch (f) {
    case Family::kIntervals:
      return "intervals";
    case Family::kDisks:
      return "disks";
    case Family::kSquares:
      return "squares";
    case Family::kLines:
      return "lines";
    case Family::kHalfspaces3d:
      return "halfspaces3d";
  }
  return "unknown";
}

inline Family family_from_string(const std::string& s) {
  if (s == "intervals") return Family::kIntervals;
  if (s == "disks") return Family::kDisks;
  if (s == "squares") return Family::kSquares;
  if (s == "lines") return Family::kLines;
  if (s == "halfspaces3d" || s == "halfspaces") return Family::kHalfspaces3d;
  throw std::invalid_argument("unknown family '" + s + "'");
}

inline CostModel cost_model_from_string(const std::string& s) {
  if (s == "unit") return CostModel::kUnit;
  if (s == "uniform") return CostModel::kUniform;
  if (s == "power-law" || s == "powerlaw") return CostModel::kPowerLaw;
  throw std::invalid_argument("unknown cost model '" + s + "'");
}

inline std::string to_string(CostModel c) {
  switch (c) {
    case CostModel::kUnit:
      return "unit";
    case CostModel::kUniform:
      return "uniform";
    case CostModel::kPowerLaw:
      return "power-law";
  }
  return "unknown";
}

inline OrderPolicy order_policy_from_string(const std::string& s) {
  if (s == "given") return OrderPolicy::kGiven;
  if (s == "random") return OrderPolicy::kRandom;
  if (s == "reverse") return OrderPolicy::kReverse;
  throw std::invalid_argument("unknown order policy '" + s + "'");
}

inline std::string to_string(RangeKind k) {
  switch (k) {
    case RangeKind::kInterval:
      return "interval";
    case RangeKind::kDisk:
      return "disk";
    case RangeKind::kSquare:
      return "square";
    case RangeKind::kSlab:
      return "slab";
    case RangeKind::kHalfspace:
      return "halfspace";
  }
  return "unknown";
}

// The sidecar "geometry" block written next to the instance JSON.
inline nlohmann::json geometry_json(const GeometricInstance& inst) {
  nlohmann::json g;
  g["family"] = to_string(inst.family);
  auto pts = nlohmann::json::array();
  for (const auto& p : inst.points) {
    auto jp = nlohmann::json::array();
    for (const auto& c : p) jp.push_back(c.str());
    pts.push_back(std::move(jp));
  }
  g["points"] = std::move(pts);
  auto ranges = nlohmann::json::array();
  for (const auto& r : inst.ranges) {
    nlohmann::json jr;
    jr["kind"] = to_string(r.kind);
    auto params = nlohmann::json::array();
    for (const auto& c : r.params) params.push_back(c.str());
    jr["params"] = std::move(params);
    ranges.push_back(std::move(jr));
  }
  g["ranges"] = std::move(ranges);
  return g;
}

}  // namespace ohs

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

// Covering LP  min c.x  s.t.  sum_{e in S} x_e >= 1 (S in F), x >= 0
// solved through its packing dual
//              max 1.y  s.t.  sum_{S ni e} y_S <= c_e (e in U), y >= 0.
//
// The slack basis y = 0 is always feasible because c >= 0, so a one-phase
// primal revised simplex suffices. Columns can be appended between solves
// (a new set enters with y_S = 0, keeping the basis feasible), which gives
// cheap warm starts when sets arrive online.
//
// PackingSimplex<double> is the fast route; PackingSimplex<BigRational> is
// exact. An exact solve can be seeded with the basis found in floating
// point, in which case it normally terminates without a single pivot.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "ohs/bigrational.hpp"
#include "ohs/core.hpp"

namespace ohs {

class LpIterationLimit : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool kExact = false;
  static constexpr double kEps = 1e-9;
  static bool positive(double v) { return v > kEps; }
  static bool nonzero(double v) { return std::abs(v) > kEps; }
  static bool negative(double v) { return v < -kEps; }
  static double from(const Rational& r) { return r.to_double(); }
};

template <>
struct ScalarTraits<BigRational> {
  static constexpr bool kExact = true;
  static bool positive(const BigRational& v) { return v > 0; }
  static bool nonzero(const BigRational& v) { return v != 0; }
  static bool negative(const BigRational& v) { return v < 0; }
  static BigRational from(const Rational& r) { return to_big(r); }
};

// Basis variable encoding: v >= 0 is structural column v (a set);
// v < 0 is the slack of row (-v - 1).
using BasisVar = std::int64_t;
constexpr BasisVar slack_var(std::size_t row) {
  return -static_cast<BasisVar>(row) - 1;
}
constexpr bool is_slack(BasisVar v) { return v < 0; }
constexpr std::size_t slack_row(BasisVar v) {
  return static_cast<std::size_t>(-v - 1);
}

template <typename Scalar>
class PackingSimplex {
  using T = ScalarTraits<Scalar>;

 public:
  explicit PackingSimplex(const std::vector<Rational>& costs)
      : rows_(costs.size()) {
    cap_.reserve(rows_);
    for (const auto& c : costs) cap_.push_back(T::from(c));
    reset_to_slack_basis();
  }

  std::size_t rows() const { return rows_; }
  std::size_t columns() const { return cols_.size(); }

  void add_column(const ElementSet& s) {
    for (auto e : s)
      if (e >= rows_) throw std::out_of_range("column entry outside rows");
    cols_.push_back(s);
    optimal_ = false;
  }

  const std::vector<BasisVar>& basis() const { return basis_; }

  // Replaces the basis. Structural columns of `target` are pivoted in from
  // the slack basis; if that fails (singular) or leaves the basis primal
  // infeasible, the slack basis is kept. Returns whether `target` was
  // installed.
  bool install_basis(const std::vector<BasisVar>& target) {
    reset_to_slack_basis();
    std::vector<bool> wanted_slack(rows_, false);
    std::vector<BasisVar> structural;
    for (auto v : target) {
      if (is_slack(v))
        wanted_slack[slack_row(v)] = true;
      else
        structural.push_back(v);
    }
    std::vector<Scalar> alpha;
    for (auto q : structural) {
      if (static_cast<std::size_t>(q) >= cols_.size()) {
        reset_to_slack_basis();
        return false;
      }
      column_image(q, alpha);
      std::size_t pivot_row = rows_;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (!is_slack(basis_[r]) || wanted_slack[slack_row(basis_[r])])
          continue;
        if (T::nonzero(alpha[r]) &&
            (pivot_row == rows_ || magnitude(alpha[r]) >
                                       magnitude(alpha[pivot_row])))
          pivot_row = r;
        if constexpr (T::kExact)
          if (pivot_row != rows_) break;
      }
      if (pivot_row == rows_) {
        reset_to_slack_basis();
        return false;
      }
      pivot(pivot_row, q, alpha);
    }
    for (std::size_t r = 0; r < rows_; ++r)
      if (T::negative(beta_[r])) {
        reset_to_slack_basis();
        return false;
      }
    if constexpr (!T::kExact) refactor();
    return true;
  }

  // Runs primal simplex to optimality. Exact instances always use Bland's
  // rule; floating-point instances use Dantzig pricing and fall back to
  // Bland after a run of degenerate pivots.
  void solve(std::uint64_t max_pivots = 1'000'000) {
    std::vector<Scalar> alpha;
    std::uint64_t degenerate_run = 0;
    for (std::uint64_t it = 0;; ++it) {
      if (it >= max_pivots) throw LpIterationLimit("simplex pivot limit");
      compute_duals();
      bool bland = T::kExact || degenerate_run > 50;
      BasisVar entering = 0;
      bool found = false;
      Scalar best_rc = 0;
      for (std::size_t j = 0; j < cols_.size() && !(found && bland); ++j) {
        if (in_basis(static_cast<BasisVar>(j))) continue;
        Scalar rc = 1;
        for (auto e : cols_[j]) rc -= pi_[e];
        if (T::positive(rc) && (!found || rc > best_rc)) {
          found = true;
          best_rc = rc;
          entering = static_cast<BasisVar>(j);
        }
      }
      for (std::size_t r = 0; r < rows_ && !(found && bland); ++r) {
        BasisVar v = slack_var(r);
        if (in_basis(v)) continue;
        Scalar rc = -pi_[r];
        if (T::positive(rc) && (!found || rc > best_rc)) {
          found = true;
          best_rc = rc;
          entering = v;
        }
      }
      if (!found) break;
      column_image(entering, alpha);
      std::size_t leave = rows_;
      Scalar best_ratio = 0;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (!T::positive(alpha[r])) continue;
        Scalar ratio = beta_[r] / alpha[r];
        if (leave == rows_ || ratio < best_ratio ||
            (ratio == best_ratio && bland_key(basis_[r]) <
                                        bland_key(basis_[leave]))) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave == rows_)
        throw std::logic_error("packing LP reported unbounded");
      if (T::positive(best_ratio))
        degenerate_run = 0;
      else
        ++degenerate_run;
      pivot(leave, entering, alpha);
      if constexpr (!T::kExact)
        if (++since_refactor_ >= 64) refactor();
    }
    if constexpr (!T::kExact) {
      for (auto& b : beta_)
        if (b < 0) b = 0;
    }
    optimal_ = true;
  }

  bool optimal() const { return optimal_; }

  // Objective 1.y at the current basis.
  Scalar value() const {
    Scalar total = 0;
    for (std::size_t r = 0; r < rows_; ++r)
      if (!is_slack(basis_[r])) total += beta_[r];
    return total;
  }

  // Packing solution y, one entry per column.
  std::vector<Scalar> packing() const {
    std::vector<Scalar> y(cols_.size(), Scalar(0));
    for (std::size_t r = 0; r < rows_; ++r)
      if (!is_slack(basis_[r])) y[static_cast<std::size_t>(basis_[r])] = beta_[r];
    return y;
  }

  // Covering solution x (the simplex multipliers), one entry per row.
  std::vector<Scalar> covering() {
    compute_duals();
    return pi_;
  }

 private:
  static Scalar magnitude(const Scalar& v) { return v < 0 ? Scalar(-v) : v; }

  // Bland order: structural columns first, then slacks.
  std::int64_t bland_key(BasisVar v) const {
    return is_slack(v) ? static_cast<std::int64_t>(cols_.size() + slack_row(v))
                       : v;
  }

  bool in_basis(BasisVar v) const {
    if (is_slack(v)) return slack_pos_[slack_row(v)] >= 0;
    auto j = static_cast<std::size_t>(v);
    return j < col_pos_.size() && col_pos_[j] >= 0;
  }

  void reset_to_slack_basis() {
    basis_.assign(rows_, 0);
    binv_.assign(rows_, std::vector<Scalar>(rows_, Scalar(0)));
    beta_.assign(rows_, Scalar(0));
    slack_pos_.assign(rows_, -1);
    col_pos_.clear();
    for (std::size_t r = 0; r < rows_; ++r) {
      basis_[r] = slack_var(r);
      binv_[r][r] = 1;
      beta_[r] = cap_[r];
      slack_pos_[r] = static_cast<std::int64_t>(r);
    }
    since_refactor_ = 0;
    optimal_ = false;
  }

  void compute_duals() {
    pi_.assign(rows_, Scalar(0));
    for (std::size_t i = 0; i < rows_; ++i) {
      if (is_slack(basis_[i])) continue;
      const auto& row = binv_[i];
      for (std::size_t r = 0; r < rows_; ++r)
        if (T::nonzero(row[r])) pi_[r] += row[r];
    }
  }

  // alpha = B^{-1} a_v.
  void column_image(BasisVar v, std::vector<Scalar>& alpha) const {
    alpha.assign(rows_, Scalar(0));
    if (is_slack(v)) {
      std::size_t c = slack_row(v);
      for (std::size_t i = 0; i < rows_; ++i) alpha[i] = binv_[i][c];
      return;
    }
    const auto& col = cols_[static_cast<std::size_t>(v)];
    for (std::size_t i = 0; i < rows_; ++i) {
      Scalar acc = 0;
      const auto& row = binv_[i];
      for (auto e : col)
        if (T::nonzero(row[e])) acc += row[e];
      alpha[i] = acc;
    }
  }

  void set_position(BasisVar v, std::int64_t pos) {
    if (is_slack(v)) {
      slack_pos_[slack_row(v)] = pos;
    } else {
      auto j = static_cast<std::size_t>(v);
      if (col_pos_.size() <= j) col_pos_.resize(cols_.size(), -1);
      col_pos_[j] = pos;
    }
  }

  void pivot(std::size_t p, BasisVar entering, const std::vector<Scalar>& alpha) {
    Scalar piv = alpha[p];
    auto& prow = binv_[p];
    std::vector<std::size_t> nz;
    for (std::size_t k = 0; k < rows_; ++k)
      if (T::nonzero(prow[k])) {
        prow[k] /= piv;
        nz.push_back(k);
      } else {
        prow[k] = 0;
      }
    beta_[p] /= piv;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == p || !T::nonzero(alpha[i])) continue;
      const Scalar& f = alpha[i];
      auto& row = binv_[i];
      for (auto k : nz) row[k] -= f * prow[k];
      beta_[i] -= f * beta_[p];
    }
    set_position(basis_[p], -1);
    basis_[p] = entering;
    set_position(entering, static_cast<std::int64_t>(p));
  }

  // Recomputes B^{-1} and beta from scratch (floating point only), limiting
  // accumulated round-off.
  void refactor() {
    since_refactor_ = 0;
    const std::size_t n = rows_;
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (std::size_t c = 0; c < n; ++c) {
      BasisVar v = basis_[c];
      if (is_slack(v))
        a[slack_row(v)][c] = 1.0;
      else
        for (auto e : cols_[static_cast<std::size_t>(v)]) a[e][c] = 1.0;
    }
    std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t best = c;
      for (std::size_t r = c + 1; r < n; ++r)
        if (std::abs(a[r][c]) > std::abs(a[best][c])) best = r;
      if (std::abs(a[best][c]) < 1e-12) return;  // keep the updated inverse
      std::swap(a[best], a[c]);
      std::swap(inv[best], inv[c]);
      double d = a[c][c];
      for (std::size_t k = 0; k < n; ++k) {
        a[c][k] /= d;
        inv[c][k] /= d;
      }
      for (std::size_t r = 0; r < n; ++r) {
        if (r == c || a[r][c] == 0.0) continue;
        double f = a[r][c];
        for (std::size_t k = 0; k < n; ++k) {
          a[r][k] -= f * a[c][k];
          inv[r][k] -= f * inv[c][k];
        }
      }
    }
    // inv is B^{-1} with rows indexed by basis position.
    if constexpr (std::is_same_v<Scalar, double>) {
      binv_ = std::move(inv);
      for (std::size_t r = 0; r < n; ++r) {
        double acc = 0;
        for (std::size_t k = 0; k < n; ++k) acc += binv_[r][k] * cap_[k];
        beta_[r] = acc;
      }
    }
  }

  std::size_t rows_;
  std::vector<Scalar> cap_;
  std::vector<ElementSet> cols_;
  std::vector<BasisVar> basis_;
  std::vector<std::int64_t> slack_pos_;
  std::vector<std::int64_t> col_pos_;
  std::vector<std::vector<Scalar>> binv_;
  std::vector<Scalar> beta_;
  std::vector<Scalar> pi_;
  int since_refactor_ = 0;
  bool optimal_ = false;
};

struct LpSolution {
  BigRational value = 0;
  std::vector<BigRational> x;  // covering solution, one entry per element
  std::vector<BigRational> y;  // packing solution, one entry per set
};

// Exact LP by Bland-rule simplex from the slack basis. Slow but free of any
// floating-point step; used directly on small systems and as a cross-check.
inline LpSolution covering_lp_exact_simplex(const SetSystem& system,
                                            std::size_t upto) {
  PackingSimplex<BigRational> lp(system.costs());
  for (std::size_t t = 0; t < upto; ++t) lp.add_column(system.set(t));
  lp.solve();
  return {lp.value(), lp.covering(), lp.packing()};
}

// Exact LP: floating-point simplex, then the final basis is installed and
// re-optimized in exact arithmetic.
inline LpSolution covering_lp_certified(const SetSystem& system,
                                        std::size_t upto) {
  PackingSimplex<double> approx(system.costs());
  for (std::size_t t = 0; t < upto; ++t) approx.add_column(system.set(t));
  approx.solve();
  PackingSimplex<BigRational> exact(system.costs());
  for (std::size_t t = 0; t < upto; ++t) exact.add_column(system.set(t));
  exact.install_basis(approx.basis());
  exact.solve();
  return {exact.value(), exact.covering(), exact.packing()};
}

}  // namespace ohs

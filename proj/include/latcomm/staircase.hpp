#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "latcomm/partition.hpp"

namespace latcomm {

/// Abscissae x_1 <= ... <= x_m of the diagonal corners (x_i, x_i) of a
/// staircase cover of selected cells below the diagonal.
class StaircaseProfile {
 public:
  explicit StaircaseProfile(std::vector<double> corners) : corners_(std::move(corners)) {
    if (corners_.empty()) throw std::invalid_argument("staircase: need at least one corner");
    for (std::size_t i = 0; i < corners_.size(); ++i) {
      if (!(corners_[i] > 0.0 && corners_[i] < 1.0)) {
        throw std::invalid_argument("staircase: corners must lie in (0, 1)");
      }
      if (i > 0 && corners_[i] < corners_[i - 1]) {
        throw std::invalid_argument("staircase: corners must be nondecreasing");
      }
    }
  }

  const std::vector<double>& corners() const { return corners_; }
  std::size_t size() const { return corners_.size(); }

 private:
  std::vector<double> corners_;
};

/// Area under the cover: sum of (x_i - x_{i-1})(1 - x_i) with x_0 = 0.
inline double staircase_area(std::span<const double> x) {
  double a = 0.0;
  double prev = 0.0;
  for (double xi : x) {
    a += (xi - prev) * (1.0 - xi);
    prev = xi;
  }
  return a;
}

inline double staircase_area(const StaircaseProfile& s) { return staircase_area(s.corners()); }

inline double staircase_bound(std::size_t m) {
  return static_cast<double>(m) / (2.0 * static_cast<double>(m + 1));
}

struct StaircaseOptimum {
  StaircaseProfile profile;
  double area;
};

/// Equally spaced corners i/(m+1), the maximizer of the cover area.
inline StaircaseOptimum staircase_max(std::size_t m) {
  if (m == 0) throw std::invalid_argument("staircase_max: m must be positive");
  std::vector<double> x(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = static_cast<double>(i + 1) / static_cast<double>(m + 1);
  StaircaseProfile p(std::move(x));
  const double a = staircase_area(p);
  return {std::move(p), a};
}

/// Maximizes the cover area by cyclic coordinate ascent using only area
/// evaluations: along each coordinate the area is a parabola, so three
/// samples give its vertex exactly. Each step is clamped to keep the
/// corners ordered inside [0, 1].
inline StaircaseOptimum maximize_staircase_numerically(std::size_t m, double tol = 1e-14,
                                                       int max_sweeps = 100000) {
  if (m == 0) throw std::invalid_argument("maximize_staircase_numerically: m must be positive");
  std::vector<double> x(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = 0.5 * static_cast<double>(i + 1) / static_cast<double>(m);
  const double h = 0.25 / static_cast<double>(m + 1);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double moved = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double lo = i == 0 ? 0.0 : x[i - 1];
      const double hi = i + 1 == m ? 1.0 : x[i + 1];
      const double c = x[i];
      auto f = [&](double t) {
        x[i] = t;
        return staircase_area(x);
      };
      const double fm = f(c - h);
      const double f0 = f(c);
      const double fp = f(c + h);
      const double curvature = fp - 2.0 * f0 + fm;
      double next = c;
      if (curvature < 0.0) next = c - h * (fp - fm) / (2.0 * curvature);
      next = std::clamp(next, lo, hi);
      x[i] = next;
      moved = std::max(moved, std::abs(next - c));
    }
    if (moved < tol) break;
  }
  const double a = staircase_area(x);
  return {StaircaseProfile(std::move(x)), a};
}

/// Tridiagonal Toeplitz Hessian of the cover area: -2 on the diagonal, 1 off it.
inline std::vector<std::vector<double>> staircase_hessian(std::size_t m) {
  std::vector<std::vector<double>> h(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    h[i][i] = -2.0;
    if (i + 1 < m) h[i][i + 1] = h[i + 1][i] = 1.0;
  }
  return h;
}

namespace detail {

/// max over all m-subsets of the sum, minus the bound, maximized over m.
inline double worst_subset_excess(std::vector<double> probs, std::size_t exhaustive_limit) {
  double worst = -1.0;
  const std::size_t n = probs.size();
  if (n == 0) return worst;
  if (n <= exhaustive_limit) {
    const std::uint32_t count = std::uint32_t{1} << n;
    std::vector<double> sums(count, 0.0);
    for (std::uint32_t mask = 1; mask < count; ++mask) {
      const std::uint32_t low = mask & (mask - 1);
      sums[mask] = sums[low] + probs[static_cast<std::size_t>(std::countr_zero(mask))];
      const auto m = static_cast<std::size_t>(std::popcount(mask));
      worst = std::max(worst, sums[mask] - staircase_bound(m));
    }
    return worst;
  }
  // Terms are nonnegative, so the m largest cells give the largest m-sum.
  std::sort(probs.begin(), probs.end(), std::greater<>());
  double s = 0.0;
  for (std::size_t m = 1; m <= n; ++m) {
    s += probs[m - 1];
    worst = std::max(worst, s - staircase_bound(m));
  }
  return worst;
}

}  // namespace detail

struct CellSumReport {
  bool ok = false;
  double worst_p_excess = 0.0;  ///< max over m-subsets of sum - m/(2(m+1)); <= 0 when satisfied
  double worst_q_excess = 0.0;
  double p_side_total = 0.0;    ///< p mass plus residual mass below the diagonal
  double q_side_total = 0.0;
};

/// Necessary conditions on the cell masses of a zero-error partition for the
/// min indicator: any m cells on one side hold at most m/(2(m+1)), and each
/// side totals 1/2. Residual cells contribute their exact area on each side
/// of the diagonal to the side totals. Subsets are enumerated exhaustively
/// for up to 20 cells per side.
inline CellSumReport check_cell_sum_bounds(const LabeledPartition& part, double tol = 1e-12) {
  CellSumReport r;
  const auto p = part.probabilities(CellLabel::p);
  const auto q = part.probabilities(CellLabel::q);
  r.worst_p_excess = detail::worst_subset_excess(p, 20);
  r.worst_q_excess = detail::worst_subset_excess(q, 20);
  for (const auto& c : part.cells) {
    const double below = area_below_diagonal(c.rect);
    switch (c.label) {
      case CellLabel::p:
        r.p_side_total += c.rect.area();
        break;
      case CellLabel::q:
        r.q_side_total += c.rect.area();
        break;
      case CellLabel::undecided:
        r.p_side_total += below;
        r.q_side_total += c.rect.area() - below;
        break;
    }
  }
  r.ok = r.worst_p_excess <= tol && r.worst_q_excess <= tol &&
         std::abs(r.p_side_total - 0.5) <= tol && std::abs(r.q_side_total - 0.5) <= tol;
  return r;
}

inline bool satisfies_cell_sum_bounds(const LabeledPartition& part) {
  return check_cell_sum_bounds(part).ok;
}

}  // namespace latcomm

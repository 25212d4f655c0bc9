#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "latcomm/entropy.hpp"
#include "latcomm/partition.hpp"
#include "latcomm/protocol.hpp"
#include "latcomm/staircase.hpp"

namespace latcomm {

// ---------------------------------------------------------------------------
// One-round quadrant problem

/// Linear constraints on the sorted cell masses of each side. A bound
/// (m, b) caps the sum of any m cells, and keeps applying to larger m until
/// the next entry.
struct ConstraintPolytope {
  std::vector<std::pair<std::size_t, double>> p_bounds;
  std::vector<std::pair<std::size_t, double>> q_bounds;
  double p_total = 0.0;
  double q_total = 0.0;

  static double bound_for(const std::vector<std::pair<std::size_t, double>>& bounds, std::size_t m) {
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [k, v] : bounds) {
      if (k <= m) b = v;
    }
    return b;
  }

  bool feasible(std::span<const double> p, std::span<const double> q, double tol = 1e-12) const {
    auto side_ok = [&](std::span<const double> x, const auto& bounds, double total) {
      const auto s = sorted_nonincreasing(x);
      double acc = 0.0;
      for (std::size_t m = 1; m <= s.size(); ++m) {
        if (s[m - 1] < -tol) return false;
        acc += s[m - 1];
        if (acc > bound_for(bounds, m) + tol) return false;
      }
      return std::abs(acc - total) <= tol;
    };
    return side_ok(p, p_bounds, p_total) && side_ok(q, q_bounds, q_total);
  }
};

/// Constraints for the quadrant indicator: f = 1 cells fit in the square
/// [1/2,1]^2, so any of them sum to at most 1/4; a single f = 0 cell holds
/// at most 1/2 and any two at most 3/4.
inline ConstraintPolytope quadrant_polytope() {
  return {{{1, 0.25}}, {{1, 0.5}, {2, 0.75}}, 0.25, 0.75};
}

inline double joint_entropy(std::span<const double> p, std::span<const double> q) {
  return shannon_entropy(p) + shannon_entropy(q);
}

struct QuadrantMinimum {
  std::vector<double> p_star;
  std::vector<double> q_star;
  double entropy_bits = 0.0;
  std::size_t vertices_checked = 0;
  bool vertices_feasible = false;
};

/// Evaluates the entropy over the vertex family: every placement of
/// p* = (1/4) and q* = (1/2, 1/4) into `slots` coordinates per side.
inline QuadrantMinimum quadrant_min_entropy(std::size_t slots = 4) {
  const ConstraintPolytope poly = quadrant_polytope();
  QuadrantMinimum best;
  best.entropy_bits = std::numeric_limits<double>::infinity();
  best.vertices_feasible = true;
  std::vector<double> p(slots, 0.0);
  std::vector<double> q(slots, 0.0);
  for (std::size_t i = 0; i < slots; ++i) {
    std::fill(p.begin(), p.end(), 0.0);
    p[i] = 0.25;
    for (std::size_t j = 0; j < slots; ++j) {
      for (std::size_t k = 0; k < slots; ++k) {
        if (j == k) continue;
        std::fill(q.begin(), q.end(), 0.0);
        q[j] = 0.5;
        q[k] = 0.25;
        ++best.vertices_checked;
        best.vertices_feasible = best.vertices_feasible && poly.feasible(p, q);
        const double h = joint_entropy(p, q);
        if (h < best.entropy_bits) {
          best.entropy_bits = h;
          best.p_star = {0.25};
          best.q_star = {0.5, 0.25};
        }
      }
    }
  }
  return best;
}

struct GridSearchResult {
  double min_entropy = std::numeric_limits<double>::infinity();
  std::vector<double> argmin_p;
  std::vector<double> argmin_q;
  std::size_t feasible_points = 0;
};

namespace detail {

/// Minimum entropy over 4-part compositions of `total` grid units, each
/// part at most `cap` units, that also satisfy the polytope bounds. The
/// first part is split across workers; the min-reduction is order
/// independent.
inline GridSearchResult min_over_compositions(int total, int cap, double unit,
                                              const std::vector<std::pair<std::size_t, double>>& bounds,
                                              unsigned workers) {
  std::vector<double> neg_xlogx(static_cast<std::size_t>(total) + 1, 0.0);
  for (int k = 1; k <= total; ++k) {
    const double x = k * unit;
    neg_xlogx[static_cast<std::size_t>(k)] = -x * std::log2(x);
  }
  std::vector<GridSearchResult> partial(workers);
  auto work = [&](unsigned w) {
    GridSearchResult& r = partial[w];
    std::vector<double> x(4);
    for (int a = static_cast<int>(w); a <= std::min(total, cap); a += static_cast<int>(workers)) {
      for (int b = 0; b <= std::min(total - a, cap); ++b) {
        for (int c = 0; c <= std::min(total - a - b, cap); ++c) {
          const int d = total - a - b - c;
          if (d > cap) continue;
          x = {a * unit, b * unit, c * unit, d * unit};
          const auto s = sorted_nonincreasing(x);
          double acc = 0.0;
          bool ok = true;
          for (std::size_t m = 1; m <= 4 && ok; ++m) {
            acc += s[m - 1];
            ok = acc <= ConstraintPolytope::bound_for(bounds, m) + 1e-12;
          }
          if (!ok) continue;
          ++r.feasible_points;
          const double h = neg_xlogx[static_cast<std::size_t>(a)] + neg_xlogx[static_cast<std::size_t>(b)] +
                           neg_xlogx[static_cast<std::size_t>(c)] + neg_xlogx[static_cast<std::size_t>(d)];
          if (h < r.min_entropy) {
            r.min_entropy = h;
            r.argmin_p = x;
          }
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();

  GridSearchResult best;
  for (const auto& r : partial) {
    best.feasible_points += r.feasible_points;
    if (r.min_entropy < best.min_entropy ||
        (r.min_entropy == best.min_entropy && r.argmin_p < best.argmin_p)) {
      best.min_entropy = r.min_entropy;
      best.argmin_p = r.argmin_p;
    }
  }
  return best;
}

}  // namespace detail

/// Brute-force check of the quadrant minimum: all feasible (p, q) with up to
/// four cells per side on a grid of spacing 1/(4 * resolution). Objective
/// and constraints separate between the sides, so the joint minimum is the
/// sum of the per-side minima.
inline GridSearchResult quadrant_grid_search(int resolution = 64, unsigned workers = 0) {
  if (resolution < 1) throw std::invalid_argument("quadrant_grid_search: resolution must be positive");
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  const ConstraintPolytope poly = quadrant_polytope();
  const double unit = 0.25 / resolution;
  const auto p = detail::min_over_compositions(resolution, resolution, unit, poly.p_bounds, workers);
  const auto q = detail::min_over_compositions(3 * resolution, 2 * resolution, unit, poly.q_bounds, workers);
  GridSearchResult r;
  r.min_entropy = p.min_entropy + q.min_entropy;
  r.argmin_p = p.argmin_p;
  r.argmin_q = q.argmin_p;
  r.feasible_points = p.feasible_points * q.feasible_points;
  return r;
}

// ---------------------------------------------------------------------------
// Self-similar partitions for the min indicator

/// H([v^2, 2v(1-v), (1-v)^2]) / (2v(1-v)): conditional entropy, given x1 >= x2,
/// of the infinite self-similar partition with split ratio v.
inline double entropy_ratio(double v) {
  if (!(v > 0.0 && v < 1.0)) throw std::domain_error("entropy_ratio: v must lie in (0, 1)");
  // evaluate at the smaller of v, 1 - v so the curve is symmetric bit for bit
  const double a = std::min(v, 1.0 - v);
  const double b = 1.0 - a;
  return shannon_entropy({a * a, 2.0 * a * b, b * b}) / (2.0 * a * b);
}

struct RatioMinimum {
  double v_star = 0.5;
  double value = 3.0;
  bool unique = false;  ///< ratio at v* +- max(10 tol, 1e-3) strictly exceeds the minimum
};

/// Golden-section search on [1e-9, 1/2]; the ratio is symmetric under
/// v -> 1 - v so the other half adds nothing.
inline RatioMinimum minimize_entropy_ratio(double tolerance) {
  if (!(tolerance > 0.0 && tolerance <= 1e-3)) {
    throw std::invalid_argument("minimize_entropy_ratio: tolerance must lie in (0, 1e-3]");
  }
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 1e-9;
  double b = 0.5;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = entropy_ratio(c);
  double fd = entropy_ratio(d);
  while (b - a > tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = entropy_ratio(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = entropy_ratio(d);
    }
  }
  RatioMinimum r;
  r.v_star = 0.5 * (a + b);
  r.value = entropy_ratio(r.v_star);
  // the bottom is quadratic, so closer probes vanish below double rounding
  const double step = std::max(10.0 * tolerance, 1e-3);
  r.unique = entropy_ratio(r.v_star - step) > r.value && entropy_ratio(std::min(r.v_star + step, 1.0 - 1e-9)) > r.value;
  return r;
}

namespace detail {

inline void build_self_similar(double s, double t, std::size_t level, std::size_t depth, double v,
                               std::vector<LabeledCell>& out) {
  if (level == depth) {
    out.push_back({{s, t, s, t}, CellLabel::undecided});
    return;
  }
  const double m = s + v * (t - s);
  out.push_back({{m, t, s, m}, CellLabel::p});
  out.push_back({{s, m, m, t}, CellLabel::q});
  build_self_similar(s, m, level + 1, depth, v, out);
  build_self_similar(m, t, level + 1, depth, v, out);
}

}  // namespace detail

/// Places the square with corners (v, v) and (1, 0) below the diagonal, its
/// mirror above, and recurses into the two diagonal squares [0,v]^2 and
/// [v,1]^2. Diagonal squares left at `depth` are kept as undecided cells.
inline LabeledPartition self_similar_partition(double v, std::size_t depth) {
  if (!(v > 0.0 && v < 1.0)) throw std::domain_error("self_similar_partition: v must lie in (0, 1)");
  if (depth == 0) throw std::invalid_argument("self_similar_partition: depth must be positive");
  if (depth > 24) throw std::invalid_argument("self_similar_partition: depth above 24 is too large to list");
  LabeledPartition part;
  part.cells.reserve((std::size_t{3} << depth));
  detail::build_self_similar(0.0, 1.0, 0, depth, v, part.cells);
  return part;
}

/// Cell masses split by the side of the diagonal; undecided cells
/// contribute their part on each side.
struct SideMasses {
  std::vector<double> one;   ///< within x1 >= x2
  std::vector<double> zero;  ///< within x1 < x2
};

inline SideMasses side_masses(const LabeledPartition& part) {
  SideMasses s;
  for (const auto& c : part.cells) {
    const double a = c.rect.area();
    switch (c.label) {
      case CellLabel::p:
        s.one.push_back(a);
        break;
      case CellLabel::q:
        s.zero.push_back(a);
        break;
      case CellLabel::undecided: {
        const double below = area_below_diagonal(c.rect);
        if (below > 0.0) s.one.push_back(below);
        if (a - below > 0.0) s.zero.push_back(a - below);
        break;
      }
    }
  }
  return s;
}

/// Entropy of the partition conditioned on x1 >= x2.
inline double conditional_entropy_one_side(const LabeledPartition& part) {
  return normalized_entropy(side_masses(part).one);
}

struct SideDecomposition {
  double total = 0.0;     ///< entropy of the side-refined cell list
  double h_side = 0.0;    ///< H(C)
  double h_given_one = 0.0;
  double h_given_zero = 0.0;
  double p_one = 0.0;
  double assembled = 0.0; ///< H(C) + P(C=1) H(.|C=1) + P(C=0) H(.|C=0)
};

/// Both sides of the chain rule over the side indicator C, each computed
/// directly from the cell list.
inline SideDecomposition side_decomposition(const LabeledPartition& part) {
  const SideMasses s = side_masses(part);
  SideDecomposition d;
  std::vector<double> all(s.one);
  all.insert(all.end(), s.zero.begin(), s.zero.end());
  d.total = shannon_entropy(all);
  const double p1 = std::accumulate(s.one.begin(), s.one.end(), 0.0);
  const double p0 = std::accumulate(s.zero.begin(), s.zero.end(), 0.0);
  d.p_one = p1;
  d.h_side = shannon_entropy({p1, p0});
  d.h_given_one = normalized_entropy(s.one);
  d.h_given_zero = normalized_entropy(s.zero);
  d.assembled = d.h_side + p1 * d.h_given_one + p0 * d.h_given_zero;
  return d;
}

namespace detail {

/// Masses on the x1 >= x2 side of the cells lying inside the square [s,t]^2.
inline std::vector<double> one_side_masses_in(const LabeledPartition& part, double s, double t) {
  const Rect sq{s, t, s, t};
  std::vector<double> out;
  for (const auto& c : part.cells) {
    if (c.rect.x_lo < s || c.rect.x_hi > t || c.rect.y_lo < s || c.rect.y_hi > t) continue;
    if (sq.overlap_area(c.rect) <= 0.0) continue;
    double m = 0.0;
    if (c.label == CellLabel::p) m = c.rect.area();
    if (c.label == CellLabel::undecided) m = area_below_diagonal(c.rect);
    if (m > 0.0) out.push_back(m);
  }
  return out;
}

inline double split_gap(const LabeledPartition& part, double s, double t, std::size_t level,
                        std::size_t depth, double v) {
  if (level == depth) return 0.0;
  const double m = s + v * (t - s);
  const auto whole = one_side_masses_in(part, s, t);
  const auto in_a = one_side_masses_in(part, s, m);
  const auto in_b = one_side_masses_in(part, m, t);
  const double total = std::accumulate(whole.begin(), whole.end(), 0.0);
  const double mass_a = std::accumulate(in_a.begin(), in_a.end(), 0.0);
  const double mass_b = std::accumulate(in_b.begin(), in_b.end(), 0.0);
  const double mass_r = total - mass_a - mass_b;
  const std::vector<double> region{mass_a, mass_r, mass_b};
  const double lhs = normalized_entropy(whole);
  const double rhs = normalized_entropy(region) + (mass_a / total) * normalized_entropy(in_a) +
                     (mass_b / total) * normalized_entropy(in_b);
  double gap = std::abs(lhs - rhs);
  gap = std::max(gap, split_gap(part, s, m, level + 1, depth, v));
  gap = std::max(gap, split_gap(part, m, t, level + 1, depth, v));
  return gap;
}

}  // namespace detail

/// Largest violation, over every diagonal square of the construction, of
/// H(.|square side) = H(S) + P(A) H(.|A) + P(B) H(.|B), where S names which
/// of the lower sub-triangle A, the placed square, or the upper
/// sub-triangle B holds the point.
inline double max_split_identity_gap(const LabeledPartition& part, double v, std::size_t depth) {
  return detail::split_gap(part, 0.0, 1.0, 0, depth, v);
}

/// Conditional entropy given x1 >= x2 of the depth-d construction, d = 1..depth.
inline std::vector<double> truncated_conditional_entropies(double v, std::size_t depth) {
  std::vector<double> out;
  for (std::size_t d = 1; d <= depth; ++d) out.push_back(conditional_entropy_one_side(self_similar_partition(v, d)));
  return out;
}

struct FourBitsReport {
  double h_side = 0.0;        ///< entropy of the side indicator
  double ratio_one = 0.0;     ///< conditional entropy on x1 >= x2
  double ratio_zero = 0.0;    ///< conditional entropy on x1 < x2
  double total_bits = 0.0;
  double bit_exchange_rate = 0.0;  ///< sum rate of bit exchange truncated at 30 rounds
  bool ok = false;
};

/// Side indicator entropy plus the two conditional entropies at v = 1/2,
/// cross-checked against the truncated bit-exchange sum rate.
inline FourBitsReport assemble_four_bits() {
  FourBitsReport r;
  r.h_side = shannon_entropy({0.5, 0.5});
  r.ratio_one = entropy_ratio(0.5);
  r.ratio_zero = entropy_ratio(0.5);
  r.total_bits = r.h_side + 0.5 * r.ratio_one + 0.5 * r.ratio_zero;
  r.bit_exchange_rate = sum_rate(bit_exchange_protocol(30));
  r.ok = r.total_bits == 4.0 && std::abs(r.bit_exchange_rate - 4.0) < 1e-7;
  return r;
}

}  // namespace latcomm

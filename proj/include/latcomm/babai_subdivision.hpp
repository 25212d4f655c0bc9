#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "latcomm/entropy.hpp"
#include "latcomm/geometry.hpp"
#include "latcomm/lattice.hpp"

namespace latcomm {

/// Voronoi/Babai configuration that the seven-cell layout cannot describe.
class UnsupportedGeometry : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SubCell {
  Rect rect;
  bool error_free = true;
  /// Part of the Voronoi boundary inside the cell; set iff !error_free.
  std::optional<Segment> crossing;
  int column = 0;  ///< 0 left, 1 middle, 2 right
  int row = 0;     ///< 0 bottom, 1 middle, 2 top (middle column uses row 1)
};

/// Guillotine refinement of the Babai cell of the origin: three columns,
/// the outer two split into three rows. A single error-free cell is used
/// when the Voronoi cell coincides with the Babai cell.
struct BabaiSubdivision {
  Rect babai_cell;
  std::vector<SubCell> cells;

  bool degenerate() const { return cells.size() == 1; }

  const SubCell* find(Point2 x) const {
    for (const auto& c : cells) {
      if (c.rect.contains(x)) return &c;
    }
    return nullptr;
  }
};

namespace detail {

inline constexpr double kGeomTol = 1e-12;

/// Pieces of the Voronoi boundary that pass through the open Babai cell.
inline std::vector<Segment> interior_boundary_pieces(const ConvexPolygon& voronoi, const Rect& box) {
  std::vector<Segment> out;
  const double scale = std::max(box.width(), box.height());
  const double tol = kGeomTol * scale;
  for (const auto& e : voronoi.edges()) {
    const auto clipped = clip_segment(e, box);
    if (!clipped || clipped->length() <= tol) continue;
    const Point2 mid = clipped->midpoint();
    const bool strictly_inside = mid.x1 > box.x_lo + tol && mid.x1 < box.x_hi - tol &&
                                 mid.x2 > box.y_lo + tol && mid.x2 < box.y_hi - tol;
    if (strictly_inside) out.push_back(*clipped);
  }
  return out;
}

inline bool segment_spans_cell(const Segment& s, const Rect& r, double tol) {
  return on_boundary(r, s.a, tol) && on_boundary(r, s.b, tol);
}

}  // namespace detail

/// Seven-rectangle refinement of the Babai cell. Columns are cut at the
/// x-extents of the boundary crossings, rows in the outer columns at their
/// y-extents, so each crossed cell is the tightest box holding its crossing.
inline BabaiSubdivision babai_subdivision(const Lattice2D& lat) {
  const Rect box = babai_cell(lat);
  const ConvexPolygon voronoi = voronoi_cell(lat);
  const auto pieces = detail::interior_boundary_pieces(voronoi, box);

  BabaiSubdivision sub{box, {}};
  if (pieces.empty()) {
    sub.cells.push_back({box, true, std::nullopt, 1, 1});
    return sub;
  }

  // One crossing per corner quadrant, indexed [left/right][bottom/top].
  std::array<std::array<std::optional<Segment>, 2>, 2> corner;
  for (const auto& s : pieces) {
    const Point2 m = s.midpoint();
    const int cx = m.x1 < 0.0 ? 0 : 1;
    const int cy = m.x2 < 0.0 ? 0 : 1;
    if (corner[cx][cy]) {
      throw UnsupportedGeometry("babai_subdivision: more than one Voronoi crossing in a corner");
    }
    corner[cx][cy] = s;
  }
  for (const auto& col : corner) {
    for (const auto& c : col) {
      if (!c) throw UnsupportedGeometry("babai_subdivision: Voronoi boundary misses a Babai corner");
    }
  }

  const double tol = detail::kGeomTol * std::max(box.width(), box.height());
  const double left_cut = std::max(corner[0][0]->bounding_box().x_hi, corner[0][1]->bounding_box().x_hi);
  const double right_cut = std::min(corner[1][0]->bounding_box().x_lo, corner[1][1]->bounding_box().x_lo);
  if (!(left_cut < right_cut)) {
    throw UnsupportedGeometry("babai_subdivision: outer columns overlap");
  }

  const std::array<double, 4> xs{box.x_lo, left_cut, right_cut, box.x_hi};
  for (int col : {0, 2}) {
    const int side = col == 0 ? 0 : 1;
    const double lower = corner[side][0]->bounding_box().y_hi;
    const double upper = corner[side][1]->bounding_box().y_lo;
    if (!(lower < upper)) {
      throw UnsupportedGeometry("babai_subdivision: crossed rows overlap in an outer column");
    }
    const std::array<double, 4> ys{box.y_lo, lower, upper, box.y_hi};
    for (int row = 0; row < 3; ++row) {
      SubCell c;
      c.rect = {xs[col], xs[col + 1], ys[row], ys[row + 1]};
      c.column = col;
      c.row = row;
      c.error_free = row == 1;
      if (!c.error_free) c.crossing = corner[side][row == 0 ? 0 : 1];
      sub.cells.push_back(c);
    }
    if (col == 0) sub.cells.push_back({{xs[1], xs[2], box.y_lo, box.y_hi}, true, std::nullopt, 1, 1});
  }

  for (const auto& c : sub.cells) {
    if (c.error_free) {
      const Rect& r = c.rect;
      for (Point2 p : {Point2{r.x_lo, r.y_lo}, Point2{r.x_hi, r.y_lo}, Point2{r.x_lo, r.y_hi},
                       Point2{r.x_hi, r.y_hi}}) {
        if (!voronoi.contains(p, 1e-9)) {
          throw UnsupportedGeometry("babai_subdivision: error-free cell leaves the Voronoi cell");
        }
      }
    } else if (!detail::segment_spans_cell(*c.crossing, c.rect, tol)) {
      throw UnsupportedGeometry("babai_subdivision: crossing does not split its cell in two");
    }
  }
  return sub;
}

/// Rate terms of the two-stage refinement. Q is the column distribution,
/// P the row distribution inside an outer column; the 4 bits per crossed
/// cell are the cost of resolving a rectangle split by one diagonal.
struct RoundRates {
  std::vector<double> Q;
  std::vector<double> P;
  double Q0 = 1.0;
  double P0 = 1.0;
  double R_bar = 0.0;
  double N_bar = 1.0;
};

inline double rate_formula(std::span<const double> Q, double Q0, std::span<const double> P, double P0) {
  return shannon_entropy(Q) + (1.0 - Q0) * shannon_entropy(P) + 4.0 * (1.0 - P0) * (1.0 - Q0);
}

inline double rounds_formula(double Q0, double P0) { return 1.0 + 2.0 * (1.0 - P0) * (1.0 - Q0); }

/// P is taken from the left column; the right column is its point reflection
/// and carries the same multiset of row probabilities.
inline RoundRates round_rates(const BabaiSubdivision& sub) {
  RoundRates r;
  if (sub.degenerate()) {
    r.Q = {1.0};
    r.P = {1.0};
  } else {
    const double width = sub.babai_cell.width();
    const double height = sub.babai_cell.height();
    std::array<double, 3> col_width{};
    std::array<bool, 3> col_error_free{true, true, true};
    std::vector<double> left_rows(3, 0.0);
    std::array<bool, 3> row_error_free{};
    for (const auto& c : sub.cells) {
      if (c.row == 1 || c.column == 1) col_width[c.column] = c.rect.width();
      col_error_free[c.column] = col_error_free[c.column] && c.error_free;
      if (c.column == 0) {
        left_rows[c.row] = c.rect.height() / height;
        row_error_free[c.row] = c.error_free;
      }
    }
    r.Q = {col_width[0] / width, col_width[1] / width, col_width[2] / width};
    r.P = left_rows;
    r.Q0 = 0.0;
    r.P0 = 0.0;
    // mass that needs no further messages after the column, resp. the row
    for (int k = 0; k < 3; ++k) {
      if (col_error_free[k]) r.Q0 += r.Q[k];
      if (row_error_free[k]) r.P0 += r.P[k];
    }
  }
  r.R_bar = rate_formula(r.Q, r.Q0, r.P, r.P0);
  r.N_bar = rounds_formula(r.Q0, r.P0);
  return r;
}

/// Fraction of the Babai cell covered by cells crossed by the Voronoi boundary.
inline double crossed_mass(const BabaiSubdivision& sub) {
  double a = 0.0;
  for (const auto& c : sub.cells) {
    if (!c.error_free) a += c.rect.area();
  }
  return a / sub.babai_cell.area();
}

}  // namespace latcomm

#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "latcomm/geometry.hpp"

namespace latcomm {

/// Thrown for lattice parameters that do not span the plane.
class DegenerateLattice : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Column-major 2x2 matrix: columns are the basis vectors.
using Matrix2 = std::array<std::array<double, 2>, 2>;

/// 2-D lattice with generator [[1, rho cos theta], [0, rho sin theta]].
class Lattice2D {
 public:
  Lattice2D(double rho, double theta) : rho_(rho), theta_(theta) {
    if (!(rho > 0.0) || !std::isfinite(rho)) {
      throw DegenerateLattice("lattice: rho must be positive and finite, got " + std::to_string(rho));
    }
    if (!(theta > 0.0) || theta > std::numbers::pi / 2 + 1e-12 || !(std::sin(theta) > 0.0)) {
      throw DegenerateLattice("lattice: theta must lie in (0, pi/2], got " + std::to_string(theta));
    }
    // cos(pi/2) evaluates to 6e-17; snap so the rectangular case is exact.
    shear_ = std::abs(theta - std::numbers::pi / 2) < 1e-15 ? 0.0 : rho * std::cos(theta);
    height_ = rho * std::sin(theta);
  }

  double rho() const { return rho_; }
  double theta() const { return theta_; }
  /// rho cos theta: horizontal offset of the second basis vector.
  double shear() const { return shear_; }
  /// rho sin theta: row spacing and determinant.
  double height() const { return height_; }
  double determinant() const { return height_; }

  Point2 basis1() const { return {1.0, 0.0}; }
  Point2 basis2() const { return {shear_, height_}; }

  Point2 point(long c1, long c2) const {
    return {static_cast<double>(c1) + static_cast<double>(c2) * shear_,
            static_cast<double>(c2) * height_};
  }

 private:
  double rho_;
  double theta_;
  double shear_ = 0.0;
  double height_ = 0.0;
};

/// Row-major view: m[row][col].
inline Matrix2 generator_matrix(const Lattice2D& lat) {
  return {{{1.0, lat.shear()}, {0.0, lat.height()}}};
}

struct LatticePoint {
  std::array<long, 2> coeffs{0, 0};
  Point2 point;
};

/// Babai rounding against the upper-triangular basis: round the second
/// coordinate first, then the first. Ties go to the even integer.
inline LatticePoint nearest_plane_point(const Lattice2D& lat, Point2 x) {
  if (!std::isfinite(x.x1) || !std::isfinite(x.x2)) {
    throw std::invalid_argument("nearest_plane_point: non-finite input");
  }
  const double b2 = std::nearbyint(x.x2 / lat.height());
  const double b1 = std::nearbyint(x.x1 - b2 * lat.shear());
  const auto c1 = static_cast<long>(b1);
  const auto c2 = static_cast<long>(b2);
  return {{c1, c2}, lat.point(c1, c2)};
}

/// Babai cell of the origin, [-1/2, 1/2] x [-h/2, h/2].
inline Rect babai_cell(const Lattice2D& lat) {
  return {-0.5, 0.5, -0.5 * lat.height(), 0.5 * lat.height()};
}

/// Voronoi cell of the origin as an intersection of bisector half-planes over
/// lattice vectors with coefficients in [-2, 2]^2.
inline ConvexPolygon voronoi_cell(const Lattice2D& lat) {
  const double reach = 4.0 * (1.0 + lat.rho());
  ConvexPolygon cell{{{-reach, -reach}, {reach, -reach}, {reach, reach}, {-reach, reach}}};
  for (long c1 = -2; c1 <= 2; ++c1) {
    for (long c2 = -2; c2 <= 2; ++c2) {
      if (c1 == 0 && c2 == 0) continue;
      const Point2 v = lat.point(c1, c2);
      cell = clip_half_plane(cell, v, 0.5 * norm2(v));
    }
  }
  cell = simplify(cell);
  if (std::abs(cell.area() - lat.determinant()) > 1e-9) {
    throw DegenerateLattice("voronoi_cell: basis too skewed for the candidate radius (area " +
                            std::to_string(cell.area()) + " vs determinant " +
                            std::to_string(lat.determinant()) + ")");
  }
  return cell;
}

/// Exact closest lattice point: Babai point plus the 3x3 neighbourhood of
/// coefficient offsets. Distance ties go to the lexicographically smallest
/// coefficient pair.
inline LatticePoint nearest_lattice_point(const Lattice2D& lat, Point2 x) {
  const LatticePoint babai = nearest_plane_point(lat, x);
  LatticePoint best = babai;
  double best_d = std::numeric_limits<double>::infinity();
  for (long d1 = -1; d1 <= 1; ++d1) {
    for (long d2 = -1; d2 <= 1; ++d2) {
      const long c1 = babai.coeffs[0] + d1;
      const long c2 = babai.coeffs[1] + d2;
      const Point2 p = lat.point(c1, c2);
      const double d = norm2(x - p);
      const std::array<long, 2> c{c1, c2};
      if (d < best_d || (d == best_d && c < best.coeffs)) {
        best_d = d;
        best = {c, p};
      }
    }
  }
  return best;
}

}  // namespace latcomm

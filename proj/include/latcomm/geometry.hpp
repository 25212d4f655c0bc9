#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace latcomm {

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x1, s * a.x2}; }
inline double dot(Point2 a, Point2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }
inline double cross(Point2 a, Point2 b) { return a.x1 * b.x2 - a.x2 * b.x1; }
inline double norm2(Point2 a) { return dot(a, a); }

/// Closed axis-aligned rectangle [x_lo, x_hi] x [y_lo, y_hi].
struct Rect {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double y_lo = 0.0;
  double y_hi = 0.0;

  double width() const { return x_hi - x_lo; }
  double height() const { return y_hi - y_lo; }
  double area() const { return width() * height(); }
  bool non_degenerate() const { return x_lo < x_hi && y_lo < y_hi; }

  bool contains(Point2 p) const {
    return p.x1 >= x_lo && p.x1 <= x_hi && p.x2 >= y_lo && p.x2 <= y_hi;
  }

  /// Area of the intersection of the two interiors.
  double overlap_area(const Rect& o) const {
    const double w = std::min(x_hi, o.x_hi) - std::max(x_lo, o.x_lo);
    const double h = std::min(y_hi, o.y_hi) - std::max(y_lo, o.y_lo);
    return (w > 0.0 && h > 0.0) ? w * h : 0.0;
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

struct Segment {
  Point2 a;
  Point2 b;

  Rect bounding_box() const {
    return {std::min(a.x1, b.x1), std::max(a.x1, b.x1), std::min(a.x2, b.x2),
            std::max(a.x2, b.x2)};
  }
  Point2 midpoint() const { return 0.5 * (a + b); }
  double length() const { return std::sqrt(norm2(b - a)); }

  /// Signed side of p relative to the directed line a->b (positive = left).
  double side(Point2 p) const { return cross(b - a, p - a); }
};

/// Counterclockwise convex polygon.
struct ConvexPolygon {
  std::vector<Point2> vertices;

  double area() const {
    double s = 0.0;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      s += cross(vertices[i], vertices[(i + 1) % n]);
    }
    return 0.5 * s;
  }

  std::vector<Segment> edges() const {
    std::vector<Segment> out;
    const std::size_t n = vertices.size();
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back({vertices[i], vertices[(i + 1) % n]});
    return out;
  }

  /// Inside or on the boundary, up to `tol` in the edge-normal direction.
  bool contains(Point2 p, double tol = 1e-12) const {
    for (const auto& e : edges()) {
      if (e.side(p) < -tol * e.length()) return false;
    }
    return true;
  }
};

/// Keeps the part of `poly` where dot(normal, y) <= offset (Sutherland-Hodgman).
inline ConvexPolygon clip_half_plane(const ConvexPolygon& poly, Point2 normal, double offset) {
  ConvexPolygon out;
  const std::size_t n = poly.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 cur = poly.vertices[i];
    const Point2 nxt = poly.vertices[(i + 1) % n];
    const double dc = dot(normal, cur) - offset;
    const double dn = dot(normal, nxt) - offset;
    if (dc <= 0.0) out.vertices.push_back(cur);
    if ((dc < 0.0 && dn > 0.0) || (dc > 0.0 && dn < 0.0)) {
      const double t = dc / (dc - dn);
      out.vertices.push_back(cur + t * (nxt - cur));
    }
  }
  return out;
}

/// Drops repeated and collinear vertices.
inline ConvexPolygon simplify(const ConvexPolygon& poly, double tol = 1e-12) {
  std::vector<Point2> v;
  for (const auto& p : poly.vertices) {
    if (v.empty() || norm2(p - v.back()) > tol * tol) v.push_back(p);
  }
  while (v.size() > 1 && norm2(v.front() - v.back()) <= tol * tol) v.pop_back();
  bool changed = true;
  while (changed && v.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Point2 prev = v[(i + v.size() - 1) % v.size()];
      const Point2 next = v[(i + 1) % v.size()];
      const Point2 d = next - prev;
      const double len = std::sqrt(norm2(d));
      if (std::abs(cross(d, v[i] - prev)) <= tol * std::max(len, 1.0)) {
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return {std::move(v)};
}

/// Liang-Barsky clip of a segment to a closed rectangle.
inline std::optional<Segment> clip_segment(const Segment& s, const Rect& r) {
  double t0 = 0.0;
  double t1 = 1.0;
  const Point2 d = s.b - s.a;
  const double p[4] = {-d.x1, d.x1, -d.x2, d.x2};
  const double q[4] = {s.a.x1 - r.x_lo, r.x_hi - s.a.x1, s.a.x2 - r.y_lo, r.y_hi - s.a.x2};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return std::nullopt;
    } else {
      const double t = q[i] / p[i];
      if (p[i] < 0.0) {
        t0 = std::max(t0, t);
      } else {
        t1 = std::min(t1, t);
      }
    }
  }
  if (t0 > t1) return std::nullopt;
  return Segment{s.a + t0 * d, s.a + t1 * d};
}

/// True when p lies on the boundary of r (within tol).
inline bool on_boundary(const Rect& r, Point2 p, double tol) {
  const bool in_x = p.x1 >= r.x_lo - tol && p.x1 <= r.x_hi + tol;
  const bool in_y = p.x2 >= r.y_lo - tol && p.x2 <= r.y_hi + tol;
  if (!in_x || !in_y) return false;
  return std::abs(p.x1 - r.x_lo) <= tol || std::abs(p.x1 - r.x_hi) <= tol ||
         std::abs(p.x2 - r.y_lo) <= tol || std::abs(p.x2 - r.y_hi) <= tol;
}

}  // namespace latcomm

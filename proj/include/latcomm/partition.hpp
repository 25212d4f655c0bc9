#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "latcomm/entropy.hpp"
#include "latcomm/geometry.hpp"

namespace latcomm {

/// p: cell lies in {f = 1}; q: cell lies in {f = 0}; undecided: residual.
enum class CellLabel { p, q, undecided };

/// MinIndicator: f = 1 iff x1 >= x2. Quadrant: f = 1 iff x1 > 1/2 and x2 > 1/2.
enum class TargetFunction { MinIndicator, Quadrant };

struct LabeledCell {
  Rect rect;
  CellLabel label = CellLabel::undecided;
};

inline constexpr double kPartitionTol = 1e-12;

/// Rectangular partition of the unit square. Cells may share edges; their
/// interiors are disjoint and the areas sum to one.
struct LabeledPartition {
  std::vector<LabeledCell> cells;

  std::vector<double> probabilities() const {
    std::vector<double> out;
    out.reserve(cells.size());
    for (const auto& c : cells) out.push_back(c.rect.area());
    return out;
  }

  std::vector<double> probabilities(CellLabel label) const {
    std::vector<double> out;
    for (const auto& c : cells) {
      if (c.label == label) out.push_back(c.rect.area());
    }
    return out;
  }

  double total() const {
    double s = 0.0;
    for (const auto& c : cells) s += c.rect.area();
    return s;
  }

  bool has_residual() const {
    return std::any_of(cells.begin(), cells.end(),
                       [](const LabeledCell& c) { return c.label == CellLabel::undecided; });
  }
};

/// Throws std::invalid_argument unless every rectangle is proper, inside the
/// unit square, and the areas sum to one.
inline void validate(const LabeledPartition& part) {
  for (const auto& c : part.cells) {
    const Rect& r = c.rect;
    if (!r.non_degenerate() || r.x_lo < -kPartitionTol || r.y_lo < -kPartitionTol ||
        r.x_hi > 1.0 + kPartitionTol || r.y_hi > 1.0 + kPartitionTol) {
      throw std::invalid_argument("partition: cell outside the unit square or empty");
    }
  }
  if (std::abs(part.total() - 1.0) > kPartitionTol) {
    throw std::invalid_argument("partition: cell areas sum to " + std::to_string(part.total()));
  }
}

/// Mass of a cell under the uniform measure on the unit square.
inline double cell_probability(const Rect& r) { return r.area(); }

inline double partition_entropy(const LabeledPartition& part) {
  const auto probs = part.probabilities();
  return shannon_entropy(probs);
}

/// Area of r within {x1 >= x2}.
inline double area_below_diagonal(const Rect& r) {
  // Integral over x1 in [x_lo, x_hi] of clamp(x1 - y_lo, 0, height).
  const double h = r.height();
  auto ramp = [&](double t) {
    const double s = t - r.y_lo;
    if (s <= 0.0) return 0.0;
    if (s <= h) return 0.5 * s * s;
    return 0.5 * h * h + h * (s - h);
  };
  return ramp(r.x_hi) - ramp(r.x_lo);
}

namespace detail {

inline bool inside_f1(const Rect& r, TargetFunction f) {
  switch (f) {
    case TargetFunction::MinIndicator:
      return r.y_hi <= r.x_lo + kPartitionTol;
    case TargetFunction::Quadrant:
      return r.x_lo >= 0.5 - kPartitionTol && r.y_lo >= 0.5 - kPartitionTol;
  }
  return false;
}

inline bool inside_f0(const Rect& r, TargetFunction f) {
  switch (f) {
    case TargetFunction::MinIndicator:
      return r.x_hi <= r.y_lo + kPartitionTol;
    case TargetFunction::Quadrant:
      return r.x_hi <= 0.5 + kPartitionTol || r.y_hi <= 0.5 + kPartitionTol;
  }
  return false;
}

}  // namespace detail

/// Checks every decided cell's interior against the level sets of f.
/// Undecided cells are not counted as errors.
inline bool is_zero_error(const LabeledPartition& part, TargetFunction f) {
  for (const auto& c : part.cells) {
    if (c.label == CellLabel::p && !detail::inside_f1(c.rect, f)) return false;
    if (c.label == CellLabel::q && !detail::inside_f0(c.rect, f)) return false;
  }
  return true;
}

inline const char* to_string(CellLabel l) {
  switch (l) {
    case CellLabel::p:
      return "p";
    case CellLabel::q:
      return "q";
    case CellLabel::undecided:
      return "u";
  }
  return "u";
}

inline CellLabel label_from_string(const std::string& s) {
  if (s == "p") return CellLabel::p;
  if (s == "q") return CellLabel::q;
  if (s == "u") return CellLabel::undecided;
  throw std::invalid_argument("partition: unknown cell label '" + s + "'");
}

}  // namespace latcomm

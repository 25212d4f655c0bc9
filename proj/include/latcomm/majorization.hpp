#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "latcomm/entropy.hpp"
#include "latcomm/partition.hpp"

namespace latcomm {

/// p majorizes q: after sorting both nonincreasing, every prefix sum of p is
/// at least the matching prefix sum of q. Shorter vectors are zero-padded.
inline bool majorizes(std::span<const double> p, std::span<const double> q, double tol = 1e-12) {
  const double tp = std::accumulate(p.begin(), p.end(), 0.0);
  const double tq = std::accumulate(q.begin(), q.end(), 0.0);
  if (std::abs(tp - tq) > tol) {
    throw std::invalid_argument("majorizes: totals differ (" + std::to_string(tp) + " vs " +
                                std::to_string(tq) + ")");
  }
  auto ps = sorted_nonincreasing(p);
  auto qs = sorted_nonincreasing(q);
  const std::size_t n = std::max(ps.size(), qs.size());
  ps.resize(n, 0.0);
  qs.resize(n, 0.0);
  double sp = 0.0;
  double sq = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sp += ps[k];
    sq += qs[k];
    if (sp < sq - tol) return false;
  }
  return true;
}

/// Grows the most probable p-cell [a,b]x[c,v] to [v,1]x[0,v], whose
/// upper-left corner sits on the diagonal and lower-right corner at (1,0).
/// Every other cell keeps only its part outside the grown square; cells
/// swallowed whole are dropped. Ties for the largest cell go to the
/// lexicographically smallest (x_lo, y_lo) corner.
///
/// Throws std::invalid_argument if the input has no p-cell, or if the grown
/// square would cut an undecided cell into an L-shape (its remainder is then
/// not a rectangle).
inline LabeledPartition readjust_max_rectangle(const LabeledPartition& part,
                                               TargetFunction f = TargetFunction::MinIndicator) {
  if (f != TargetFunction::MinIndicator) {
    throw std::invalid_argument("readjust_max_rectangle: only defined for the min indicator");
  }
  std::ptrdiff_t best = -1;
  for (std::size_t i = 0; i < part.cells.size(); ++i) {
    const auto& c = part.cells[i];
    if (c.label != CellLabel::p) continue;
    if (best < 0) {
      best = static_cast<std::ptrdiff_t>(i);
      continue;
    }
    const Rect& b = part.cells[static_cast<std::size_t>(best)].rect;
    const double a = c.rect.area();
    if (a > b.area() ||
        (a == b.area() && std::pair(c.rect.x_lo, c.rect.y_lo) < std::pair(b.x_lo, b.y_lo))) {
      best = static_cast<std::ptrdiff_t>(i);
    }
  }
  if (best < 0) throw std::invalid_argument("readjust_max_rectangle: no p-cell");

  const double v = part.cells[static_cast<std::size_t>(best)].rect.y_hi;
  const Rect grown{v, 1.0, 0.0, v};

  LabeledPartition out;
  out.cells.reserve(part.cells.size());
  for (std::size_t i = 0; i < part.cells.size(); ++i) {
    if (static_cast<std::ptrdiff_t>(i) == best) {
      out.cells.push_back({grown, CellLabel::p});
      continue;
    }
    const auto& c = part.cells[i];
    const Rect& r = c.rect;
    if (grown.overlap_area(r) <= 0.0) {
      out.cells.push_back(c);
      continue;
    }
    const bool left_part = r.x_lo < v;   // strip with x1 < v
    const bool upper_part = r.y_hi > v;  // strip with x2 > v
    if (left_part && upper_part) {
      throw std::invalid_argument("readjust_max_rectangle: grown square would split cell into an L-shape");
    }
    Rect rest = r;
    if (left_part) rest.x_hi = std::min(r.x_hi, v);
    if (upper_part) rest.y_lo = std::max(r.y_lo, v);
    if (!left_part && !upper_part) continue;  // swallowed whole
    if (rest.non_degenerate()) out.cells.push_back({rest, c.label});
  }
  return out;
}

}  // namespace latcomm

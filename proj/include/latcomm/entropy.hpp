#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

namespace latcomm {

/// Shannon entropy in bits of a list of cell masses, with 0 log 0 = 0.
/// The masses are used as given; they are not renormalized.
inline double shannon_entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

inline double shannon_entropy(std::initializer_list<double> probs) {
  return shannon_entropy(std::span<const double>(probs.begin(), probs.size()));
}

/// Entropy of the distribution obtained by normalizing `masses` to sum 1.
inline double normalized_entropy(std::span<const double> masses) {
  const double total = std::accumulate(masses.begin(), masses.end(), 0.0);
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double m : masses) {
    if (m > 0.0) {
      const double p = m / total;
      h -= p * std::log2(p);
    }
  }
  return h;
}

inline std::vector<double> sorted_nonincreasing(std::span<const double> probs) {
  std::vector<double> out(probs.begin(), probs.end());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace latcomm

#pragma once

// Reference implementations used only by the tests. None of these call into
// the library code they are used to check.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

/// Lattice point c1*(1,0) + c2*(c,h) closest to (x, y), searching every
/// coefficient pair in [-r, r]^2. Ties keep the lexicographically smallest pair.
struct Nearest {
  long c1 = 0;
  long c2 = 0;
  double dist2 = std::numeric_limits<double>::infinity();
  double runner_up = std::numeric_limits<double>::infinity();
};

inline Nearest brute_force_nearest(double c, double h, double x, double y, long r = 3) {
  Nearest best;
  for (long a = -r; a <= r; ++a) {
    for (long b = -r; b <= r; ++b) {
      const double dx = x - (a + b * c);
      const double dy = y - b * h;
      const double d = dx * dx + dy * dy;
      if (d < best.dist2) {
        best.runner_up = best.dist2;
        best = {a, b, d, best.runner_up};
      } else if (d < best.runner_up) {
        best.runner_up = d;
      }
    }
  }
  return best;
}

/// Voronoi cell area by counting grid points whose nearest lattice point is
/// the origin, on an n x n grid over [-L, L]^2.
inline double voronoi_area_by_counting(double c, double h, int n, double L) {
  long inside = 0;
  const double step = 2.0 * L / n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = -L + (i + 0.5) * step;
      const double y = -L + (j + 0.5) * step;
      const auto nn = brute_force_nearest(c, h, x, y);
      if (nn.c1 == 0 && nn.c2 == 0) ++inside;
    }
  }
  return inside * step * step;
}

/// Exact truncated bit-exchange entropy as a fraction num / 2^d:
/// sum_{k<=d} 2^-k 2k + 2^-d 2d.
struct Dyadic {
  std::uint64_t num = 0;
  unsigned log2_den = 0;
  double value() const { return std::ldexp(static_cast<double>(num), -static_cast<int>(log2_den)); }
};

inline Dyadic truncated_bit_exchange_entropy(unsigned d) {
  std::uint64_t num = 0;
  for (unsigned k = 1; k <= d; ++k) num += (std::uint64_t{2} * k) << (d - k);
  num += 2 * d;
  return {num, d};
}

/// Entropy in bits with an independent accumulation order (largest first).
inline double entropy_bits(std::vector<double> p) {
  std::sort(p.begin(), p.end(), std::greater<>());
  long double h = 0.0L;
  for (double x : p) {
    if (x > 0.0) h -= static_cast<long double>(x) * std::log2(static_cast<long double>(x));
  }
  return static_cast<double>(h);
}

/// Cover area of a staircase with corners x (nondecreasing), by integrating
/// the step function 1 - x_i over (x_{i-1}, x_i] with a fine midpoint rule.
inline double staircase_area_by_integration(const std::vector<double>& x, int n = 200000) {
  double a = 0.0;
  const double dt = 1.0 / n;
  for (int k = 0; k < n; ++k) {
    const double t = (k + 0.5) * dt;
    const auto it = std::lower_bound(x.begin(), x.end(), t);
    if (it != x.end()) a += (1.0 - *it) * dt;
  }
  return a;
}

/// Projected gradient ascent on the cover area sum (x_i - x_{i-1})(1 - x_i),
/// gradient taken by central differences.
inline std::vector<double> maximize_cover_by_gradient(std::size_t m, int iterations = 200000) {
  auto area = [](const std::vector<double>& x) {
    double a = 0.0;
    double prev = 0.0;
    for (double xi : x) {
      a += (xi - prev) * (1.0 - xi);
      prev = xi;
    }
    return a;
  };
  std::mt19937_64 rng(m);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  std::vector<double> x(m);
  for (auto& xi : x) xi = u(rng);
  std::sort(x.begin(), x.end());
  const double eta = 0.2;
  const double eps = 1e-6;
  for (int it = 0; it < iterations; ++it) {
    std::vector<double> g(m);
    for (std::size_t i = 0; i < m; ++i) {
      auto xp = x;
      auto xm = x;
      xp[i] += eps;
      xm[i] -= eps;
      g[i] = (area(xp) - area(xm)) / (2 * eps);
    }
    double move = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double next = std::clamp(x[i] + eta * g[i], 0.0, 1.0);
      move = std::max(move, std::abs(next - x[i]));
      x[i] = next;
    }
    std::sort(x.begin(), x.end());
    if (move < 1e-15) break;
  }
  return x;
}

/// True when p majorizes q, by comparing every partial sum of every
/// k-largest selection (sorting done here, independently).
inline bool majorizes(std::vector<double> p, std::vector<double> q, double tol = 1e-12) {
  std::sort(p.begin(), p.end(), std::greater<>());
  std::sort(q.begin(), q.end(), std::greater<>());
  const std::size_t n = std::max(p.size(), q.size());
  p.resize(n, 0.0);
  q.resize(n, 0.0);
  long double sp = 0.0L;
  long double sq = 0.0L;
  for (std::size_t k = 0; k < n; ++k) {
    sp += p[k];
    sq += q[k];
    if (sp + tol < sq) return false;
  }
  return true;
}

/// Random probability vector of length n.
inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  for (auto& x : p) x = e(rng);
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& x : p) x /= s;
  return p;
}

/// q = p after a random sequence of Robin Hood transfers (moving mass from a
/// larger to a smaller entry without reversing their order), so p majorizes q.
inline std::vector<double> robin_hood(std::mt19937_64& rng, std::vector<double> p, int moves) {
  std::uniform_int_distribution<std::size_t> pick(0, p.size() - 1);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (int k = 0; k < moves; ++k) {
    std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    if (p[i] < p[j]) std::swap(i, j);
    const double t = 0.5 * (p[i] - p[j]) * frac(rng);
    p[i] -= t;
    p[j] += t;
  }
  return p;
}

/// Leading equal binary digits of x1, x2 in [0, 1) and f = 1 when x1 > x2.
/// Doubling and subtracting 1 from a value in [1, 2) are exact in binary
/// floating point, so the digits are the exact terminating expansion.
struct FirstDifference {
  int equal_bits = 0;
  int f = 0;
  bool identical = false;
};

inline FirstDifference first_difference(double x1, double x2) {
  FirstDifference r;
  for (int k = 0; k < 1100; ++k) {
    x1 *= 2.0;
    x2 *= 2.0;
    const int a = x1 >= 1.0;
    const int b = x2 >= 1.0;
    if (a != b) {
      r.f = a > b;
      return r;
    }
    x1 -= a;
    x2 -= b;
    ++r.equal_bits;
  }
  r.identical = true;
  return r;
}

}  // namespace oracle

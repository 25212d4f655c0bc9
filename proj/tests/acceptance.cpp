// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "latcomm/cli.hpp"
#include "latcomm/latcomm.hpp"
#include "oracles.hpp"
#include "random_partitions.hpp"

using namespace latcomm;
using std::numbers::pi;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void run(int id, const char* title, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  std::printf("criterion %d %s: %s | %s (%.0f ms)\n", id, o.pass ? "PASS" : "FAIL", title, o.detail.c_str(), ms);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) { return format_double(x); }

}  // namespace

int main() {
  run(1, "four-bit optimum", [] {
    const auto t0 = std::chrono::steady_clock::now();
    cli::CommandConfig c;
    c.subcommand = cli::Subcommand::verify;
    const auto report = cli::dispatch(c);
    const double total = report.results["thm5"]["total_bits"].get<double>();
    const double rate30 = sum_rate(bit_exchange_protocol(30));
    const double secs = elapsed_s(t0);
    const bool ok = report.exit_code == 0 && total == 4.0 && std::abs(rate30 - 4.0) <= 1e-7 && secs < 1.0;
    return Verdict{ok, "total_bits=" + fmt(total) + " rate@30=" + fmt(rate30) + " verify_exit=" +
                           std::to_string(report.exit_code) + " t=" + fmt(secs) + "s"};
  });

  run(2, "achievability by simulation", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto s = monte_carlo(bit_exchange_protocol(30), 1000000, kDefaultSeed);
    const double secs = elapsed_s(t0);
    const bool ok = std::abs(s.mean_bits - 4.0) <= 0.01 && std::abs(s.mean_rounds - 2.0) <= 0.005 && secs < 10.0;
    return Verdict{ok, "samples=1e6 seed=0x5EED mean_bits=" + fmt(s.mean_bits) + " mean_rounds=" +
                           fmt(s.mean_rounds) + " t=" + fmt(secs) + "s"};
  });

  run(3, "entropy-ratio minimum", [] {
    const auto m = minimize_entropy_ratio(1e-6);
    const bool ok = std::abs(m.v_star - 0.5) <= 1e-6 && std::abs(m.value - 3.0) <= 1e-9;
    return Verdict{ok, "v*=" + fmt(m.v_star) + " min=" + fmt(m.value)};
  });

  run(4, "one-round quadrant optimum", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto vertex = quadrant_min_entropy();
    const auto grid = quadrant_grid_search(64);
    const double secs = elapsed_s(t0);
    const bool ok = vertex.entropy_bits == 1.5 && vertex.vertices_feasible &&
                    grid.min_entropy >= 1.5 - 1e-9 && secs < 30.0;
    return Verdict{ok, "vertex=" + fmt(vertex.entropy_bits) + " grid_min=" + fmt(grid.min_entropy) +
                           " grid_points=" + std::to_string(grid.feasible_points) + " t=" + fmt(secs) + "s"};
  });

  run(5, "staircase maximum", [] {
    double worst_area = 0.0;
    double worst_corner = 0.0;
    for (std::size_t m = 1; m <= 10; ++m) {
      const auto num = maximize_staircase_numerically(m);
      worst_area = std::max(worst_area, std::abs(num.area - static_cast<double>(m) / (2.0 * (m + 1))));
      for (std::size_t i = 0; i < m; ++i) {
        worst_corner = std::max(worst_corner, std::abs(num.profile.corners()[i] - (i + 1.0) / (m + 1)));
      }
    }
    const bool ok = worst_area <= 1e-9 && worst_corner <= 1e-6;
    return Verdict{ok, "m=1..10 max|area-m/(2(m+1))|=" + fmt(worst_area) + " max|x_i-i/(m+1)|=" + fmt(worst_corner)};
  });

  run(6, "sum rate equals partition entropy", [] {
    double worst = 0.0;
    auto check = [&](const ProtocolTree& tree) {
      const double rate = sum_rate(tree);
      const double h = oracle::entropy_bits(induced_partition(tree).probabilities());
      worst = std::max(worst, std::abs(rate - h));
    };
    for (std::size_t d = 1; d <= 12; ++d) check(bit_exchange_protocol(d));
    check(quadrant_one_round_protocol());
    return Verdict{worst <= 1e-12, "bit exchange d=1..12 and one-round quadrant, max gap=" + fmt(worst)};
  });

  run(7, "closed-form truncation", [] {
    double worst = 0.0;
    for (unsigned d = 1; d <= 12; ++d) {
      worst = std::max(worst, std::abs(sum_rate(bit_exchange_protocol(d)) - oracle::truncated_bit_exchange_entropy(d).value()));
    }
    const double s1 = sum_rate(bit_exchange_protocol(1));
    const double s2 = sum_rate(bit_exchange_protocol(2));
    const bool ok = worst < 1e-12 && s1 == 2.0 && s2 == 3.0;
    return Verdict{ok, "d=1..12 max gap=" + fmt(worst) + " S1=" + fmt(s1) + " S2=" + fmt(s2)};
  });

  run(8, "lattice geometry properties", [] {
    std::mt19937_64 rng(0x5EED);
    std::uniform_real_distribution<double> rho(0.8, 2.0);
    std::uniform_real_distribution<double> theta(pi / 3, pi / 2);
    double worst_area = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Lattice2D lat(rho(rng), theta(rng));
      worst_area = std::max(worst_area, std::abs(voronoi_cell(lat).area() - lat.rho() * std::sin(lat.theta())));
    }

    const Lattice2D hex(1.0, pi / 3);
    const auto sub = babai_subdivision(hex);
    int error_free = 0;
    double tiled = 0.0;
    for (const auto& c : sub.cells) {
      error_free += c.error_free;
      tiled += c.rect.area();
    }
    const double tiling_gap = std::abs(tiled - sub.babai_cell.area());

    std::uniform_real_distribution<double> ux(sub.babai_cell.x_lo, sub.babai_cell.x_hi);
    std::uniform_real_distribution<double> uy(sub.babai_cell.y_lo, sub.babai_cell.y_hi);
    int in_error_free = 0;
    int disagree = 0;
    for (int i = 0; i < 100000; ++i) {
      const Point2 x{ux(rng), uy(rng)};
      const SubCell* cell = sub.find(x);
      if (!cell || !cell->error_free) continue;
      ++in_error_free;
      const auto babai = nearest_plane_point(hex, x);
      const auto bf = oracle::brute_force_nearest(hex.shear(), hex.height(), x.x1, x.x2);
      if (babai.coeffs[0] != bf.c1 || babai.coeffs[1] != bf.c2) ++disagree;
    }

    const auto rates = round_rates(sub);
    const double mass_gap = std::abs((1 - rates.P0) * (1 - rates.Q0) - crossed_mass(sub));
    const auto mc = monte_carlo(babai_to_voronoi_protocol(sub, 30), 200000, kDefaultSeed);
    const double rounds_gap = std::abs(mc.mean_rounds - rates.N_bar);

    const bool ok = worst_area <= 1e-9 && disagree == 0 && sub.cells.size() == 7 && error_free == 3 &&
                    tiling_gap <= 1e-12 && mass_gap <= 1e-12 && rounds_gap <= 0.01;
    return Verdict{ok, "voronoi area gap=" + fmt(worst_area) + "; babai/exact disagreements=" +
                           std::to_string(disagree) + "/" + std::to_string(in_error_free) +
                           "; cells=" + std::to_string(sub.cells.size()) + " error_free=" + std::to_string(error_free) +
                           " tiling gap=" + fmt(tiling_gap) + "; N_bar=" + fmt(rates.N_bar) +
                           " crossed mass gap=" + fmt(mass_gap) + " MC rounds=" + fmt(mc.mean_rounds)};
  });

  run(9, "majorization", [] {
    std::mt19937_64 rng(0x5EED);
    int violations = 0;
    for (int i = 0; i < 10000; ++i) {
      const auto p = oracle::random_simplex(rng, 2 + i % 9);
      const auto q = oracle::robin_hood(rng, p, 1 + i % 5);
      if (!majorizes(p, q) || shannon_entropy(p) > shannon_entropy(q) + 1e-12) ++violations;
    }
    int bad_moves = 0;
    for (int i = 0; i < 1000; ++i) {
      const auto in = testing_support::random_zero_error_partition(rng, 1 + i % 4);
      const auto out = readjust_max_rectangle(in);
      if (!oracle::majorizes(out.probabilities(), in.probabilities()) ||
          !is_zero_error(out, TargetFunction::MinIndicator)) {
        ++bad_moves;
      }
    }
    return Verdict{violations == 0 && bad_moves == 0, "entropy violations=" + std::to_string(violations) +
                                                          "/10000 bad readjustments=" + std::to_string(bad_moves) +
                                                          "/1000"};
  });

  return failures == 0 ? 0 : 1;
}

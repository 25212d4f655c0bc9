#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "latcomm/babai_subdivision.hpp"
#include "latcomm/converse.hpp"
#include "latcomm/lattice.hpp"
#include "latcomm/monte_carlo.hpp"
#include "latcomm/protocol.hpp"
#include "latcomm/serialization.hpp"
#include "latcomm/staircase.hpp"

namespace latcomm::cli {

/// Bad or missing arguments; maps to exit status 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Subcommand {
  simulate,
  lattice_rates,
  lattice_nearest,
  entropy_ratio,
  optimize_ratio,
  partition_show,
  plot_data,
  verify,
};

enum class OutputFormat { json, csv, human };

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

struct CommandConfig {
  Subcommand subcommand = Subcommand::verify;
  std::optional<double> rho;
  std::optional<double> theta;
  std::optional<double> x;
  std::optional<double> y;
  std::optional<double> v;
  std::uint64_t samples = 1000000;
  std::uint64_t seed = kDefaultSeed;
  std::size_t max_depth = 30;
  double tolerance = 1e-6;
  int resolution = 64;
  OutputFormat format = OutputFormat::json;
  std::string protocol = "bit-exchange";
  std::string input_path;        ///< partition-show: partition JSON to load
  std::string transcripts_path;  ///< simulate: optional transcript dump
  std::string plot;              ///< plot-data: ratio-curve | convergence | subdivision
  std::string verify_target = "converse";
  unsigned workers = 0;          ///< 0: LATCOMM_THREADS or hardware concurrency
};

struct Report {
  std::string subcommand;
  json inputs = json::object();
  json results = json::object();
  std::optional<std::string> csv;  ///< tabular payload, when the command has one
  double elapsed_ms = 0.0;
  int exit_code = kExitOk;
};

inline const char* subcommand_name(Subcommand s) {
  switch (s) {
    case Subcommand::simulate:
      return "simulate";
    case Subcommand::lattice_rates:
      return "lattice-rates";
    case Subcommand::lattice_nearest:
      return "lattice-nearest";
    case Subcommand::entropy_ratio:
      return "entropy-ratio";
    case Subcommand::optimize_ratio:
      return "optimize-ratio";
    case Subcommand::partition_show:
      return "partition-show";
    case Subcommand::plot_data:
      return "plot-data";
    case Subcommand::verify:
      return "verify";
  }
  return "?";
}

namespace detail {

inline double require(const std::optional<double>& v, const char* flag, Subcommand s) {
  if (!v) throw UsageError(std::string(subcommand_name(s)) + ": missing required flag " + flag);
  return *v;
}

inline Lattice2D lattice_from(const CommandConfig& c) {
  return Lattice2D(require(c.rho, "--rho", c.subcommand), require(c.theta, "--theta", c.subcommand));
}

inline json point_json(Point2 p) { return json::array({p.x1, p.x2}); }

inline std::string csv_row(std::initializer_list<std::string> cols) {
  std::string out;
  for (const auto& c : cols) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out + '\n';
}

}  // namespace detail

/// CSV with header row. ratio-curve: v = k/resolution for k = 1..resolution-1.
/// convergence: truncated bit-exchange entropy for depth 1..min(resolution, 52).
/// subdivision: the cells of the Babai refinement of `lattice`.
inline std::string emit_plot_data(const std::string& which, int resolution,
                                  const std::optional<Lattice2D>& lattice = std::nullopt) {
  if (resolution < 16) throw UsageError("plot-data: --resolution must be at least 16");
  std::string out;
  if (which == "ratio-curve") {
    out += "v,ratio_bits\n";
    for (int k = 1; k < resolution; ++k) {
      const double v = static_cast<double>(k) / resolution;
      out += detail::csv_row({format_double(v), format_double(entropy_ratio(v))});
    }
  } else if (which == "convergence") {
    out += "depth,entropy_bits\n";
    const auto last = std::min<std::size_t>(static_cast<std::size_t>(resolution), kMaxBitExchangeDepth);
    for (std::size_t d = 1; d <= last; ++d) {
      out += detail::csv_row({std::to_string(d), format_double(sum_rate(bit_exchange_protocol(d)))});
    }
  } else if (which == "subdivision") {
    if (!lattice) throw UsageError("plot-data: subdivision needs --rho and --theta");
    const auto sub = babai_subdivision(*lattice);
    const double total = sub.babai_cell.area();
    out += "x_lo,x_hi,y_lo,y_hi,error_free,prob\n";
    for (const auto& c : sub.cells) {
      out += detail::csv_row({format_double(c.rect.x_lo), format_double(c.rect.x_hi), format_double(c.rect.y_lo),
                              format_double(c.rect.y_hi), c.error_free ? "true" : "false",
                              format_double(c.rect.area() / total)});
    }
  } else {
    throw UsageError("plot-data: --which must be ratio-curve, convergence or subdivision");
  }
  return out;
}

/// Runs every lower-bound check and collects the numbers behind them.
inline json verify_converse(bool& all_ok) {
  json out;  // section keys are fixed by the output format

  const auto vertex = quadrant_min_entropy();
  const auto grid = quadrant_grid_search(64);
  const bool quadrant_ok = vertex.entropy_bits == 1.5 && vertex.vertices_feasible &&
                         grid.min_entropy >= 1.5 - 1e-9;
  out["example1"] = {{"p_star", vertex.p_star},
                     {"q_star", vertex.q_star},
                     {"entropy_bits", vertex.entropy_bits},
                     {"grid_min_entropy", grid.min_entropy},
                     {"grid_feasible_points", grid.feasible_points},
                     {"pass", quadrant_ok}};

  double worst_area = 0.0;
  double worst_corner = 0.0;
  for (std::size_t m = 1; m <= 10; ++m) {
    const auto closed = staircase_max(m);
    const auto numeric = maximize_staircase_numerically(m);
    worst_area = std::max(worst_area, std::abs(numeric.area - staircase_bound(m)));
    worst_area = std::max(worst_area, std::abs(closed.area - staircase_bound(m)));
    for (std::size_t i = 0; i < m; ++i) {
      worst_corner = std::max(worst_corner, std::abs(numeric.profile.corners()[i] - closed.profile.corners()[i]));
    }
  }
  bool partitions_ok = true;
  for (std::size_t d = 1; d <= 12; ++d) {
    partitions_ok = partitions_ok && satisfies_cell_sum_bounds(induced_partition(bit_exchange_protocol(d)));
  }
  const bool staircase_ok = worst_area <= 1e-9 && worst_corner <= 1e-6 && partitions_ok;
  out["thm3"] = {{"m_max", 10},
                 {"max_area_error", worst_area},
                 {"max_corner_error", worst_corner},
                 {"bit_exchange_partitions_ok", partitions_ok},
                 {"pass", staircase_ok}};

  const auto ratio = minimize_entropy_ratio(1e-6);
  const auto four = assemble_four_bits();
  const bool ratio_ok = std::abs(ratio.v_star - 0.5) <= 1e-6 && std::abs(ratio.value - 3.0) <= 1e-9 &&
                       ratio.unique && four.ok;
  out["thm5"] = {{"v_star", ratio.v_star},
                 {"ratio_min", ratio.value},
                 {"total_bits", four.total_bits},
                 {"bit_exchange_rate_depth30", four.bit_exchange_rate},
                 {"pass", ratio_ok}};

  all_ok = quadrant_ok && staircase_ok && ratio_ok;
  out["pass"] = all_ok;
  return out;
}

inline Report dispatch(const CommandConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  Report r;
  r.subcommand = subcommand_name(c.subcommand);

  switch (c.subcommand) {
    case Subcommand::simulate: {
      std::optional<ProtocolTree> tree;
      if (c.protocol == "bit-exchange") {
        tree = bit_exchange_protocol(c.max_depth);
      } else if (c.protocol == "lattice") {
        tree = babai_to_voronoi_protocol(babai_subdivision(detail::lattice_from(c)), c.max_depth);
      } else {
        throw UsageError("simulate: --protocol must be bit-exchange or lattice");
      }
      if (c.samples == 0) throw UsageError("simulate: --samples must be at least 1");
      r.inputs = {{"protocol", c.protocol}, {"samples", c.samples}, {"seed", c.seed}, {"max_depth", c.max_depth}};
      const RunStats s = monte_carlo(*tree, c.samples, c.seed, c.workers);
      r.results = {{"samples", s.sample_count}, {"mean_bits", s.mean_bits}, {"mean_rounds", s.mean_rounds},
                   {"seed", s.seed}};
      if (!c.transcripts_path.empty()) {
        std::ofstream dump(c.transcripts_path);
        if (!dump) throw UsageError("simulate: cannot open " + c.transcripts_path);
        for_each_sample(*tree, c.samples, c.seed,
                        [&](double, double, const Transcript& t) { dump << format_transcript(t) << '\n'; });
      }
      break;
    }
    case Subcommand::lattice_rates: {
      const Lattice2D lat = detail::lattice_from(c);
      const auto sub = babai_subdivision(lat);
      const auto rates = round_rates(sub);
      r.inputs = {{"rho", lat.rho()}, {"theta", lat.theta()}};
      r.results = {{"Q", rates.Q},         {"P", rates.P},         {"Q0", rates.Q0},
                   {"P0", rates.P0},       {"R_bar", rates.R_bar}, {"N_bar", rates.N_bar},
                   {"crossed_mass", crossed_mass(sub)}, {"subdivision", subdivision_to_json(sub)}};
      break;
    }
    case Subcommand::lattice_nearest: {
      const Lattice2D lat = detail::lattice_from(c);
      const Point2 x{detail::require(c.x, "--x", c.subcommand), detail::require(c.y, "--y", c.subcommand)};
      const auto babai = nearest_plane_point(lat, x);
      const auto exact = nearest_lattice_point(lat, x);
      r.inputs = {{"rho", lat.rho()}, {"theta", lat.theta()}, {"x", x.x1}, {"y", x.x2}};
      r.results = {{"coeffs", exact.coeffs},
                   {"point", detail::point_json(exact.point)},
                   {"babai_coeffs", babai.coeffs},
                   {"babai_point", detail::point_json(babai.point)}};
      break;
    }
    case Subcommand::entropy_ratio: {
      const double v = detail::require(c.v, "--v", c.subcommand);
      if (!(v > 0.0 && v < 1.0)) throw UsageError("entropy-ratio: --v must lie in (0, 1)");
      r.inputs = {{"v", v}};
      r.results = {{"v", v}, {"ratio", entropy_ratio(v)}};
      break;
    }
    case Subcommand::optimize_ratio: {
      if (!(c.tolerance > 0.0 && c.tolerance <= 1e-3)) throw UsageError("optimize-ratio: --tolerance must lie in (0, 1e-3]");
      const auto m = minimize_entropy_ratio(c.tolerance);
      r.inputs = {{"tolerance", c.tolerance}};
      r.results = {{"v_star", m.v_star}, {"ratio_min", m.value}, {"unique", m.unique}};
      break;
    }
    case Subcommand::partition_show: {
      LabeledPartition part;
      if (!c.input_path.empty()) {
        std::ifstream in(c.input_path);
        if (!in) throw UsageError("partition-show: cannot open " + c.input_path);
        try {
          part = partition_from_json(json::parse(in));
        } catch (const json::exception& e) {
          throw UsageError(std::string("partition-show: ") + e.what());
        } catch (const std::invalid_argument& e) {
          throw UsageError(std::string("partition-show: ") + e.what());
        }
        r.inputs = {{"in", c.input_path}};
      } else {
        const double v = c.v.value_or(0.5);
        if (!(v > 0.0 && v < 1.0)) throw UsageError("partition-show: --v must lie in (0, 1)");
        if (c.max_depth < 1 || c.max_depth > 16) throw UsageError("partition-show: --max-depth must lie in [1, 16]");
        part = self_similar_partition(v, c.max_depth);
        r.inputs = {{"v", v}, {"max_depth", c.max_depth}};
      }
      r.results = partition_to_json(part);
      r.results["entropy_bits"] = partition_entropy(part);
      r.results["zero_error"] = is_zero_error(part, TargetFunction::MinIndicator);
      r.results["cell_sum_bounds"] = satisfies_cell_sum_bounds(part);
      break;
    }
    case Subcommand::plot_data: {
      std::optional<Lattice2D> lat;
      if (c.rho && c.theta) lat = Lattice2D(*c.rho, *c.theta);
      r.inputs = {{"which", c.plot}, {"resolution", c.resolution}};
      r.csv = emit_plot_data(c.plot, c.resolution, lat);
      json rows = json::array();
      std::istringstream lines(*r.csv);
      std::string line;
      std::getline(lines, line);
      r.results["header"] = line;
      while (std::getline(lines, line)) rows.push_back(line);
      r.results["rows"] = rows;
      break;
    }
    case Subcommand::verify: {
      if (c.verify_target != "converse") throw UsageError("verify: unknown target '" + c.verify_target + "'");
      bool ok = false;
      r.inputs = {{"target", c.verify_target}};
      r.results = verify_converse(ok);
      if (!ok) r.exit_code = kExitVerificationFailed;
      break;
    }
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

namespace detail {

inline std::string scalar_text(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

inline void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
  } else {
    out.emplace_back(prefix, scalar_text(j));
  }
}

}  // namespace detail

/// Deterministic rendering: JSON with sorted keys, CSV with a header row,
/// or "key: value" lines. Timing is not part of the output.
inline std::string render(const Report& r, OutputFormat f) {
  switch (f) {
    case OutputFormat::json:
      return r.results.dump(2) + "\n";
    case OutputFormat::csv: {
      if (r.csv) return *r.csv;
      std::vector<std::pair<std::string, std::string>> kv;
      detail::flatten(r.results, "", kv);
      std::string out = "key,value\n";
      for (const auto& [k, v] : kv) {
        out += k + ",";
        out += v.find(',') != std::string::npos ? "\"" + v + "\"" : v;
        out += '\n';
      }
      return out;
    }
    case OutputFormat::human: {
      if (r.csv) return *r.csv;
      std::vector<std::pair<std::string, std::string>> kv;
      detail::flatten(r.results, "", kv);
      std::string out = r.subcommand + "\n";
      for (const auto& [k, v] : kv) out += "  " + k + ": " + v + "\n";
      return out;
    }
  }
  return {};
}

}  // namespace latcomm::cli

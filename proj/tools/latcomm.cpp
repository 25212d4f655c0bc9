#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "latcomm/cli.hpp"

using namespace latcomm::cli;

namespace {

void add_lattice(CLI::App* app, CommandConfig& c) {
  app->add_option("--rho", c.rho, "length of the second basis vector")->check(CLI::PositiveNumber);
  app->add_option("--theta", c.theta, "angle between basis vectors, radians");
}

void add_format(CLI::App* app, CommandConfig& c) {
  static const std::map<std::string, OutputFormat> formats{
      {"json", OutputFormat::json}, {"csv", OutputFormat::csv}, {"human", OutputFormat::human}};
  app->add_option("--format", c.format, "json, csv or human")->transform(CLI::CheckedTransformer(formats));
  app->add_flag_callback("--json", [&c] { c.format = OutputFormat::json; }, "same as --format json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice nearest-point communication protocols"};
  app.require_subcommand(1);
  CommandConfig c;
  std::string out_path;
  app.add_option("--out", out_path, "write output to a file instead of stdout");
  app.add_option("--threads", c.workers, "worker threads, 0 for automatic");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of a protocol");
  simulate->add_option("--protocol", c.protocol, "bit-exchange or lattice")
      ->check(CLI::IsMember({"bit-exchange", "lattice"}));
  simulate->add_option("--samples", c.samples, "number of input pairs");
  simulate->add_option("--seed", c.seed, "RNG seed");
  simulate->add_option("--max-depth", c.max_depth, "round cap");
  simulate->add_option("--dump-transcripts", c.transcripts_path, "write one transcript per line");
  add_lattice(simulate, c);
  add_format(simulate, c);

  auto* rates = app.add_subcommand("lattice-rates", "subdivision and round rates of a lattice");
  add_lattice(rates, c);
  add_format(rates, c);

  auto* nearest = app.add_subcommand("lattice-nearest", "nearest lattice point to (x, y)");
  add_lattice(nearest, c);
  nearest->add_option("--x", c.x, "first coordinate");
  nearest->add_option("--y", c.y, "second coordinate");
  add_format(nearest, c);

  auto* ratio = app.add_subcommand("entropy-ratio", "entropy per unit of undecided mass at split v");
  ratio->add_option("--v", c.v, "split ratio in (0, 1)");
  add_format(ratio, c);

  auto* optimize = app.add_subcommand("optimize-ratio", "minimize the entropy ratio over v");
  optimize->add_option("--tolerance", c.tolerance, "bracket width");
  add_format(optimize, c);

  auto* show = app.add_subcommand("partition-show", "summarize a labeled partition");
  show->add_option("--in", c.input_path, "partition JSON");
  show->add_option("--v", c.v, "split ratio of the generated partition");
  show->add_option("--max-depth", c.max_depth, "depth of the generated partition");
  add_format(show, c);

  auto* plot = app.add_subcommand("plot-data", "CSV series for plotting");
  plot->add_option("--which", c.plot, "ratio-curve, convergence or subdivision")->required();
  plot->add_option("--resolution", c.resolution, "grid size, at least 16");
  add_lattice(plot, c);
  add_format(plot, c);

  auto* verify = app.add_subcommand("verify", "run the lower-bound checks");
  verify->add_option("target", c.verify_target, "what to verify")->check(CLI::IsMember({"converse"}));
  verify->add_flag("--all", "run every check (the default)");
  add_format(verify, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::map<CLI::App*, Subcommand> which{
      {simulate, Subcommand::simulate},         {rates, Subcommand::lattice_rates},
      {nearest, Subcommand::lattice_nearest},   {ratio, Subcommand::entropy_ratio},
      {optimize, Subcommand::optimize_ratio},   {show, Subcommand::partition_show},
      {plot, Subcommand::plot_data},            {verify, Subcommand::verify}};
  c.subcommand = which.at(app.get_subcommands().front());
  // plot data is tabular, so it defaults to CSV
  if (c.subcommand == Subcommand::plot_data && plot->count("--format") == 0 && plot->count("--json") == 0) {
    c.format = OutputFormat::csv;
  }

  try {
    const Report r = dispatch(c);
    const std::string text = render(r, c.format);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path);
      if (!out) {
        std::cerr << "cannot open " << out_path << '\n';
        return kExitUsage;
      }
      out << text;
    }
    return r.exit_code;
  } catch (const UsageError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const latcomm::UnsupportedGeometry& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerificationFailed;
  }
}

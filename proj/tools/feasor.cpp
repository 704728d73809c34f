#include "feasor/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

void add_run_flags(CLI::App* cmd, feasor::cli::Overrides& ov, std::string& scheme) {
  cmd->add_option("--max-cycles", ov.max_cycles, "cycle budget")->check(CLI::PositiveNumber);
  cmd->add_option("--fix-tol", ov.fix_tol, "cycle residual declaring fixed points")->check(CLI::PositiveNumber);
  cmd->add_option("--blowup-norm", ov.blowup_norm, "norm required to declare blow-up")->check(CLI::PositiveNumber);
  cmd->add_option("--stride", ov.stride, "record every k-th cycle")->check(CLI::PositiveNumber);
  cmd->add_option("--scheme", scheme, "cyclic_dr, cyclic_projections or classical_dr")
      ->check(CLI::IsMember({"cyclic_dr", "cyclic_projections", "classical_dr"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cyclic Douglas-Rachford, cyclic projections and classical Douglas-Rachford for convex feasibility"};
  app.require_subcommand(1);

  feasor::cli::Overrides ov;
  std::string problem;
  std::string out_dir = "out";
  std::string scheme;

  auto* run = app.add_subcommand("run", "run one scheme; writes trace.csv and summary.json");
  run->add_option("problem", problem, "problem file (JSON)")->required();
  run->add_option("--out", out_dir, "output directory");
  add_run_flags(run, ov, scheme);

  auto* compare = app.add_subcommand("compare", "run all three schemes; writes compare.csv");
  compare->add_option("problem", problem, "problem file (JSON)")->required();
  compare->add_option("--out", out_dir, "output directory");
  add_run_flags(compare, ov, scheme);

  std::string trace;
  std::string svg = "trace.svg";
  std::string plot_problem;
  auto* plot = app.add_subcommand("plot", "render a 2-D trace.csv as SVG");
  plot->add_option("trace", trace, "trace.csv written by run")->required();
  plot->add_option("--out", svg, "output SVG file");
  plot->add_option("--problem", plot_problem, "problem file for set boundaries (default: problem.json beside the trace)");

  app.add_subcommand("selftest", "check projections against the brute-force oracle (seed from FEASOR_SEED)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : feasor::cli::kError;
  }

  if (!scheme.empty()) ov.scheme = feasor::parse_scheme(scheme);
  if (*run) return feasor::cli::cmd_run(problem, out_dir, ov, std::cout, std::cerr);
  if (*compare) return feasor::cli::cmd_compare(problem, out_dir, ov, std::cout, std::cerr);
  if (*plot) return feasor::cli::cmd_plot(trace, svg, plot_problem, std::cerr);

  std::uint64_t seed = 20130101;
  if (const char* env = std::getenv("FEASOR_SEED")) {
    try {
      seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "feasor selftest: FEASOR_SEED must be an unsigned integer\n";
      return feasor::cli::kError;
    }
  }
  std::cout << "seed " << seed << "\n";
  return feasor::cli::cmd_selftest(seed, std::cout);
}

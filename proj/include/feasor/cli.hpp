#ifndef FEASOR_CLI_HPP
#define FEASOR_CLI_HPP

// Command implementations behind the `feasor` executable. Each returns the
// process exit code and reports problems on `err`.

#include "feasor/io.hpp"
#include "feasor/oracle.hpp"
#include "feasor/plot.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace feasor::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kFixedPoints = 0, kError = 1, kNormBlowup = 2, kInconclusive = 3 };

inline int exit_code(VerdictKind k) {
  switch (k) {
    case VerdictKind::FixedPointsExist: return kFixedPoints;
    case VerdictKind::NormBlowup: return kNormBlowup;
    case VerdictKind::Inconclusive: return kInconclusive;
  }
  return kError;
}

/// Command-line values that replace the problem file's config.
struct Overrides {
  std::optional<std::size_t> max_cycles;
  std::optional<double> fix_tol;
  std::optional<double> blowup_norm;
  std::optional<std::size_t> stride;
  std::optional<Scheme> scheme;

  void apply(RunConfig& c) const {
    if (max_cycles) c.max_cycles = *max_cycles;
    if (fix_tol) c.fix_tol = *fix_tol;
    if (blowup_norm) c.blowup_norm = *blowup_norm;
    if (stride) c.record_stride = *stride;
    if (scheme) c.scheme = *scheme;
    c.validate();
  }
};

namespace detail {

inline std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  return out;
}

inline io::ProblemFile load(const std::string& path, const Overrides& ov) {
  io::ProblemFile pf = io::load_problem(path);
  ov.apply(pf.config);
  return pf;
}

}  // namespace detail

/// Writes trace.csv, summary.json and a normalized problem.json into out_dir.
inline int cmd_run(const std::string& problem_path, const std::string& out_dir, const Overrides& ov,
                   std::ostream& out, std::ostream& err) {
  try {
    const io::ProblemFile pf = detail::load(problem_path, ov);
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    {
      auto pj = detail::open_out(dir / "problem.json");
      pj << io::serialize_problem(pf);
    }
    auto csv = detail::open_out(dir / "trace.csv");
    io::TraceCsvWriter writer(csv, pf.problem.dimension());
    const RunResult res = run(pf.problem, pf.x0, pf.config, [&writer](const CycleRecord& r) { writer.write(r); });
    csv.close();
    if (!csv) throw Error("failed writing trace.csv");

    auto summary = detail::open_out(dir / "summary.json");
    summary << io::summary_json(pf, res).dump(2) << "\n";
    out << to_string(res.verdict.kind) << " after " << res.verdict.cycles_used << " cycles ("
        << to_string(pf.config.scheme) << ", final residual " << io::format_double(res.trace.last().cycle_residual)
        << ", norm " << io::format_double(res.verdict.final_norm) << ")\n";
    return exit_code(res.verdict.kind);
  } catch (const std::exception& e) {
    err << "feasor run: " << e.what() << "\n";
    return kError;
  }
}

/// Runs the three schemes and writes compare.csv, one row per scheme.
inline int cmd_compare(const std::string& problem_path, const std::string& out_dir, const Overrides& ov,
                       std::ostream& out, std::ostream& err) {
  try {
    const io::ProblemFile pf = detail::load(problem_path, ov);
    fs::create_directories(out_dir);
    const auto rows = compare_methods(pf.problem, pf.x0, pf.config);
    auto csv = detail::open_out(fs::path(out_dir) / "compare.csv");
    const Eigen::Index d = pf.problem.dimension();
    csv << "scheme,applicable,verdict,cycles,final_residual,final_norm";
    for (Eigen::Index k = 1; k <= d; ++k) csv << ",v" << k;
    csv << ",gap,wall_seconds\n";
    for (const auto& r : rows) {
      csv << to_string(r.scheme) << ',' << (r.applicable ? "true" : "false") << ',';
      if (!r.applicable) {
        csv << "n/a,,,";
        for (Eigen::Index k = 0; k < d; ++k) csv << ',';
        csv << ",\n";
        continue;
      }
      csv << to_string(r.verdict) << ',' << r.cycles << ',' << io::format_double(r.final_residual) << ','
          << io::format_double(r.final_norm);
      for (Eigen::Index k = 0; k < d; ++k) csv << ',' << io::format_double(r.v_estimate[k]);
      csv << ',' << io::format_double(r.gap) << ',' << io::format_double(r.wall_seconds) << '\n';
      out << to_string(r.scheme) << ": " << to_string(r.verdict) << " after " << r.cycles << " cycles\n";
    }
    return kFixedPoints;
  } catch (const std::exception& e) {
    err << "feasor compare: " << e.what() << "\n";
    return kError;
  }
}

/// Renders trace.csv as SVG. Set boundaries come from `problem_path`, or from
/// a problem.json next to the trace when no path is given.
inline int cmd_plot(const std::string& trace_path, const std::string& out_svg, const std::string& problem_path,
                    std::ostream& err) {
  try {
    std::ifstream in(trace_path);
    if (!in) throw Error("cannot open trace '" + trace_path + "'");
    const auto rows = io::read_trace_csv(in);
    if (rows.empty()) throw Error("trace '" + trace_path + "' has no rows");
    if (rows.front().point.size() != 2)
      throw DimensionError("plot needs a 2-D trace, got dimension " + std::to_string(rows.front().point.size()));

    std::vector<ConvexSet> sets;
    fs::path pp = problem_path;
    if (pp.empty()) pp = fs::path(trace_path).parent_path() / "problem.json";
    if (fs::exists(pp)) {
      sets = io::load_problem(pp.string()).problem.sets();
    } else {
      err << "feasor plot: warning: no problem file at '" << pp.string() << "', plotting iterates only\n";
    }
    std::vector<std::string> skipped;
    std::ostringstream svg;
    plot::write_svg(svg, rows, sets, &skipped);
    for (const auto& s : skipped) err << "feasor plot: warning: not drawn: " << s << "\n";
    auto out = detail::open_out(out_svg);
    out << svg.str();
    return kFixedPoints;
  } catch (const std::exception& e) {
    err << "feasor plot: " << e.what() << "\n";
    return kError;
  }
}

/// Quick oracle pass over one descriptor of each kind.
inline int cmd_selftest(std::uint64_t seed, std::ostream& out) {
  const std::vector<ConvexSet> sets{
      ConvexSet::hyperplane(make_vector({1.0, 2.0}), 0.5),
      ConvexSet::halfspace(make_vector({0.0, 1.0}), 0.0),
      ConvexSet::ball(make_vector({0.5, -0.5}), 1.0),
      ConvexSet::box(make_vector({0.0, -std::numeric_limits<double>::infinity()}), make_vector({1.0, 1.0})),
      ConvexSet::affine({{make_vector({1.0, 1.0}), 1.0}, {make_vector({2.0, 2.0}), 2.0}}),
      ConvexSet::epigraph(Parabola{1.0, 0.0, 1.0}),
      ConvexSet::epigraph(HyperbolaBranch{1.0, 1.0}),
  };
  bool ok = true;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const ConvexSet& s = sets[k];
    auto sampler = oracle::Sampler::cube(seed + k, 2, 3.0, 40);
    double worst = 0.0;
    for (const auto& x : sampler.points())
      worst = std::max(worst, (project(s, x) - oracle::brute_force_project(s, x, 101)).norm());
    const double fne = oracle::check_firmly_nonexpansive([&s](const Vector& x) { return project(s, x); },
                                                         oracle::Sampler::cube(seed + 100 + k, 2, 3.0, 200));
    const double vi = oracle::check_projection_characterization(s, oracle::Sampler::cube(seed + 200 + k, 2, 3.0, 200));
    const bool pass = worst <= 1e-5 && fne <= 1e-9 && vi <= 1e-9;
    ok = ok && pass;
    out << (pass ? "PASS " : "FAIL ") << s.kind() << ": oracle " << io::format_double(worst) << ", firm "
        << io::format_double(fne) << ", variational " << io::format_double(vi) << "\n";
  }
  return ok ? kFixedPoints : kError;
}

}  // namespace feasor::cli

#endif  // FEASOR_CLI_HPP

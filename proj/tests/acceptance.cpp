// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

using namespace feasor;
using feasor::testing::load_fixture;
using feasor::testing::v2;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

RunResult run_with(const io::ProblemFile& pf, Scheme s, std::size_t max_cycles) {
  RunConfig cfg = pf.config;
  cfg.scheme = s;
  cfg.max_cycles = max_cycles;
  return run(pf.problem, pf.x0, cfg);
}

Outcome parallel_lines() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto pf = load_fixture("parallel_lines.json");
  const RunResult dr = run_with(pf, Scheme::CyclicDR, 1000000);
  const CycleRecord& rec = dr.trace.last();
  const double gap_err = (rec.points[1] - rec.points[0] - v2(0, 1)).norm();
  o.require(dr.verdict.kind == VerdictKind::FixedPointsExist, "cyclic DR verdict");
  o.require(gap_err <= 1e-12, "x^2 - x^1 = (0,1)");

  const RunResult cl = run_with(pf, Scheme::ClassicalDR, 1000000);
  double worst_step = 0.0;
  const auto& recent = cl.trace.recent();
  for (std::size_t k = 1; k < recent.size(); ++k)
    worst_step = std::max(worst_step, (recent[k].points[0] - recent[k - 1].points[0] - v2(0, 1)).norm());
  o.require(cl.verdict.kind == VerdictKind::NormBlowup, "classical DR verdict");
  o.require(worst_step <= 1e-12, "classical step (0,1)");
  const double secs = seconds_since(t0);
  o.require(secs < 1.0, "runtime < 1 s");
  o.note("|x^2-x^1-(0,1)| " + fmt(gap_err) + ", classical " + std::string(to_string(cl.verdict.kind)) + " at cycle " +
         std::to_string(cl.verdict.cycles_used) + ", step error " + fmt(worst_step) + ", " + fmt(secs) + " s");
  return o;
}

Outcome parabola() {
  Outcome o;
  const auto pf = load_fixture("parabola.json");
  const RunResult r = run_with(pf, Scheme::CyclicDR, 100000);
  o.require(r.verdict.kind == VerdictKind::FixedPointsExist, "converges within 1e5 cycles");
  const TwoSetReport rep = two_set_report(r, pf.problem);
  o.require(rep.attained, "attained");
  if (rep.attained) {
    const double e_err = (rep.e_point - v2(0, 1)).norm();
    const double f_err = (rep.f_point - v2(0, 0)).norm();
    o.require(e_err <= 1e-4, "e_point");
    o.require(f_err <= 1e-4, "f_point");
    o.require(std::abs(rep.gap - 1.0) <= 1e-4, "gap");
    o.note("e err " + fmt(e_err) + ", f err " + fmt(f_err) + ", gap " + fmt(rep.gap));
  }
  const double shadow = r.trace.last().max_shadow_residual();
  o.require(shadow < 1e-6, "shadow residual < 1e-6");
  o.note(std::to_string(r.verdict.cycles_used) + " cycles, shadow " + fmt(shadow));
  return o;
}

Outcome hyperbola() {
  Outcome o;
  const auto pf = load_fixture("hyperbola.json");
  const double floor = 2.0 * pf.x0.norm() + 10.0;
  for (Scheme s : {Scheme::CyclicDR, Scheme::CyclicProjections, Scheme::ClassicalDR}) {
    const RunResult r = run_with(pf, s, 100000);
    const std::string name(to_string(s));
    const double norm = r.trace.last().points[0].norm();
    o.require(r.verdict.kind != VerdictKind::FixedPointsExist, name + " not converged");
    o.require(norm > floor, name + " |x^1| > 2|x0| + 10");
    o.require(r.verdict.growing && r.verdict.tail_monotone, name + " monotone tail growth");
    o.require(r.verdict.kind == VerdictKind::NormBlowup ||
                  (r.verdict.kind == VerdictKind::Inconclusive && r.verdict.growing),
              name + " verdict");
    o.note(name + " " + std::string(to_string(r.verdict.kind)) + " |x^1| " + fmt(norm));
  }
  return o;
}

Outcome coincidence() {
  Outcome o;
  double worst = 0.0;
  std::uint64_t seed = 4001;
  for (const auto& name : feasor::testing::fixture_names()) {
    const auto pf = load_fixture(name);
    for (const Vector& raw : oracle::Sampler::cube(seed++, pf.problem.dimension(), 5.0, 20).points()) {
      const Vector x0 = project(pf.problem.set(0), raw);
      worst = std::max(worst, coincidence_check(pf.problem, x0, 100).max_deviation);
    }
  }
  o.require(worst <= 1e-8, "max deviation <= 1e-8");
  o.note("max deviation " + fmt(worst));
  return o;
}

Outcome consistent_collapse() {
  Outcome o;
  for (const auto& name : {"consistent_ball_halfspace.json", "consistent_three_sets.json"}) {
    const auto pf = load_fixture(name);
    const RunResult r = run_with(pf, Scheme::CyclicDR, 1000000);
    o.require(r.verdict.kind == VerdictKind::FixedPointsExist, std::string(name) + " converges");
    const auto& ps = r.trace.last().projections;
    double spread = 0.0;
    double outside = 0.0;
    for (const auto& p : ps) {
      for (const auto& q : ps) spread = std::max(spread, (p - q).norm());
      for (const auto& set : pf.problem.sets()) outside = std::max(outside, distance(set, p));
    }
    o.require(spread <= 1e-6 && outside <= 1e-6, name);
    o.note(std::string(name) + " spread " + fmt(spread) + " distance " + fmt(outside));
  }
  return o;
}

Outcome operator_properties() {
  Outcome o;
  constexpr std::size_t kPairs = 1000;
  const auto families = feasor::testing::planar_families();
  double fne_project = -1e300, ne_reflect = -1e300, vi = -1e300, mid = -1e300, refl_ineq = -1e300;
  std::uint64_t seed = 6001;
  for (const auto& [name, set] : families) {
    fne_project = std::max(fne_project, oracle::check_firmly_nonexpansive(
                                            [&](const Vector& x) { return project(set, x); },
                                            oracle::Sampler::cube(seed++, 2, 4.0, kPairs)));
    ne_reflect = std::max(ne_reflect, oracle::check_nonexpansive([&](const Vector& x) { return reflect(set, x); },
                                                                 oracle::Sampler::cube(seed++, 2, 4.0, kPairs)));
    vi = std::max(vi, oracle::check_projection_characterization(set, oracle::Sampler::cube(seed++, 2, 4.0, kPairs)));
    const auto rc = oracle::check_reflection_characterization(set, oracle::Sampler::cube(seed++, 2, 4.0, kPairs));
    mid = std::max(mid, rc.midpoint_violation);
    refl_ineq = std::max(refl_ineq, rc.inequality_violation);
  }
  double fne_dr = -1e300, ne_cycle = -1e300;
  for (const auto& name : feasor::testing::fixture_names()) {
    const auto pf = load_fixture(name);
    for (std::size_t i = 0; i < pf.problem.size(); ++i) {
      const auto ii = static_cast<std::ptrdiff_t>(i);
      fne_dr = std::max(fne_dr, oracle::check_firmly_nonexpansive(
                                    [&](const Vector& x) { return dr_step(pf.problem.set(ii), pf.problem.set(ii + 1), x); },
                                    oracle::Sampler::cube(seed++, 2, 4.0, kPairs)));
      ne_cycle = std::max(ne_cycle, oracle::check_nonexpansive(
                                        [&](const Vector& x) { return cyclic_dr_cycle(pf.problem, i, x).end; },
                                        oracle::Sampler::cube(seed++, 2, 4.0, kPairs)));
      ne_cycle = std::max(ne_cycle, oracle::check_nonexpansive(
                                        [&](const Vector& x) { return cyclic_projection_cycle(pf.problem, i, x).end; },
                                        oracle::Sampler::cube(seed++, 2, 4.0, kPairs)));
    }
  }
  const ConvexSet ball = ConvexSet::ball(v2(0, 0), 1);
  const double neg_reflect = oracle::check_firmly_nonexpansive([&](const Vector& x) { return reflect(ball, x); },
                                                               oracle::Sampler::cube(seed++, 2, 3.0, kPairs));
  const double neg_scaled = oracle::check_nonexpansive([](const Vector& x) { return Vector(1.1 * x); },
                                                       oracle::Sampler::cube(seed++, 2, 3.0, kPairs));
  const double worst = std::max({fne_project, ne_reflect, vi, mid, refl_ineq, fne_dr, ne_cycle});
  o.require(worst <= 1e-9, "positive checks <= 1e-9");
  o.require(neg_reflect > 1e-3, "reflect on ball not firmly nonexpansive");
  o.require(neg_scaled > 1e-3, "1.1 I not nonexpansive");
  o.note("fne(P) " + fmt(fne_project) + ", fne(T) " + fmt(fne_dr) + ", ne(R) " + fmt(ne_reflect) + ", ne(cycle) " +
         fmt(ne_cycle) + ", vi " + fmt(vi) + ", refl " + fmt(std::max(mid, refl_ineq)) + ", negatives " +
         fmt(neg_reflect) + " / " + fmt(neg_scaled));
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  double worst = 0.0;
  std::uint64_t seed = 7001;
  for (const auto& [name, set] : feasor::testing::planar_families()) {
    double fam = 0.0;
    for (const Vector& x : oracle::Sampler::cube(seed++, 2, 4.0, 200).points())
      fam = std::max(fam, (project(set, x) - oracle::brute_force_project(set, x)).norm());
    o.require(fam <= 1e-5, name);
    worst = std::max(worst, fam);
  }
  o.note("worst disagreement " + fmt(worst));
  return o;
}

Outcome difference_vectors() {
  Outcome o;
  struct Case {
    const char* file;
    std::vector<Vector> want;
  };
  for (const Case& c : {Case{"parallel_lines.json", {v2(0, 1), v2(0, -1)}},
                        Case{"three_lines.json", {v2(0, 1), v2(0, 0), v2(0, -1)}}}) {
    const auto pf = load_fixture(c.file);
    const RunResult r = run_with(pf, Scheme::CyclicDR, 1000000);
    if (r.verdict.kind != VerdictKind::FixedPointsExist) {
      o.require(false, std::string(c.file) + " converges");
      continue;
    }
    const DifferenceVectors dv = estimate_difference_vectors(r);
    double err = 0.0;
    for (std::size_t i = 0; i < c.want.size(); ++i) err = std::max(err, (dv.d[i] - c.want[i]).norm());
    o.require(dv.estimator_spread <= 1e-6, std::string(c.file) + " spread");
    o.require(err <= 1e-6, std::string(c.file) + " d^i");
    o.require(dv.sum.norm() <= 1e-6, std::string(c.file) + " sum");
    o.note(std::string(c.file) + " spread " + fmt(dv.estimator_spread) + " err " + fmt(err) + " sum " +
           fmt(dv.sum.norm()));
  }
  return o;
}

Outcome rate_identities() {
  Outcome o;
  auto pf = load_fixture("parallel_lines.json");
  pf.config.blowup_norm = 1e8;
  const RunResult r = run_with(pf, Scheme::ClassicalDR, 2000);
  const RateReport rep = asymptotic_rate_check(r.trace, 10);
  double worst = 0.0;
  std::size_t used = 0;
  for (const RateSample& s : rep.samples) {
    if (s.cycle - 1 < 100) continue;  // n counts steps taken, cycle n holds z_{n-1}
    worst = std::max({worst, std::abs(s.step - 1.0), std::abs(s.k_step - 1.0), std::abs(s.mean_growth - 1.0)});
    ++used;
  }
  o.require(used > 0, "samples with n >= 100");
  o.require(worst <= 1e-9, "all three equal 1");
  o.note(std::to_string(used) + " samples, worst |q - 1| " + fmt(worst));
  return o;
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 parallel lines: cyclic DR fixed, classical DR blow-up", parallel_lines},
      {"2 parabola: best approximation pair", parabola},
      {"3 hyperbola: no scheme converges, norms grow", hyperbola},
      {"4 coincidence of cyclic DR and cyclic projections", coincidence},
      {"5 consistent-case collapse", consistent_collapse},
      {"6 operator property suite", operator_properties},
      {"7 oracle equivalence", oracle_equivalence},
      {"8 difference-vector estimators", difference_vectors},
      {"9 rate identities", rate_identities},
  };
  int failed = 0;
  for (const auto& [title, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] %s -- %s\n", o.pass ? "PASS" : "FAIL", title.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  const double secs = seconds_since(t0);
  std::printf("acceptance: %zu criteria, %d failed, %.2f s\n", criteria.size(), failed, secs);
  return failed == 0 ? 0 : 1;
}

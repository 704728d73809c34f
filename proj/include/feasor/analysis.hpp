#ifndef FEASOR_ANALYSIS_HPP
#define FEASOR_ANALYSIS_HPP

#include "feasor/engine.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <future>
#include <string>
#include <vector>

namespace feasor {

// ---------------------------------------------------------------------------
// Difference vectors
// ---------------------------------------------------------------------------

struct DifferenceVectors {
  /// Mean of the three estimators, one vector per set.
  std::vector<Vector> d;
  /// Per set: x^{i+1} - x^i, P_{i+1} R_i x^i - P_i x^i, P_{i+1} x^{i+1} - P_i x^i.
  std::vector<std::array<Vector, 3>> estimates;
  /// Largest pairwise distance between estimators over all i.
  double estimator_spread = 0.0;
  Vector sum;
};

/// Estimates the limits d^i at the final recorded cycle of a converged cyclic run.
inline DifferenceVectors estimate_difference_vectors(const RunResult& result) {
  const Trace& trace = result.trace;
  if (trace.scheme() == Scheme::ClassicalDR)
    throw AnalysisError("estimate_difference_vectors: needs a cyclic scheme (use classical_dr_shadow_report)");
  if (result.verdict.kind != VerdictKind::FixedPointsExist)
    throw AnalysisError("estimate_difference_vectors: run did not reach fixed points");

  const CycleRecord& rec = trace.last();
  const std::size_t n = rec.points.size();
  DifferenceVectors out;
  out.sum = Vector::Zero(rec.next.size());
  for (std::size_t i = 0; i < n; ++i) {
    const Vector& here = rec.points[i];
    const Vector& there = i + 1 < n ? rec.points[i + 1] : rec.next;
    std::array<Vector, 3> e{there - here, rec.reflected[i] - rec.projections[i],
                            rec.next_projections[i] - rec.projections[i]};
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = a + 1; b < 3; ++b)
        out.estimator_spread = std::max(out.estimator_spread, (e[a] - e[b]).norm());
    Vector mean = (e[0] + e[1] + e[2]) / 3.0;
    out.sum += mean;
    out.d.push_back(std::move(mean));
    out.estimates.push_back(std::move(e));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Two-set quantities
// ---------------------------------------------------------------------------

struct TwoSetReport {
  bool attained = false;
  Vector e_point;  ///< P_{C_1} x^1, a point of E
  Vector f_point;  ///< P_{C_2} x^2, a point of F
  Vector v;        ///< f_point - e_point
  double gap = 0.0;
  /// |P_{C_2} R_{C_1} x^1 - f_point|, zero in the limit.
  double identity_residual = 0.0;
  /// |P_{C_1} R_{C_2} x^2 - P_{C_1} x^1_{n+1}|, zero in the limit.
  double reverse_identity_residual = 0.0;
};

inline TwoSetReport two_set_report(const RunResult& result, const CyclicProblem& problem) {
  if (problem.size() != 2) throw AnalysisError("two_set_report: needs exactly two sets");
  if (result.trace.scheme() == Scheme::ClassicalDR)
    throw AnalysisError("two_set_report: needs a cyclic scheme (use classical_dr_shadow_report)");
  TwoSetReport rep;
  if (result.verdict.kind != VerdictKind::FixedPointsExist || result.trace.empty()) return rep;

  const CycleRecord& rec = result.trace.last();
  const Vector& x1 = rec.points[0];
  const Vector& x2 = rec.points[1];
  const ConvexSet& c1 = problem.set(0);
  const ConvexSet& c2 = problem.set(1);
  rep.attained = true;
  rep.e_point = project(c1, x1);
  rep.f_point = project(c2, x2);
  rep.v = rep.f_point - rep.e_point;
  rep.gap = rep.v.norm();
  rep.identity_residual = (project(c2, reflect(c1, x1)) - rep.f_point).norm();
  rep.reverse_identity_residual = (project(c1, reflect(c2, x2)) - project(c1, rec.next)).norm();
  return rep;
}

// ---------------------------------------------------------------------------
// Cross-scheme checks
// ---------------------------------------------------------------------------

struct CoincidenceReport {
  double max_deviation = 0.0;
  /// 1e-10 * (1 + |x0|) * cycles
  double bound = 0.0;
  bool within_bound() const { return max_deviation <= bound; }
};

/// Runs cyclic Douglas-Rachford and cyclic projections from x0 in C_1 and
/// measures the largest gap between x_n^i and y_n^i.
inline CoincidenceReport coincidence_check(const CyclicProblem& problem, const Vector& x0, std::size_t cycles) {
  require_dimension(problem.dimension(), x0, "coincidence_check");
  if (!contains(problem.set(0), x0)) throw AnalysisError("coincidence_check: x0 must lie in C_1");
  CoincidenceReport rep;
  rep.bound = 1e-10 * (1.0 + x0.norm()) * static_cast<double>(cycles);
  Vector x = x0;
  Vector y = project(problem.set(0), x0);
  for (std::size_t n = 0; n < cycles; ++n) {
    rep.max_deviation = std::max(rep.max_deviation, (x - y).norm());
    const CycleResult dr = cyclic_dr_cycle(problem, 0, x);
    const CycleResult cp = cyclic_projection_cycle(problem, 0, y);
    for (std::size_t i = 0; i < dr.inner.size(); ++i)
      rep.max_deviation = std::max(rep.max_deviation, (dr.inner[i] - cp.inner[i]).norm());
    x = dr.end;
    y = cp.end;
  }
  return rep;
}

struct AsymptoticDifferenceReport {
  double final_deviation = 0.0;
  std::vector<double> per_cycle;  ///< max_i deviation at each cycle
};

/// max_i |(x_n^i - x_n^{i+1}) - (y_n^i - y_n^{i+1})| with y_0 = P_{C_1} x_0.
inline AsymptoticDifferenceReport asymptotic_difference_check(const CyclicProblem& problem, const Vector& x0,
                                                              std::size_t cycles) {
  require_dimension(problem.dimension(), x0, "asymptotic_difference_check");
  AsymptoticDifferenceReport rep;
  Vector x = x0;
  Vector y = project(problem.set(0), project(problem.set(0), x0));
  for (std::size_t n = 0; n < cycles; ++n) {
    const CycleResult dr = cyclic_dr_cycle(problem, 0, x);
    const CycleResult cp = cyclic_projection_cycle(problem, 0, y);
    double worst = 0.0;
    const Vector* xp = &x;
    const Vector* yp = &y;
    for (std::size_t i = 0; i < dr.inner.size(); ++i) {
      worst = std::max(worst, ((*xp - dr.inner[i]) - (*yp - cp.inner[i])).norm());
      xp = &dr.inner[i];
      yp = &cp.inner[i];
    }
    rep.per_cycle.push_back(worst);
    x = dr.end;
    y = cp.end;
  }
  if (!rep.per_cycle.empty()) rep.final_deviation = rep.per_cycle.back();
  return rep;
}

// ---------------------------------------------------------------------------
// Classical Douglas-Rachford shadows
// ---------------------------------------------------------------------------

struct ShadowReport {
  Vector v_estimate;          ///< P_{C_2} P_{C_1} z_n - P_{C_1} z_n at the final cycle
  Vector final_first;         ///< P_{C_1} z_n
  Vector final_second;        ///< P_{C_2} P_{C_1} z_n
  Vector window_mean_first;   ///< mean of P_{C_1} z over the recent window
  Vector window_mean_second;
  double window_spread = 0.0;  ///< RMS deviation from the window means
  bool multiple_cluster_points = false;
  double shadow_norm_growth = 0.0;  ///< per-cycle change of |P_{C_1} z| across the window
  bool shadows_diverging = false;
};

inline ShadowReport classical_dr_shadow_report(const RunResult& result, double cluster_tol = 1e-6) {
  const Trace& trace = result.trace;
  if (trace.scheme() != Scheme::ClassicalDR || trace.n_sets() != 2)
    throw AnalysisError("classical_dr_shadow_report: needs a two-set classical Douglas-Rachford trace");
  if (trace.empty()) throw AnalysisError("classical_dr_shadow_report: empty trace");

  const auto& recent = trace.recent();
  ShadowReport rep;
  const CycleRecord& last = recent.back();
  rep.final_first = last.projections[0];
  rep.final_second = last.next_projections[0];
  rep.v_estimate = rep.final_second - rep.final_first;

  rep.window_mean_first = Vector::Zero(rep.final_first.size());
  rep.window_mean_second = Vector::Zero(rep.final_first.size());
  for (const auto& r : recent) {
    rep.window_mean_first += r.projections[0];
    rep.window_mean_second += r.next_projections[0];
  }
  const auto count = static_cast<double>(recent.size());
  rep.window_mean_first /= count;
  rep.window_mean_second /= count;
  double var = 0.0;
  for (const auto& r : recent) {
    var += (r.projections[0] - rep.window_mean_first).squaredNorm();
    var += (r.next_projections[0] - rep.window_mean_second).squaredNorm();
  }
  rep.window_spread = std::sqrt(var / count);
  rep.multiple_cluster_points = rep.window_spread > cluster_tol * (1.0 + rep.window_mean_first.norm());

  const CycleRecord& first = recent.front();
  if (last.cycle > first.cycle) {
    rep.shadow_norm_growth =
        (last.projections[0].norm() - first.projections[0].norm()) / static_cast<double>(last.cycle - first.cycle);
  }
  rep.shadows_diverging = rep.multiple_cluster_points && rep.shadow_norm_growth > 0.0;
  return rep;
}

// ---------------------------------------------------------------------------
// Method comparison
// ---------------------------------------------------------------------------

struct ComparisonRow {
  Scheme scheme = Scheme::CyclicDR;
  bool applicable = true;
  VerdictKind verdict = VerdictKind::Inconclusive;
  std::size_t cycles = 0;
  double final_residual = 0.0;
  double final_norm = 0.0;
  /// d^1 for cyclic schemes, the shadow displacement for classical DR.
  Vector v_estimate;
  double gap = 0.0;
  double wall_seconds = 0.0;
};

inline ComparisonRow comparison_row(const CyclicProblem& problem, const Vector& x0, RunConfig config, Scheme s) {
  ComparisonRow row;
  row.scheme = s;
  if (s == Scheme::ClassicalDR && problem.size() != 2) {
    row.applicable = false;
    return row;
  }
  config.scheme = s;
  const RunResult res = run(problem, x0, config);
  const CycleRecord& last = res.trace.last();
  row.verdict = res.verdict.kind;
  row.cycles = res.verdict.cycles_used;
  row.final_residual = last.cycle_residual;
  row.final_norm = res.verdict.final_norm;
  row.wall_seconds = res.wall_seconds;
  if (s == Scheme::ClassicalDR) {
    row.v_estimate = classical_dr_shadow_report(res).v_estimate;
  } else if (res.verdict.kind == VerdictKind::FixedPointsExist) {
    row.v_estimate = estimate_difference_vectors(res).d.front();
  } else {
    row.v_estimate = last.next_projections[0] - last.projections[0];
  }
  row.gap = row.v_estimate.norm();
  return row;
}

/// Runs the three schemes from the same start, concurrently.
inline std::vector<ComparisonRow> compare_methods(const CyclicProblem& problem, const Vector& x0,
                                                  const RunConfig& config) {
  const std::array<Scheme, 3> schemes{Scheme::CyclicDR, Scheme::CyclicProjections, Scheme::ClassicalDR};
  std::vector<std::future<ComparisonRow>> jobs;
  for (Scheme s : schemes)
    jobs.push_back(std::async(std::launch::async, comparison_row, std::cref(problem), std::cref(x0), config, s));
  std::vector<ComparisonRow> rows;
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

}  // namespace feasor

#endif  // FEASOR_ANALYSIS_HPP

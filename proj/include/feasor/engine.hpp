#ifndef FEASOR_ENGINE_HPP
#define FEASOR_ENGINE_HPP

#include "feasor/operators.hpp"

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace feasor {

enum class Scheme { CyclicDR, CyclicProjections, ClassicalDR };

inline std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::CyclicDR: return "cyclic_dr";
    case Scheme::CyclicProjections: return "cyclic_projections";
    case Scheme::ClassicalDR: return "classical_dr";
  }
  return "unknown";
}

inline std::optional<Scheme> parse_scheme(std::string_view s) {
  if (s == "cyclic_dr") return Scheme::CyclicDR;
  if (s == "cyclic_projections") return Scheme::CyclicProjections;
  if (s == "classical_dr") return Scheme::ClassicalDR;
  return std::nullopt;
}

struct RunConfig {
  std::size_t max_cycles = 1'000'000;
  double fix_tol = 1e-10;       ///< cycle residual at which fixed points are declared
  double blowup_norm = 1e8;     ///< iterate norm required before divergence is declared
  std::size_t record_stride = 1;
  Scheme scheme = Scheme::CyclicDR;
  std::size_t growth_window = 100;   ///< recorded cycles over which growth must be positive
  std::size_t window = 1000;         ///< recent records kept in memory
  std::size_t checkpoint_every = 1000;  ///< keep every k-th record beyond the window

  void validate() const {
    if (max_cycles == 0) throw Error("max_cycles must be positive");
    if (record_stride == 0) throw Error("record_stride must be positive");
    if (!(fix_tol > 0.0) || !(blowup_norm > 0.0)) throw Error("fix_tol and blowup_norm must be positive");
    if (!(fix_tol < blowup_norm)) throw Error("fix_tol must be smaller than blowup_norm");
    if (growth_window == 0 || window < 2 || checkpoint_every == 0) throw Error("window sizes must be positive");
    if (growth_window >= window) throw Error("growth_window must fit inside the record window");
  }
};

/// One outer cycle n of a scheme. For the cyclic schemes, index i runs over
/// the N sets; for classical Douglas-Rachford there is a single entry.
struct CycleRecord {
  std::size_t cycle = 0;                 ///< n, starting at 1
  std::vector<Vector> points;            ///< x_n^i  (classical: z_n)
  std::vector<Vector> projections;       ///< P_{C_i} x_n^i  (classical: P_{C_1} z_n)
  std::vector<Vector> reflected;         ///< P_{C_{i+1}} R_{C_i} x_n^i  (classical: P_{C_2} R_{C_1} z_n)
  std::vector<Vector> next_projections;  ///< P_{C_{i+1}} x_n^{i+1}  (classical: P_{C_2} P_{C_1} z_n)
  Vector next;                           ///< x_{n+1}^1
  double cycle_residual = 0.0;           ///< |x_{n+1}^1 - x_n^1|
  std::vector<double> shadow_residuals;  ///< |reflected_i - next_projections_i|
  std::vector<double> norms;             ///< |x_n^i|

  double min_norm() const { return norms.empty() ? 0.0 : *std::min_element(norms.begin(), norms.end()); }
  double max_shadow_residual() const {
    return shadow_residuals.empty() ? 0.0 : *std::max_element(shadow_residuals.begin(), shadow_residuals.end());
  }
};

/// Whole-run accumulators, updated every cycle (recorded or not).
struct TraceStats {
  std::size_t cycles = 0;
  double max_residual_increase = -std::numeric_limits<double>::infinity();
  /// Largest |r^{i+1}| - |r^i| where r^i = x_n^i - P_{C_i} x_n^i (cyclic DR only).
  double max_set_residual_increase = -std::numeric_limits<double>::infinity();
  /// Running double sum of |r^{i+1} - r^i|^2 over cycles n >= 2 (cyclic DR only).
  double double_sum = 0.0;
  double double_sum_first_term = 0.0;  ///< <r_2^1, r_1^N>
  double double_sum_last_term = 0.0;   ///< <r_{m+1}^1, r_m^N> at the latest cycle
  /// max_m of double_sum - first term, and of double_sum - (first - last).
  double double_sum_max_excess = -std::numeric_limits<double>::infinity();
  double double_sum_max_excess_tight = -std::numeric_limits<double>::infinity();
};

using RecordSink = std::function<void(const CycleRecord&)>;

/// Recorded cycles: the first one, a ring of recent ones, and sparse checkpoints.
class Trace {
 public:
  Trace(Scheme scheme, std::size_t n_sets, Eigen::Index dimension, std::size_t window = 1000,
        std::size_t checkpoint_every = 1000)
      : scheme_(scheme), n_sets_(n_sets), dimension_(dimension), window_(window),
        checkpoint_every_(checkpoint_every) {}

  void push(CycleRecord rec) {
    if (!first_) first_ = rec;
    if (recorded_ % checkpoint_every_ == 0) checkpoints_.push_back(rec);
    ++recorded_;
    recent_.push_back(std::move(rec));
    if (recent_.size() > window_) recent_.pop_front();
  }

  Scheme scheme() const { return scheme_; }
  std::size_t n_sets() const { return n_sets_; }
  Eigen::Index dimension() const { return dimension_; }
  bool empty() const { return recent_.empty(); }
  std::size_t recorded() const { return recorded_; }
  const CycleRecord& first() const { return first_.value(); }
  const CycleRecord& last() const { return recent_.back(); }
  const std::deque<CycleRecord>& recent() const { return recent_; }
  const std::vector<CycleRecord>& checkpoints() const { return checkpoints_; }
  TraceStats& stats() { return stats_; }
  const TraceStats& stats() const { return stats_; }

 private:
  Scheme scheme_;
  std::size_t n_sets_;
  Eigen::Index dimension_;
  std::size_t window_;
  std::size_t checkpoint_every_;
  std::size_t recorded_ = 0;
  std::optional<CycleRecord> first_;
  std::deque<CycleRecord> recent_;
  std::vector<CycleRecord> checkpoints_;
  TraceStats stats_;
};

enum class VerdictKind { FixedPointsExist, NormBlowup, Inconclusive };

inline std::string_view to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::FixedPointsExist: return "FixedPointsExist";
    case VerdictKind::NormBlowup: return "NormBlowup";
    case VerdictKind::Inconclusive: return "Inconclusive";
  }
  return "unknown";
}

struct DichotomyVerdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  Vector witness;             ///< x_n^1 at the final recorded cycle
  double final_norm = 0.0;    ///< min_i |x_n^i| at the final recorded cycle
  std::size_t cycles_used = 0;
  bool growing = false;       ///< positive norm growth over the trailing window
  bool tail_monotone = false; ///< min_i |x_n^i| nondecreasing over the trailing window
  double growth_per_cycle = 0.0;
  /// Divergence thresholds are engineering choices; no rate is known for the unbounded alternative.
  bool heuristic_thresholds = true;
  double averagedness = 0.0;
};

/// Deterministic verdict from the recorded tail of a trace.
inline DichotomyVerdict classify_dichotomy(const Trace& trace, const RunConfig& config) {
  if (trace.empty()) throw AnalysisError("classify_dichotomy: empty trace");
  const auto& recent = trace.recent();
  const CycleRecord& last = recent.back();

  DichotomyVerdict v;
  v.witness = last.points.front();
  v.final_norm = last.min_norm();
  v.cycles_used = last.cycle;
  v.averagedness = trace.scheme() == Scheme::ClassicalDR ? 0.5 : cyclic_dr_averagedness(trace.n_sets());

  const std::size_t w = std::min(config.growth_window, recent.size() - 1);
  if (w > 0) {
    const CycleRecord& back = recent[recent.size() - 1 - w];
    const double delta = last.min_norm() - back.min_norm();
    v.growing = delta > 0.0;
    v.growth_per_cycle = delta / static_cast<double>(last.cycle - back.cycle);
    v.tail_monotone = true;
    for (std::size_t k = recent.size() - w; k < recent.size(); ++k) {
      if (recent[k].min_norm() < recent[k - 1].min_norm()) {
        v.tail_monotone = false;
        break;
      }
    }
  }

  if (last.cycle_residual <= config.fix_tol) v.kind = VerdictKind::FixedPointsExist;
  else if (last.min_norm() >= config.blowup_norm && v.growing) v.kind = VerdictKind::NormBlowup;
  else v.kind = VerdictKind::Inconclusive;
  return v;
}

struct RunResult {
  Trace trace;
  DichotomyVerdict verdict;
  double wall_seconds = 0.0;
};

namespace detail {

inline CycleRecord cyclic_dr_record(const CyclicProblem& problem, const Vector& x) {
  const std::size_t n = problem.size();
  CycleRecord rec;
  rec.points.reserve(n);
  rec.points.push_back(x);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<std::ptrdiff_t>(i);
    DrStep s = dr_step_decomposed(problem.set(ii), problem.set(ii + 1), rec.points[i]);
    rec.projections.push_back(std::move(s.p_a));
    rec.reflected.push_back(std::move(s.p_b_refl_a));
    if (i + 1 < n) rec.points.push_back(std::move(s.next));
    else rec.next = std::move(s.next);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) rec.next_projections.push_back(rec.projections[i + 1]);
  rec.next_projections.push_back(project(problem.set(0), rec.next));
  return rec;
}

inline CycleRecord cyclic_projection_record(const CyclicProblem& problem, const Vector& y) {
  const std::size_t n = problem.size();
  CycleRecord rec;
  rec.points.push_back(y);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<std::ptrdiff_t>(i);
    const Vector& cur = rec.points[i];
    const ConvexSet& here = problem.set(ii);
    const ConvexSet& there = problem.set(ii + 1);
    rec.projections.push_back(project(here, cur));
    rec.reflected.push_back(project(there, Vector(2.0 * rec.projections.back() - cur)));
    Vector nxt = project(there, cur);
    rec.next_projections.push_back(project(there, nxt));
    if (i + 1 < n) rec.points.push_back(std::move(nxt));
    else rec.next = std::move(nxt);
  }
  return rec;
}

inline CycleRecord classical_dr_record(const CyclicProblem& problem, const Vector& z) {
  CycleRecord rec;
  rec.points.push_back(z);
  DrStep s = dr_step_decomposed(problem.set(0), problem.set(1), z);
  rec.next_projections.push_back(project(problem.set(1), s.p_a));
  rec.projections.push_back(std::move(s.p_a));
  rec.reflected.push_back(std::move(s.p_b_refl_a));
  rec.next = std::move(s.next);
  return rec;
}

inline void finish_record(CycleRecord& rec) {
  rec.cycle_residual = (rec.next - rec.points.front()).norm();
  for (std::size_t i = 0; i < rec.reflected.size(); ++i)
    rec.shadow_residuals.push_back((rec.reflected[i] - rec.next_projections[i]).norm());
  for (const auto& p : rec.points) rec.norms.push_back(p.norm());
}

inline bool record_finite(const CycleRecord& rec) {
  if (!rec.next.allFinite()) return false;
  for (const auto& p : rec.points)
    if (!p.allFinite()) return false;
  return std::isfinite(rec.cycle_residual);
}

// Set residuals r^i = x^i - P_{C_i} x^i, i = 1..N+1, with r^{N+1} taken at x_{n+1}^1.
inline std::vector<Vector> set_residuals(const CycleRecord& rec) {
  std::vector<Vector> r;
  r.reserve(rec.points.size() + 1);
  for (std::size_t i = 0; i < rec.points.size(); ++i) r.push_back(rec.points[i] - rec.projections[i]);
  r.push_back(rec.next - rec.next_projections.back());
  return r;
}

inline void update_stats(TraceStats& st, const CycleRecord& rec, const std::optional<double>& prev_residual,
                         Scheme scheme) {
  ++st.cycles;
  if (prev_residual)
    st.max_residual_increase = std::max(st.max_residual_increase, rec.cycle_residual - *prev_residual);
  if (scheme != Scheme::CyclicDR) return;

  const auto r = set_residuals(rec);
  const std::size_t n = rec.points.size();
  double block = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    st.max_set_residual_increase = std::max(st.max_set_residual_increase, r[i + 1].norm() - r[i].norm());
    block += (r[i + 1] - r[i]).squaredNorm();
  }
  const double boundary = r[n].dot(r[n - 1]);
  if (rec.cycle == 1) {
    st.double_sum_first_term = boundary;
    st.double_sum_last_term = boundary;
    return;
  }
  st.double_sum += block;
  st.double_sum_last_term = boundary;
  st.double_sum_max_excess = std::max(st.double_sum_max_excess, st.double_sum - st.double_sum_first_term);
  st.double_sum_max_excess_tight =
      std::max(st.double_sum_max_excess_tight, st.double_sum - (st.double_sum_first_term - boundary));
}

}  // namespace detail

/// Iterates the configured scheme from x0 until a fixed point, sustained
/// blow-up, or the cycle budget. `sink` sees every recorded cycle.
inline RunResult run(const CyclicProblem& problem, const Vector& x0, const RunConfig& config,
                     const RecordSink& sink = {}) {
  config.validate();
  require_dimension(problem.dimension(), x0, "run: initial point");
  if (!x0.allFinite()) throw NumericalBreakdown("run: non-finite initial point");
  if (config.scheme == Scheme::ClassicalDR && problem.size() != 2)
    throw Error("classical Douglas-Rachford needs exactly two sets");

  const auto t0 = std::chrono::steady_clock::now();
  RunResult result{Trace(config.scheme, problem.size(), problem.dimension(), config.window, config.checkpoint_every),
                   DichotomyVerdict{}, 0.0};
  Trace& trace = result.trace;

  Vector cur = config.scheme == Scheme::CyclicProjections ? project(problem.set(0), x0) : x0;
  std::optional<double> prev_residual;

  for (std::size_t n = 1; n <= config.max_cycles; ++n) {
    CycleRecord rec;
    switch (config.scheme) {
      case Scheme::CyclicDR: rec = detail::cyclic_dr_record(problem, cur); break;
      case Scheme::CyclicProjections: rec = detail::cyclic_projection_record(problem, cur); break;
      case Scheme::ClassicalDR: rec = detail::classical_dr_record(problem, cur); break;
    }
    rec.cycle = n;
    detail::finish_record(rec);
    if (!detail::record_finite(rec))
      throw NumericalBreakdown("run: non-finite iterate at cycle " + std::to_string(n) + " (" +
                               std::string(to_string(config.scheme)) + ")");

    detail::update_stats(trace.stats(), rec, prev_residual, config.scheme);
    prev_residual = rec.cycle_residual;

    const bool fixed = rec.cycle_residual <= config.fix_tol;
    const bool last = fixed || n == config.max_cycles;
    Vector next = rec.next;
    if (last || (n - 1) % config.record_stride == 0) {
      if (sink) sink(rec);
      trace.push(std::move(rec));
      if (!last && trace.last().min_norm() >= config.blowup_norm &&
          classify_dichotomy(trace, config).kind == VerdictKind::NormBlowup)
        break;
    }
    if (fixed) break;
    cur = std::move(next);
  }

  result.verdict = classify_dichotomy(trace, config);
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

struct RateSample {
  std::size_t cycle = 0;
  double step = 0.0;         ///< |T^{n} x - T^{n-1} x|
  double k_step = 0.0;       ///< |T^{n-1} x - T^{n-1-k} x| / k
  double mean_growth = 0.0;  ///< |T^{n-1} x| / (n - 1)
  double spread() const {
    return std::max({step, k_step, mean_growth}) - std::min({step, k_step, mean_growth});
  }
};

struct RateReport {
  std::size_t k = 1;
  std::vector<RateSample> samples;  ///< one per usable tail record, oldest first
  RateSample final_sample;
  double max_spread = 0.0;
};

/// Compares the three limits that coincide for averaged maps: the step norm,
/// the k-step norm over k, and the norm over the iteration count.
inline RateReport asymptotic_rate_check(const Trace& trace, std::size_t k) {
  if (k == 0) throw AnalysisError("asymptotic_rate_check: k must be positive");
  const auto& recent = trace.recent();
  if (recent.size() < 2 * k) throw AnalysisError("asymptotic_rate_check: trace shorter than 2k recorded cycles");
  for (std::size_t j = 1; j < recent.size(); ++j)
    if (recent[j].cycle != recent[j - 1].cycle + 1)
      throw AnalysisError("asymptotic_rate_check: records must be consecutive (record_stride 1)");

  RateReport rep;
  rep.k = k;
  for (std::size_t j = k; j < recent.size(); ++j) {
    const CycleRecord& rec = recent[j];
    if (rec.cycle < 2) continue;
    RateSample s;
    s.cycle = rec.cycle;
    s.step = rec.cycle_residual;
    s.k_step = (rec.points.front() - recent[j - k].points.front()).norm() / static_cast<double>(k);
    s.mean_growth = rec.points.front().norm() / static_cast<double>(rec.cycle - 1);
    rep.max_spread = std::max(rep.max_spread, s.spread());
    rep.samples.push_back(s);
  }
  if (rep.samples.empty()) throw AnalysisError("asymptotic_rate_check: no usable samples");
  rep.final_sample = rep.samples.back();
  return rep;
}

}  // namespace feasor

#endif  // FEASOR_ENGINE_HPP

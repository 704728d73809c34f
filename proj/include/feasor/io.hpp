#ifndef FEASOR_IO_HPP
#define FEASOR_IO_HPP

// Problem files (JSON, version "1"), trace CSV and summary records.

#include "feasor/analysis.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace feasor::io {

using Json = nlohmann::ordered_json;

/// Syntax or schema error in a problem file. Syntax errors carry a 1-based
/// line and column; schema errors carry a JSON pointer.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line = 0, std::size_t column = 0)
      : Error(msg), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct ProblemFile {
  std::string name;
  CyclicProblem problem;
  Vector x0;
  RunConfig config;  ///< carries the scheme
};

/// "%.17g": enough digits to round-trip any double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline std::string where(const std::string& path) { return path.empty() ? "/" : path; }

inline void reject_unknown(const Json& obj, const std::set<std::string>& allowed, const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ParseError("unknown key '" + key + "' at " + where(path));
  }
}

inline const Json& field(const Json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("missing key '" + key + "' at " + where(path));
  return *it;
}

inline double number(const Json& j, const std::string& path, bool allow_infinite = false) {
  if (j.is_number()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParseError("non-finite number at " + path);
    return v;
  }
  if (allow_infinite && j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw ParseError("expected a number at " + path);
}

inline Vector vec(const Json& j, const std::string& path, Eigen::Index dim, bool allow_infinite = false) {
  if (!j.is_array()) throw ParseError("expected an array at " + path);
  if (static_cast<Eigen::Index>(j.size()) != dim)
    throw ParseError("expected " + std::to_string(dim) + " coordinates at " + path + ", got " +
                     std::to_string(j.size()));
  Vector v(dim);
  for (Eigen::Index k = 0; k < dim; ++k)
    v[k] = number(j[static_cast<std::size_t>(k)], path + "/" + std::to_string(k), allow_infinite);
  return v;
}

inline std::size_t count(const Json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) throw ParseError("expected an integer at " + path);
  const auto v = j.get<long long>();
  if (v <= 0) throw ParseError("expected a positive integer at " + path);
  return static_cast<std::size_t>(v);
}

inline ConvexSet parse_set(const Json& j, const std::string& path, Eigen::Index dim) {
  if (!j.is_object()) throw ParseError("expected an object at " + path);
  const Json& kind_j = field(j, "kind", path);
  if (!kind_j.is_string()) throw ParseError("expected a string at " + path + "/kind");
  const auto kind = kind_j.get<std::string>();
  try {
    if (kind == "hyperplane" || kind == "halfspace") {
      reject_unknown(j, {"kind", "normal", "offset"}, path);
      Vector n = vec(field(j, "normal", path), path + "/normal", dim);
      const double off = number(field(j, "offset", path), path + "/offset");
      return kind == "hyperplane" ? ConvexSet::hyperplane(std::move(n), off)
                                  : ConvexSet::halfspace(std::move(n), off);
    }
    if (kind == "ball") {
      reject_unknown(j, {"kind", "center", "radius"}, path);
      return ConvexSet::ball(vec(field(j, "center", path), path + "/center", dim),
                             number(field(j, "radius", path), path + "/radius"));
    }
    if (kind == "box") {
      reject_unknown(j, {"kind", "lower", "upper"}, path);
      return ConvexSet::box(vec(field(j, "lower", path), path + "/lower", dim, true),
                            vec(field(j, "upper", path), path + "/upper", dim, true));
    }
    if (kind == "affine") {
      reject_unknown(j, {"kind", "rows"}, path);
      const Json& rows_j = field(j, "rows", path);
      if (!rows_j.is_array() || rows_j.empty()) throw ParseError("expected a nonempty array at " + path + "/rows");
      std::vector<AffineRow> rows;
      for (std::size_t r = 0; r < rows_j.size(); ++r) {
        const std::string rp = path + "/rows/" + std::to_string(r);
        if (!rows_j[r].is_object()) throw ParseError("expected an object at " + rp);
        reject_unknown(rows_j[r], {"normal", "offset"}, rp);
        rows.push_back({vec(field(rows_j[r], "normal", rp), rp + "/normal", dim),
                        number(field(rows_j[r], "offset", rp), rp + "/offset")});
      }
      return ConvexSet::affine(std::move(rows));
    }
    if (kind == "epigraph_parabola" || kind == "epigraph_hyperbola") {
      const bool parabola = kind == "epigraph_parabola";
      if (parabola) reject_unknown(j, {"kind", "a", "b", "c", "embedding"}, path);
      else reject_unknown(j, {"kind", "c0", "c1", "embedding"}, path);
      Eigen::Index ui = 0;
      Eigen::Index vi = 1;
      if (auto it = j.find("embedding"); it != j.end()) {
        if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number_integer() || !(*it)[1].is_number_integer())
          throw ParseError("expected [u_index, v_index] at " + path + "/embedding");
        ui = (*it)[0].get<Eigen::Index>();
        vi = (*it)[1].get<Eigen::Index>();
      }
      if (parabola) {
        Parabola p{number(field(j, "a", path), path + "/a"), number(field(j, "b", path), path + "/b"),
                   number(field(j, "c", path), path + "/c")};
        return ConvexSet::epigraph(p, dim, ui, vi);
      }
      HyperbolaBranch h{number(field(j, "c0", path), path + "/c0"), number(field(j, "c1", path), path + "/c1")};
      return ConvexSet::epigraph(h, dim, ui, vi);
    }
  } catch (const DescriptorError& e) {
    throw ParseError(std::string(e.what()) + " at " + path);
  }
  throw ParseError("unknown set kind '" + kind + "' at " + path + "/kind");
}

inline Json vec_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::isinf(v[k])) a.push_back(v[k] > 0 ? "inf" : "-inf");
    else a.push_back(v[k]);
  }
  return a;
}

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t k = 0; k < text.size() && k + 1 < byte; ++k) {
    if (text[k] == '\n') { ++line; col = 1; }
    else ++col;
  }
  return {line, col};
}

}  // namespace detail

inline ProblemFile parse_problem(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte);
    throw ParseError("syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                         e.what(),
                     line, col);
  }
  if (!j.is_object()) throw ParseError("problem file must be a JSON object");
  detail::reject_unknown(j, {"version", "name", "dimension", "sets", "x0", "scheme", "config"}, "");

  const Json& ver = detail::field(j, "version", "");
  if (!ver.is_string() || ver.get<std::string>() != "1") throw ParseError("unsupported version at /version (want \"1\")");

  const auto dim = static_cast<Eigen::Index>(detail::count(detail::field(j, "dimension", ""), "/dimension"));
  const Json& sets_j = detail::field(j, "sets", "");
  if (!sets_j.is_array()) throw ParseError("expected an array at /sets");
  std::vector<ConvexSet> sets;
  for (std::size_t k = 0; k < sets_j.size(); ++k)
    sets.push_back(detail::parse_set(sets_j[k], "/sets/" + std::to_string(k), dim));
  if (sets.size() < 2) throw ParseError("need at least two sets at /sets");

  RunConfig cfg;
  if (auto it = j.find("scheme"); it != j.end()) {
    const auto s = it->is_string() ? parse_scheme(it->get<std::string>()) : std::nullopt;
    if (!s) throw ParseError("unknown scheme at /scheme");
    cfg.scheme = *s;
  }
  if (auto it = j.find("config"); it != j.end()) {
    const Json& c = *it;
    if (!c.is_object()) throw ParseError("expected an object at /config");
    detail::reject_unknown(c, {"max_cycles", "fix_tol", "blowup_norm", "record_stride", "growth_window", "window"},
                           "/config");
    if (c.contains("max_cycles")) cfg.max_cycles = detail::count(c["max_cycles"], "/config/max_cycles");
    if (c.contains("fix_tol")) cfg.fix_tol = detail::number(c["fix_tol"], "/config/fix_tol");
    if (c.contains("blowup_norm")) cfg.blowup_norm = detail::number(c["blowup_norm"], "/config/blowup_norm");
    if (c.contains("record_stride")) cfg.record_stride = detail::count(c["record_stride"], "/config/record_stride");
    if (c.contains("growth_window")) cfg.growth_window = detail::count(c["growth_window"], "/config/growth_window");
    if (c.contains("window")) cfg.window = detail::count(c["window"], "/config/window");
    try {
      cfg.validate();
    } catch (const Error& e) {
      throw ParseError(std::string("invalid /config: ") + e.what());
    }
  }

  std::string name;
  if (auto it = j.find("name"); it != j.end()) {
    if (!it->is_string()) throw ParseError("expected a string at /name");
    name = it->get<std::string>();
  }
  Vector x0 = detail::vec(detail::field(j, "x0", ""), "/x0", dim);
  return ProblemFile{std::move(name), CyclicProblem(std::move(sets)), std::move(x0), cfg};
}

inline ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_problem(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line(), e.column());
  }
}

inline Json set_to_json(const ConvexSet& set) {
  Json j;
  j["kind"] = std::string(set.kind());
  std::visit(
      [&j](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Hyperplane> || std::is_same_v<T, Halfspace>) {
          j["normal"] = detail::vec_json(s.normal);
          j["offset"] = s.offset;
        } else if constexpr (std::is_same_v<T, Ball>) {
          j["center"] = detail::vec_json(s.center);
          j["radius"] = s.radius;
        } else if constexpr (std::is_same_v<T, Box>) {
          j["lower"] = detail::vec_json(s.lower);
          j["upper"] = detail::vec_json(s.upper);
        } else if constexpr (std::is_same_v<T, AffineSubspace>) {
          Json rows = Json::array();
          for (const auto& r : s.rows()) rows.push_back(Json{{"normal", detail::vec_json(r.normal)}, {"offset", r.offset}});
          j["rows"] = rows;
        } else {
          std::visit(
              [&j](const auto& f) {
                if constexpr (std::is_same_v<std::decay_t<decltype(f)>, Parabola>) {
                  j["a"] = f.a;
                  j["b"] = f.b;
                  j["c"] = f.c;
                } else {
                  j["c0"] = f.c0;
                  j["c1"] = f.c1;
                }
              },
              s.fn.variant());
          j["embedding"] = Json::array({s.u_index, s.v_index});
        }
      },
      set.variant());
  return j;
}

inline Json problem_to_json(const ProblemFile& p) {
  Json j;
  j["version"] = "1";
  if (!p.name.empty()) j["name"] = p.name;
  j["dimension"] = p.problem.dimension();
  Json sets = Json::array();
  for (const auto& s : p.problem.sets()) sets.push_back(set_to_json(s));
  j["sets"] = sets;
  j["x0"] = detail::vec_json(p.x0);
  j["scheme"] = std::string(to_string(p.config.scheme));
  j["config"] = Json{{"max_cycles", p.config.max_cycles},
                     {"fix_tol", p.config.fix_tol},
                     {"blowup_norm", p.config.blowup_norm},
                     {"record_stride", p.config.record_stride},
                     {"growth_window", p.config.growth_window},
                     {"window", p.config.window}};
  return j;
}

inline std::string serialize_problem(const ProblemFile& p) { return problem_to_json(p).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Trace CSV: one row per (recorded cycle, inner index).
// ---------------------------------------------------------------------------

class TraceCsvWriter {
 public:
  TraceCsvWriter(std::ostream& out, Eigen::Index dim) : out_(out) {
    out_ << "cycle,i";
    for (Eigen::Index k = 1; k <= dim; ++k) out_ << ",x" << k;
    out_ << ",cycle_residual,shadow_residual\n";
  }

  void write(const CycleRecord& rec) {
    for (std::size_t i = 0; i < rec.points.size(); ++i) {
      out_ << rec.cycle << ',' << (i + 1);
      for (Eigen::Index k = 0; k < rec.points[i].size(); ++k) out_ << ',' << format_double(rec.points[i][k]);
      out_ << ',' << format_double(rec.cycle_residual) << ',' << format_double(rec.shadow_residuals[i]) << '\n';
      ++rows_;
    }
  }

  std::size_t rows() const { return rows_; }

 private:
  std::ostream& out_;
  std::size_t rows_ = 0;
};

struct TraceRow {
  std::size_t cycle = 0;
  std::size_t index = 0;
  Vector point;
  double cycle_residual = 0.0;
  double shadow_residual = 0.0;
};

inline std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("trace: missing header");
  std::size_t columns = 1;
  for (char ch : line) columns += ch == ',' ? 1 : 0;
  if (columns < 5 || line.rfind("cycle,i,", 0) != 0) throw ParseError("trace: unexpected header '" + line + "'");
  const auto dim = static_cast<Eigen::Index>(columns - 4);

  std::vector<TraceRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != columns)
      throw ParseError("trace: wrong number of columns on line " + std::to_string(lineno), lineno, 1);
    try {
      TraceRow r;
      r.cycle = std::stoull(cells[0]);
      r.index = std::stoull(cells[1]);
      r.point.resize(dim);
      for (Eigen::Index k = 0; k < dim; ++k) r.point[k] = std::stod(cells[static_cast<std::size_t>(2 + k)]);
      r.cycle_residual = std::stod(cells[columns - 2]);
      r.shadow_residual = std::stod(cells[columns - 1]);
      rows.push_back(std::move(r));
    } catch (const std::exception&) {
      throw ParseError("trace: malformed number on line " + std::to_string(lineno), lineno, 1);
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Summary record
// ---------------------------------------------------------------------------

/// Finite numbers pass through; anything else is marked "diverged".
inline Json num(double v) { return std::isfinite(v) ? Json(v) : Json("diverged"); }

inline Json vec_or_diverged(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(num(v[k]));
  return a;
}

inline Json summary_json(const ProblemFile& pf, const RunResult& res) {
  const CycleRecord& last = res.trace.last();
  const TraceStats& st = res.trace.stats();
  Json j;
  j["name"] = pf.name;
  j["scheme"] = std::string(to_string(res.trace.scheme()));
  j["verdict"] = std::string(to_string(res.verdict.kind));
  j["cycles"] = res.verdict.cycles_used;
  j["recorded_cycles"] = res.trace.recorded();
  j["final_cycle_residual"] = num(last.cycle_residual);
  Json shadows = Json::array();
  for (double s : last.shadow_residuals) shadows.push_back(num(s));
  j["final_shadow_residuals"] = shadows;
  j["final_norm"] = num(res.verdict.final_norm);
  j["witness"] = vec_or_diverged(res.verdict.witness);
  j["growing"] = res.verdict.growing;
  j["tail_monotone"] = res.verdict.tail_monotone;
  j["growth_per_cycle"] = num(res.verdict.growth_per_cycle);
  j["heuristic_thresholds"] = res.verdict.heuristic_thresholds;
  j["averagedness"] = res.verdict.averagedness;
  j["thresholds"] = Json{{"fix_tol", pf.config.fix_tol},
                         {"blowup_norm", pf.config.blowup_norm},
                         {"growth_window", pf.config.growth_window},
                         {"max_cycles", pf.config.max_cycles}};

  j["difference_vectors"] = nullptr;
  j["two_set"] = nullptr;
  j["classical_shadows"] = nullptr;
  if (res.trace.scheme() != Scheme::ClassicalDR && res.verdict.kind == VerdictKind::FixedPointsExist) {
    const DifferenceVectors dv = estimate_difference_vectors(res);
    Json d = Json::array();
    for (const auto& v : dv.d) d.push_back(vec_or_diverged(v));
    j["difference_vectors"] = Json{{"d", d}, {"estimator_spread", num(dv.estimator_spread)}};
  }
  if (res.trace.scheme() != Scheme::ClassicalDR && pf.problem.size() == 2) {
    const TwoSetReport ts = two_set_report(res, pf.problem);
    if (ts.attained) {
      j["two_set"] = Json{{"attained", true},
                          {"e_point", vec_or_diverged(ts.e_point)},
                          {"f_point", vec_or_diverged(ts.f_point)},
                          {"v", vec_or_diverged(ts.v)},
                          {"gap", num(ts.gap)},
                          {"identity_residual", num(ts.identity_residual)}};
    } else {
      j["two_set"] = Json{{"attained", false}};
    }
  }
  if (res.trace.scheme() == Scheme::ClassicalDR) {
    const ShadowReport sr = classical_dr_shadow_report(res);
    j["classical_shadows"] = Json{{"v_estimate", vec_or_diverged(sr.v_estimate)},
                                  {"final_pair", Json::array({vec_or_diverged(sr.final_first),
                                                              vec_or_diverged(sr.final_second)})},
                                  {"window_spread", num(sr.window_spread)},
                                  {"multiple_cluster_points", sr.multiple_cluster_points},
                                  {"shadow_norm_growth", num(sr.shadow_norm_growth)},
                                  {"shadows_diverging", sr.shadows_diverging}};
  }
  j["stats"] = Json{{"max_residual_increase", num(st.max_residual_increase)},
                    {"max_set_residual_increase", num(st.max_set_residual_increase)},
                    {"double_sum", num(st.double_sum)},
                    {"double_sum_first_term", num(st.double_sum_first_term)}};
  j["wall_seconds"] = res.wall_seconds;
  return j;
}

}  // namespace feasor::io

#endif  // FEASOR_IO_HPP

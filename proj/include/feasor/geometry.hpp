#ifndef FEASOR_GEOMETRY_HPP
#define FEASOR_GEOMETRY_HPP

#include "feasor/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace feasor {

// ---------------------------------------------------------------------------
// Scalar convex functions used to build planar epigraphs.
// ---------------------------------------------------------------------------

/// u -> a*u^2 + b*u + c on the whole real line, a >= 0.
struct Parabola {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
};

/// u -> c0 + c1/u on u > 0, c1 > 0.
struct HyperbolaBranch {
  double c0 = 0.0;
  double c1 = 1.0;
};

/// Closed interval [lo, hi] of the real line; endpoints may be infinite.
struct Interval {
  double lo;
  double hi;
};

class ScalarConvexFn {
 public:
  /// Left end of the bracket used near an open domain boundary.
  static constexpr double kHyperbolaFloor = 1e-12;

  ScalarConvexFn(Parabola p) : fn_(p) {  // NOLINT(google-explicit-constructor)
    if (!std::isfinite(p.a) || !std::isfinite(p.b) || !std::isfinite(p.c) || p.a < 0.0)
      throw DescriptorError("parabola requires finite coefficients and a >= 0");
  }
  ScalarConvexFn(HyperbolaBranch h) : fn_(h) {  // NOLINT(google-explicit-constructor)
    if (!std::isfinite(h.c0) || !std::isfinite(h.c1) || h.c1 <= 0.0)
      throw DescriptorError("hyperbola branch requires finite coefficients and c1 > 0");
  }

  const std::variant<Parabola, HyperbolaBranch>& variant() const { return fn_; }
  bool is_parabola() const { return std::holds_alternative<Parabola>(fn_); }

  bool in_domain(double u) const {
    return std::visit(
        [u](const auto& f) {
          if constexpr (std::is_same_v<std::decay_t<decltype(f)>, HyperbolaBranch>) return u > 0.0;
          else return std::isfinite(u);
        },
        fn_);
  }

  /// Smallest argument the root finder may evaluate.
  double domain_floor() const {
    return is_parabola() ? -std::numeric_limits<double>::infinity() : kHyperbolaFloor;
  }

  double value(double u) const {
    return std::visit(
        [u](const auto& f) -> double {
          if constexpr (std::is_same_v<std::decay_t<decltype(f)>, Parabola>) return (f.a * u + f.b) * u + f.c;
          else return f.c0 + f.c1 / u;
        },
        fn_);
  }

  double derivative(double u) const {
    return std::visit(
        [u](const auto& f) -> double {
          if constexpr (std::is_same_v<std::decay_t<decltype(f)>, Parabola>) return 2.0 * f.a * u + f.b;
          else return -f.c1 / (u * u);
        },
        fn_);
  }

  double second_derivative(double u) const {
    return std::visit(
        [u](const auto& f) -> double {
          if constexpr (std::is_same_v<std::decay_t<decltype(f)>, Parabola>) return 2.0 * f.a;
          else return 2.0 * f.c1 / (u * u * u);
        },
        fn_);
  }

  /// {u in dom f : f(u) <= level}, or nullopt when empty.
  std::optional<Interval> sublevel(double level) const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (const auto* h = std::get_if<HyperbolaBranch>(&fn_)) {
      if (level <= h->c0) return std::nullopt;
      return Interval{h->c1 / (level - h->c0), inf};
    }
    const auto& p = std::get<Parabola>(fn_);
    if (p.a == 0.0) {
      if (p.b == 0.0) {
        if (p.c <= level) return Interval{-inf, inf};
        return std::nullopt;
      }
      const double root = (level - p.c) / p.b;
      return p.b > 0.0 ? Interval{-inf, root} : Interval{root, inf};
    }
    // a*u^2 + b*u + (c - level) <= 0
    const double cc = p.c - level;
    const double disc = p.b * p.b - 4.0 * p.a * cc;
    if (disc < 0.0) return std::nullopt;
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (p.b + std::copysign(sq, p.b));
    double r1 = q / p.a;
    double r2 = q != 0.0 ? cc / q : r1;
    if (r1 > r2) std::swap(r1, r2);
    return Interval{r1, r2};
  }

 private:
  std::variant<Parabola, HyperbolaBranch> fn_;
};

// ---------------------------------------------------------------------------
// Set descriptors
// ---------------------------------------------------------------------------

/// {x : <normal, x> = offset}
struct Hyperplane {
  Vector normal;
  double offset = 0.0;
};

/// {x : <normal, x> <= offset}
struct Halfspace {
  Vector normal;
  double offset = 0.0;
};

struct Ball {
  Vector center;
  double radius = 1.0;
};

/// Componentwise bounds; entries may be +-infinity.
struct Box {
  Vector lower;
  Vector upper;
};

/// One row <normal, x> = offset of an affine system.
struct AffineRow {
  Vector normal;
  double offset = 0.0;
};

/// Intersection of hyperplanes. Rows may be redundant but must be consistent.
class AffineSubspace {
 public:
  explicit AffineSubspace(std::vector<AffineRow> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) throw DescriptorError("affine subspace needs at least one row");
    const auto dim = rows_.front().normal.size();
    matrix_.resize(static_cast<Eigen::Index>(rows_.size()), dim);
    rhs_.resize(static_cast<Eigen::Index>(rows_.size()));
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      require_finite(rows_[r].normal, "affine row normal");
      require_dimension(dim, rows_[r].normal, "affine row normal");
      if (!std::isfinite(rows_[r].offset)) throw DescriptorError("affine row offset is not finite");
      if (rows_[r].normal.norm() == 0.0) throw DescriptorError("affine row normal is zero");
      matrix_.row(static_cast<Eigen::Index>(r)) = rows_[r].normal.transpose();
      rhs_[static_cast<Eigen::Index>(r)] = rows_[r].offset;
    }
    cod_.compute(matrix_);
    const Vector particular = cod_.solve(rhs_);
    const double residual = (matrix_ * particular - rhs_).norm();
    if (residual > 1e-9 * (1.0 + rhs_.norm()) * (1.0 + matrix_.norm()))
      throw DescriptorError("affine system is inconsistent (residual " + std::to_string(residual) + ")");
  }

  const std::vector<AffineRow>& rows() const { return rows_; }
  Eigen::Index dimension() const { return matrix_.cols(); }
  Eigen::Index rank() const { return cod_.rank(); }

  Vector project(const Vector& x) const {
    const Vector correction = cod_.solve(Vector(matrix_ * x - rhs_));
    return x - correction;
  }

 private:
  std::vector<AffineRow> rows_;
  Eigen::MatrixXd matrix_;
  Vector rhs_;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod_;
};

/// {x : x[v_index] >= f(x[u_index]), x[u_index] in dom f}; other coordinates free.
struct Epigraph1D {
  ScalarConvexFn fn;
  Eigen::Index dimension = 2;
  Eigen::Index u_index = 0;
  Eigen::Index v_index = 1;
};

/// A closed convex set with an exact (or 1-D root-finding) nearest-point map.
/// Immutable after construction.
class ConvexSet {
 public:
  using Variant = std::variant<Hyperplane, Halfspace, Ball, Box, AffineSubspace, Epigraph1D>;

  static ConvexSet hyperplane(Vector normal, double offset) {
    check_normal(normal, offset, "hyperplane");
    return ConvexSet(Hyperplane{std::move(normal), offset});
  }

  static ConvexSet halfspace(Vector normal, double offset) {
    check_normal(normal, offset, "halfspace");
    return ConvexSet(Halfspace{std::move(normal), offset});
  }

  static ConvexSet ball(Vector center, double radius) {
    require_finite(center, "ball center");
    if (!std::isfinite(radius) || radius <= 0.0) throw DescriptorError("ball radius must be finite and > 0");
    return ConvexSet(Ball{std::move(center), radius});
  }

  static ConvexSet box(Vector lower, Vector upper) {
    if (lower.size() == 0) throw DescriptorError("box: empty bounds");
    require_dimension(lower.size(), upper, "box upper bound");
    for (Eigen::Index k = 0; k < lower.size(); ++k) {
      if (std::isnan(lower[k]) || std::isnan(upper[k])) throw DescriptorError("box bound is NaN");
      if (lower[k] > upper[k]) throw DescriptorError("box requires lower <= upper componentwise");
      if (lower[k] == std::numeric_limits<double>::infinity() ||
          upper[k] == -std::numeric_limits<double>::infinity())
        throw DescriptorError("box is empty along coordinate " + std::to_string(k));
    }
    return ConvexSet(Box{std::move(lower), std::move(upper)});
  }

  static ConvexSet affine(std::vector<AffineRow> rows) { return ConvexSet(AffineSubspace(std::move(rows))); }

  static ConvexSet epigraph(ScalarConvexFn fn, Eigen::Index dimension = 2, Eigen::Index u_index = 0,
                            Eigen::Index v_index = 1) {
    if (dimension < 2) throw DescriptorError("epigraph needs dimension >= 2");
    if (u_index < 0 || v_index < 0 || u_index >= dimension || v_index >= dimension || u_index == v_index)
      throw DescriptorError("epigraph embedding indices must be distinct and within the dimension");
    return ConvexSet(Epigraph1D{std::move(fn), dimension, u_index, v_index});
  }

  const Variant& variant() const { return set_; }

  Eigen::Index dimension() const {
    return std::visit(
        [](const auto& s) -> Eigen::Index {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Hyperplane> || std::is_same_v<T, Halfspace>) return s.normal.size();
          else if constexpr (std::is_same_v<T, Ball>) return s.center.size();
          else if constexpr (std::is_same_v<T, Box>) return s.lower.size();
          else if constexpr (std::is_same_v<T, AffineSubspace>) return s.dimension();
          else return s.dimension;
        },
        set_);
  }

  /// Lowercase kind tag, matching the problem-file schema.
  std::string_view kind() const {
    return std::visit(
        [](const auto& s) -> std::string_view {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Hyperplane>) return "hyperplane";
          else if constexpr (std::is_same_v<T, Halfspace>) return "halfspace";
          else if constexpr (std::is_same_v<T, Ball>) return "ball";
          else if constexpr (std::is_same_v<T, Box>) return "box";
          else if constexpr (std::is_same_v<T, AffineSubspace>) return "affine";
          else return s.fn.is_parabola() ? "epigraph_parabola" : "epigraph_hyperbola";
        },
        set_);
  }

 private:
  explicit ConvexSet(Variant v) : set_(std::move(v)) {}

  static void check_normal(const Vector& normal, double offset, const char* what) {
    require_finite(normal, what);
    if (normal.norm() == 0.0) throw DescriptorError(std::string(what) + ": zero normal");
    if (!std::isfinite(offset)) throw DescriptorError(std::string(what) + ": offset is not finite");
  }

  Variant set_;
};

namespace detail {

// Stationarity of the squared distance from (xu, xv) to the graph point (u, f(u)).
struct GraphStationarity {
  const ScalarConvexFn& f;
  double xu;
  double xv;

  double operator()(double u) const { return (u - xu) + f.derivative(u) * (f.value(u) - xv); }
  double slope(double u) const {
    const double d = f.derivative(u);
    return 1.0 + f.second_derivative(u) * (f.value(u) - xv) + d * d;
  }
};

// Safeguarded Newton on a bracket with g(lo) < 0 < g(hi), g increasing.
inline double solve_increasing(const GraphStationarity& g, double lo, double hi) {
  constexpr double kTol = 1e-13;
  constexpr int kMaxIter = 300;
  double u = 0.5 * (lo + hi);
  for (int it = 0; it < kMaxIter; ++it) {
    const double gu = g(u);
    if (std::abs(gu) <= kTol) return u;
    if (gu < 0.0) lo = u;
    else hi = u;
    if (!(hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi))))
      return u;
    const double slope = g.slope(u);
    double next = slope > 0.0 ? u - gu / slope : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == u) return u;
    u = next;
  }
  return u;
}

// Nearest point of epi f to (xu, xv), returned as the abscissa on the graph.
inline double project_onto_graph(const ScalarConvexFn& f, double xu, double xv) {
  const GraphStationarity g{f, xu, xv};
  const double floor = f.domain_floor();
  double lo = 0.0;
  double hi = 0.0;

  if (const auto level = f.sublevel(xv)) {
    // The root lies where f >= xv, on the side of the sublevel interval facing xu.
    if (xu >= level->lo && xu <= level->hi) return xu;
    if (xu > level->hi) {
      lo = level->hi;
      hi = xu;
    } else {
      lo = std::max(xu, floor);
      hi = level->lo;
    }
  } else {
    // f > xv everywhere, so g is increasing on the whole domain.
    const double start = f.in_domain(xu) ? xu : std::max(1.0, floor);
    const double g0 = g(start);
    if (g0 == 0.0) return start;
    double step = std::max(1.0, std::abs(start));
    if (g0 > 0.0) {
      hi = start;
      lo = start - step;
      for (int k = 0; g(std::max(lo, floor)) > 0.0; ++k) {
        if (lo <= floor || k > 1100) throw BracketError("epigraph projection: cannot bracket from above");
        step *= 2.0;
        lo = start - step;
      }
      lo = std::max(lo, floor);
    } else {
      lo = start;
      hi = start + step;
      for (int k = 0; g(hi) < 0.0; ++k) {
        if (k > 1100 || !std::isfinite(hi)) throw BracketError("epigraph projection: cannot bracket from below");
        step *= 2.0;
        hi = start + step;
      }
    }
  }

  if (!(std::isfinite(lo) && std::isfinite(hi)) || lo > hi)
    throw BracketError("epigraph projection: invalid bracket");
  const double glo = g(lo);
  const double ghi = g(hi);
  if (!std::isfinite(glo) || !std::isfinite(ghi)) throw BracketError("epigraph projection: non-finite residual");
  // Sign failures at the bracket ends only happen when the root sits on them up to rounding.
  if (glo >= 0.0) return lo;
  if (ghi <= 0.0) return hi;
  return solve_increasing(g, lo, hi);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Nearest point of `set` to `x`.
inline Vector project(const ConvexSet& set, const Vector& x) {
  require_dimension(set.dimension(), x, "project");
  if (!x.allFinite()) throw NumericalBreakdown("project: non-finite query point");
  return std::visit(
      [&x](const auto& s) -> Vector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Hyperplane>) {
          return x - ((s.normal.dot(x) - s.offset) / s.normal.squaredNorm()) * s.normal;
        } else if constexpr (std::is_same_v<T, Halfspace>) {
          const double excess = s.normal.dot(x) - s.offset;
          if (excess <= 0.0) return x;
          return x - (excess / s.normal.squaredNorm()) * s.normal;
        } else if constexpr (std::is_same_v<T, Ball>) {
          const Vector d = x - s.center;
          const double n = d.norm();
          if (n <= s.radius) return x;
          return s.center + (s.radius / n) * d;
        } else if constexpr (std::is_same_v<T, Box>) {
          return x.cwiseMax(s.lower).cwiseMin(s.upper);
        } else if constexpr (std::is_same_v<T, AffineSubspace>) {
          return s.project(x);
        } else {
          const double xu = x[s.u_index];
          const double xv = x[s.v_index];
          if (s.fn.in_domain(xu) && xv >= s.fn.value(xu)) return x;
          const double u = detail::project_onto_graph(s.fn, xu, xv);
          Vector p = x;
          p[s.u_index] = u;
          p[s.v_index] = s.fn.value(u);
          return p;
        }
      },
      set.variant());
}

/// 2 P_C x - x.
inline Vector reflect(const ConvexSet& set, const Vector& x) { return 2.0 * project(set, x) - x; }

inline double distance(const ConvexSet& set, const Vector& x) { return (x - project(set, x)).norm(); }

inline bool contains(const ConvexSet& set, const Vector& x, double tol) {
  if (tol < 0.0) throw Error("contains: negative tolerance");
  return distance(set, x) <= tol;
}

/// Membership with the default relative tolerance.
inline bool contains(const ConvexSet& set, const Vector& x) { return contains(set, x, membership_tolerance(x)); }

}  // namespace feasor

#endif  // FEASOR_GEOMETRY_HPP

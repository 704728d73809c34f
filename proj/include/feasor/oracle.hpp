#ifndef FEASOR_ORACLE_HPP
#define FEASOR_ORACLE_HPP

// Independent verifiers for the test suite. Nothing here calls the
// projection code it is meant to check, except where a check needs sample
// points inside a set (those are produced by projecting box samples).

#include "feasor/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace feasor::oracle {

class OracleError : public Error {
 public:
  using Error::Error;
};

/// Deterministic uniform samples from a bounded box.
class Sampler {
 public:
  Sampler(std::uint64_t seed, Vector lower, Vector upper, std::size_t count)
      : seed_(seed), lower_(std::move(lower)), upper_(std::move(upper)), count_(count), rng_(seed) {
    require_dimension(lower_.size(), upper_, "sampler box");
    if (!lower_.allFinite() || !upper_.allFinite() || (upper_ - lower_).minCoeff() < 0.0)
      throw DescriptorError("sampler box must be finite with lower <= upper");
  }

  /// Square box [-half_width, half_width]^dim.
  static Sampler cube(std::uint64_t seed, Eigen::Index dim, double half_width, std::size_t count) {
    return Sampler(seed, Vector::Constant(dim, -half_width), Vector::Constant(dim, half_width), count);
  }

  std::uint64_t seed() const { return seed_; }
  std::size_t count() const { return count_; }
  Eigen::Index dimension() const { return lower_.size(); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

  Vector draw() {
    Vector v(lower_.size());
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      std::uniform_real_distribution<double> u(lower_[k], upper_[k]);
      v[k] = u(rng_);
    }
    return v;
  }

  std::vector<Vector> points() {
    std::vector<Vector> out;
    out.reserve(count_);
    for (std::size_t k = 0; k < count_; ++k) out.push_back(draw());
    return out;
  }

  std::vector<std::pair<Vector, Vector>> pairs() {
    std::vector<std::pair<Vector, Vector>> out;
    out.reserve(count_);
    for (std::size_t k = 0; k < count_; ++k) {
      Vector a = draw();
      out.emplace_back(std::move(a), draw());
    }
    return out;
  }

 private:
  std::uint64_t seed_;
  Vector lower_;
  Vector upper_;
  std::size_t count_;
  std::mt19937_64 rng_;
};

// Equality constraints are thickened to slabs of this half-width.
inline constexpr double kSlabHalfWidth = 1e-10;
// Hyperbola epigraphs are extended by their tangent below this abscissa.
inline constexpr double kHyperbolaCutoff = 1e-4;

/// Convex function of c, <= 0 exactly on the set (up to slab thickening).
inline double violation(const ConvexSet& set, const Vector& c) {
  return std::visit(
      [&c](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Hyperplane>) {
          return std::abs(s.normal.dot(c) - s.offset) / s.normal.norm() - kSlabHalfWidth;
        } else if constexpr (std::is_same_v<T, Halfspace>) {
          return (s.normal.dot(c) - s.offset) / s.normal.norm();
        } else if constexpr (std::is_same_v<T, Ball>) {
          return (c - s.center).norm() - s.radius;
        } else if constexpr (std::is_same_v<T, Box>) {
          double worst = -std::numeric_limits<double>::infinity();
          for (Eigen::Index k = 0; k < c.size(); ++k) {
            if (std::isfinite(s.lower[k])) worst = std::max(worst, s.lower[k] - c[k]);
            if (std::isfinite(s.upper[k])) worst = std::max(worst, c[k] - s.upper[k]);
          }
          return std::isfinite(worst) ? worst : -1.0;
        } else if constexpr (std::is_same_v<T, AffineSubspace>) {
          double worst = -std::numeric_limits<double>::infinity();
          for (const auto& row : s.rows())
            worst = std::max(worst, std::abs(row.normal.dot(c) - row.offset) / row.normal.norm());
          return worst - kSlabHalfWidth;
        } else {
          const double u = c[s.u_index];
          const double v = c[s.v_index];
          return std::visit(
              [u, v](const auto& f) -> double {
                using F = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<F, Parabola>) {
                  return f.a * u * u + f.b * u + f.c - v;
                } else {
                  if (u >= kHyperbolaCutoff) return f.c0 + f.c1 / u - v;
                  const double at = f.c0 + f.c1 / kHyperbolaCutoff;
                  const double slope = -f.c1 / (kHyperbolaCutoff * kHyperbolaCutoff);
                  return at + slope * (u - kHyperbolaCutoff) - v;
                }
              },
              s.fn.variant());
        }
      },
      set.variant());
}

namespace detail {

// Golden-section minimisation of a unimodal function; +inf values allowed.
template <class F>
std::pair<double, double> golden_min(F&& f, double a, double b, int steps) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - r * (b - a);
  double x2 = a + r * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  double best_x = f1 <= f2 ? x1 : x2;
  double best_f = std::min(f1, f2);
  for (int k = 0; k < steps; ++k) {
    if (f1 == std::numeric_limits<double>::infinity() && f2 == f1) {
      a = x1;
      b = x2;
      x1 = b - r * (b - a);
      x2 = a + r * (b - a);
      f1 = f(x1);
      f2 = f(x2);
    } else if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    }
    if (f1 < best_f) { best_f = f1; best_x = x1; }
    if (f2 < best_f) { best_f = f2; best_x = x2; }
  }
  return {best_x, best_f};
}

// Smallest t in [0, reach] with x + t*dir in the set, or +inf.
inline double ray_entry(const ConvexSet& set, const Vector& x, const Vector& dir, double reach) {
  auto s = [&](double t) { return violation(set, Vector(x + t * dir)); };
  if (s(0.0) <= 0.0) return 0.0;
  auto [tm, sm] = golden_min(s, 0.0, reach, 120);
  if (s(reach) < sm) { tm = reach; sm = s(reach); }
  if (sm > 0.0) return std::numeric_limits<double>::infinity();
  double lo = 0.0;
  double hi = tm;
  for (int k = 0; k < 200 && hi - lo > 0.0; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (s(mid) <= 0.0) hi = mid;
    else lo = mid;
  }
  return hi;
}

inline Vector direction(Eigen::Index dim, double theta, double phi) {
  Vector u(dim);
  if (dim == 1) u[0] = theta < std::numbers::pi ? 1.0 : -1.0;
  else if (dim == 2) { u[0] = std::cos(theta); u[1] = std::sin(theta); }
  else {
    u[0] = std::sin(phi) * std::cos(theta);
    u[1] = std::sin(phi) * std::sin(theta);
    u[2] = std::cos(phi);
  }
  return u;
}

// von Neumann alternating projections onto the individual rows. Rays almost
// never hit an affine set of codimension two or more, so these skip ray casting.
inline Vector alternate_rows(const AffineSubspace& s, const Vector& x) {
  Vector c = x;
  for (int sweep = 0; sweep < 1000000; ++sweep) {
    const Vector before = c;
    for (const auto& row : s.rows())
      c -= (row.normal.dot(c) - row.offset) / row.normal.squaredNorm() * row.normal;
    if ((c - before).norm() <= 1e-15 * (1.0 + c.norm())) return c;
  }
  throw OracleError("brute_force_project: alternating projections did not settle");
}

}  // namespace detail

/// Nearest point by exhaustive ray casting from x over a grid of directions,
/// followed by golden-section refinement of each angular coordinate.
/// Dimensions 1..3; the window radius is 2(1 + |x|), doubled on a miss.
/// Affine sets go through alternating row projections instead.
inline Vector brute_force_project(const ConvexSet& set, const Vector& x, int grid_density = 401,
                                  int refine_steps = 60) {
  const Eigen::Index dim = x.size();
  require_dimension(set.dimension(), x, "brute_force_project");
  if (dim < 1 || dim > 3) throw OracleError("brute_force_project: dimension must be 1, 2 or 3");
  if (grid_density < 4) throw OracleError("brute_force_project: grid too coarse");
  if (violation(set, x) <= 0.0) return x;
  if (const auto* aff = std::get_if<AffineSubspace>(&set.variant())) return detail::alternate_rows(*aff, x);

  const double two_pi = 2.0 * std::numbers::pi;
  double reach = 2.0 * (1.0 + x.norm());
  for (int attempt = 0; attempt < 6; ++attempt, reach *= 2.0) {
    auto cost = [&](double theta, double phi) {
      return detail::ray_entry(set, x, detail::direction(dim, theta, phi), reach);
    };

    double best_theta = 0.0;
    double best_phi = std::numbers::pi / 2.0;
    double best = std::numeric_limits<double>::infinity();
    const int n_theta = dim == 1 ? 2 : grid_density;
    const int n_phi = dim == 3 ? grid_density / 2 + 1 : 1;
    const double h_theta = two_pi / n_theta;
    const double h_phi = dim == 3 ? std::numbers::pi / (n_phi - 1) : 0.0;
    for (int j = 0; j < n_phi; ++j) {
      const double phi = dim == 3 ? j * h_phi : std::numbers::pi / 2.0;
      for (int k = 0; k < n_theta; ++k) {
        const double theta = (k + 0.5) * h_theta;
        const double t = cost(theta, phi);
        if (t < best) { best = t; best_theta = theta; best_phi = phi; }
      }
    }
    if (!std::isfinite(best)) continue;

    if (dim == 2) {
      auto [th, t] = detail::golden_min([&](double a) { return cost(a, best_phi); }, best_theta - h_theta,
                                        best_theta + h_theta, refine_steps);
      if (t < best) { best = t; best_theta = th; }
    } else if (dim == 3) {
      double wt = h_theta;
      double wp = h_phi;
      for (int sweep = 0; sweep < 40; ++sweep) {
        auto [th, t1] = detail::golden_min([&](double a) { return cost(a, best_phi); }, best_theta - wt,
                                           best_theta + wt, refine_steps);
        if (t1 < best) { best = t1; best_theta = th; }
        auto [ph, t2] = detail::golden_min([&](double b) { return cost(best_theta, b); }, best_phi - wp,
                                           best_phi + wp, refine_steps);
        if (t2 < best) { best = t2; best_phi = ph; }
        wt *= 0.6;
        wp *= 0.6;
      }
    }
    return x + best * detail::direction(dim, best_theta, best_phi);
  }
  throw OracleError("brute_force_project: no grid direction reaches the set (window too small)");
}

using Map = std::function<Vector(const Vector&)>;

/// max over sampled pairs of |Tx-Ty|^2 + |(I-T)x-(I-T)y|^2 - |x-y|^2.
inline double check_firmly_nonexpansive(const Map& map, Sampler sampler) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& [x, y] : sampler.pairs()) {
    const Vector tx = map(x);
    const Vector ty = map(y);
    const double lhs = (tx - ty).squaredNorm() + ((x - tx) - (y - ty)).squaredNorm();
    worst = std::max(worst, lhs - (x - y).squaredNorm());
  }
  return worst;
}

/// max over sampled pairs of |Tx-Ty| - |x-y|.
inline double check_nonexpansive(const Map& map, Sampler sampler) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& [x, y] : sampler.pairs()) worst = std::max(worst, (map(x) - map(y)).norm() - (x - y).norm());
  return worst;
}

/// max of <x - Px, c - Px> with x a box sample and c the projection of another.
inline double check_projection_characterization(const ConvexSet& set, Sampler sampler) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& [x, raw] : sampler.pairs()) {
    const Vector p = project(set, x);
    const Vector c = project(set, raw);
    worst = std::max(worst, (x - p).dot(c - p));
  }
  return worst;
}

struct ReflectionCheck {
  double midpoint_violation = 0.0;    ///< max distance of (r + x)/2 to the set
  double inequality_violation = 0.0;  ///< max of <x - r, c - r> - |x - r|^2 / 2
};

inline ReflectionCheck check_reflection_characterization(const ConvexSet& set, Sampler sampler) {
  ReflectionCheck out{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& [x, raw] : sampler.pairs()) {
    const Vector r = reflect(set, x);
    const Vector c = project(set, raw);
    out.midpoint_violation = std::max(out.midpoint_violation, distance(set, Vector(0.5 * (r + x))));
    out.inequality_violation =
        std::max(out.inequality_violation, (x - r).dot(c - r) - 0.5 * (x - r).squaredNorm());
  }
  return out;
}

}  // namespace feasor::oracle

#endif  // FEASOR_ORACLE_HPP

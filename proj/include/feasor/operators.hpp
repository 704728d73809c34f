#ifndef FEASOR_OPERATORS_HPP
#define FEASOR_OPERATORS_HPP

#include "feasor/geometry.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace feasor {

/// Ordered sets C_1..C_N (N >= 2) of a common dimension. Indices are 0-based
/// and cyclic: set(N) is set(0), set(-1) is set(N-1).
class CyclicProblem {
 public:
  explicit CyclicProblem(std::vector<ConvexSet> sets) : sets_(std::move(sets)) {
    if (sets_.size() < 2) throw DescriptorError("a cyclic problem needs at least two sets");
    dimension_ = sets_.front().dimension();
    for (std::size_t k = 1; k < sets_.size(); ++k) {
      if (sets_[k].dimension() != dimension_) {
        throw DimensionError("set " + std::to_string(k) + " has dimension " +
                             std::to_string(sets_[k].dimension()) + ", expected " + std::to_string(dimension_));
      }
    }
  }

  std::size_t size() const { return sets_.size(); }
  Eigen::Index dimension() const { return dimension_; }
  const std::vector<ConvexSet>& sets() const { return sets_; }

  const ConvexSet& set(std::ptrdiff_t i) const {
    const auto n = static_cast<std::ptrdiff_t>(sets_.size());
    return sets_[static_cast<std::size_t>(((i % n) + n) % n)];
  }

 private:
  std::vector<ConvexSet> sets_;
  Eigen::Index dimension_ = 0;
};

/// T_{A,B} x = (x + R_B R_A x) / 2.
inline Vector dr_step(const ConvexSet& a, const ConvexSet& b, const Vector& x) {
  return 0.5 * (x + reflect(b, reflect(a, x)));
}

/// The two-set step together with the projections it is built from.
struct DrStep {
  Vector next;
  Vector p_a;          ///< P_A x
  Vector p_b_refl_a;   ///< P_B R_A x
};

/// Evaluates the step as x + P_B R_A x - P_A x.
inline DrStep dr_step_decomposed(const ConvexSet& a, const ConvexSet& b, const Vector& x) {
  DrStep s;
  s.p_a = project(a, x);
  s.p_b_refl_a = project(b, Vector(2.0 * s.p_a - x));
  s.next = x + s.p_b_refl_a - s.p_a;
  return s;
}

/// Classical Douglas-Rachford iterates z_{n+1} = T_{A,B} z_n use the same map.
inline Vector classical_dr_step(const ConvexSet& a, const ConvexSet& b, const Vector& z) { return dr_step(a, b, z); }

struct CycleResult {
  Vector end;
  /// The N successive iterates produced during the cycle; back() == end.
  std::vector<Vector> inner;
};

/// Applies T_{i,i+1}, T_{i+1,i+2}, ..., wrapping, N times starting at set `start`.
inline CycleResult cyclic_dr_cycle(const CyclicProblem& problem, std::size_t start, const Vector& x) {
  if (start >= problem.size()) throw Error("cyclic_dr_cycle: start index out of range");
  require_dimension(problem.dimension(), x, "cyclic_dr_cycle");
  CycleResult r;
  r.inner.reserve(problem.size());
  Vector cur = x;
  for (std::size_t k = 0; k < problem.size(); ++k) {
    const auto i = static_cast<std::ptrdiff_t>(start + k);
    cur = dr_step(problem.set(i), problem.set(i + 1), cur);
    r.inner.push_back(cur);
  }
  r.end = cur;
  return r;
}

/// Projects successively onto C_{i+1}, C_{i+2}, ..., C_i.
inline CycleResult cyclic_projection_cycle(const CyclicProblem& problem, std::size_t start, const Vector& y) {
  if (start >= problem.size()) throw Error("cyclic_projection_cycle: start index out of range");
  require_dimension(problem.dimension(), y, "cyclic_projection_cycle");
  CycleResult r;
  r.inner.reserve(problem.size());
  Vector cur = y;
  for (std::size_t k = 1; k <= problem.size(); ++k) {
    cur = project(problem.set(static_cast<std::ptrdiff_t>(start + k)), cur);
    r.inner.push_back(cur);
  }
  r.end = cur;
  return r;
}

/// The cycle operator over N sets is (1 - 2^-N)-averaged.
inline double cyclic_dr_averagedness(std::size_t n_sets) {
  return 1.0 - std::ldexp(1.0, -static_cast<int>(n_sets));
}

}  // namespace feasor

#endif  // FEASOR_OPERATORS_HPP

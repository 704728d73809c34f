#ifndef FEASOR_CORE_HPP
#define FEASOR_CORE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace feasor {

/// A point of the ambient space R^d.
using Vector = Eigen::VectorXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands of different dimension were combined.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A set descriptor violated its construction invariants.
class DescriptorError : public Error {
 public:
  using Error::Error;
};

/// The epigraph root finder could not bracket the stationarity equation.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// An iterate became NaN or infinite.
class NumericalBreakdown : public Error {
 public:
  using Error::Error;
};

/// Precondition of an analysis routine was not met (wrong scheme, diverging
/// trace, too few records).
class AnalysisError : public Error {
 public:
  using Error::Error;
};

inline Vector make_vector(std::initializer_list<double> coords) {
  Vector v(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index k = 0;
  for (double c : coords) v[k++] = c;
  return v;
}

inline bool all_finite(const Vector& v) { return v.allFinite(); }

inline void require_finite(const Vector& v, const char* what) {
  if (v.size() == 0) throw DescriptorError(std::string(what) + ": empty vector");
  if (!v.allFinite()) throw DescriptorError(std::string(what) + ": non-finite coordinate");
}

inline void require_dimension(Eigen::Index expected, const Vector& v, const char* what) {
  if (v.size() != expected) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(expected) +
                         ", got " + std::to_string(v.size()));
  }
}

/// Default relative membership tolerance, 1e-9 * (1 + |x|).
inline double membership_tolerance(const Vector& x) { return 1e-9 * (1.0 + x.norm()); }

}  // namespace feasor

#endif  // FEASOR_CORE_HPP

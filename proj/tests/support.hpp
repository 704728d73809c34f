#ifndef FEASOR_TESTS_SUPPORT_HPP
#define FEASOR_TESTS_SUPPORT_HPP

#include "feasor/feasor.hpp"

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace feasor::testing {

inline std::string fixture(const std::string& name) { return std::string(FEASOR_FIXTURE_DIR) + "/" + name; }

inline io::ProblemFile load_fixture(const std::string& name) { return io::load_problem(fixture(name)); }

inline const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{"parallel_lines.json",  "three_lines.json",
                                              "parabola.json",        "hyperbola.json",
                                              "consistent_ball_halfspace.json", "consistent_three_sets.json"};
  return names;
}

inline Vector v2(double x, double y) { return make_vector({x, y}); }

struct NamedSet {
  std::string name;
  ConvexSet set;
};

/// One descriptor per family in the plane, with the awkward variants
/// (infinite box sides, redundant affine rows, shifted epigraphs).
inline std::vector<NamedSet> planar_families() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {
      {"hyperplane", ConvexSet::hyperplane(v2(1.0, 2.0), 0.5)},
      {"halfspace", ConvexSet::halfspace(v2(-1.0, 1.0), 0.25)},
      {"ball", ConvexSet::ball(v2(0.5, -0.5), 1.5)},
      {"box", ConvexSet::box(v2(-1.0, -inf), v2(1.0, 0.5))},
      {"affine", ConvexSet::affine({{v2(1.0, 1.0), 1.0}, {v2(2.0, 2.0), 2.0}})},
      {"epigraph_parabola", ConvexSet::epigraph(Parabola{1.0, -0.5, 1.0})},
      {"epigraph_hyperbola", ConvexSet::epigraph(HyperbolaBranch{1.0, 1.0})},
  };
}

inline std::vector<NamedSet> spatial_families() {
  return {
      {"hyperplane3", ConvexSet::hyperplane(make_vector({1.0, -1.0, 2.0}), 1.0)},
      {"ball3", ConvexSet::ball(make_vector({0.0, 1.0, 0.0}), 1.0)},
      {"affine3", ConvexSet::affine({{make_vector({1.0, 0.0, 1.0}), 1.0}, {make_vector({0.0, 1.0, -1.0}), 0.0}})},
      {"epigraph_parabola3", ConvexSet::epigraph(Parabola{0.5, 0.0, 0.0}, 3, 2, 0)},
      {"epigraph_hyperbola3", ConvexSet::epigraph(HyperbolaBranch{0.0, 2.0}, 3, 1, 2)},
  };
}

}  // namespace feasor::testing

#endif  // FEASOR_TESTS_SUPPORT_HPP

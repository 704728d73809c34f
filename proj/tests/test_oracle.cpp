#include "support.hpp"

#include <gtest/gtest.h>

using namespace feasor;
using feasor::testing::v2;

TEST(Sampler, DeterministicAndInsideBox) {
  auto a = oracle::Sampler(7, v2(-1, 2), v2(1, 3), 500).points();
  auto b = oracle::Sampler(7, v2(-1, 2), v2(1, 3), 500).points();
  ASSERT_EQ(a.size(), 500u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k], b[k]);
    EXPECT_TRUE(a[k][0] >= -1 && a[k][0] <= 1 && a[k][1] >= 2 && a[k][1] <= 3);
  }
  EXPECT_NE(oracle::Sampler(8, v2(-1, 2), v2(1, 3), 1).points()[0], a[0]);
}

TEST(Sampler, RejectsBadBox) {
  EXPECT_THROW(oracle::Sampler(1, v2(1, 0), v2(0, 1), 10), DescriptorError);
  EXPECT_THROW(oracle::Sampler(1, v2(0, 0), make_vector({1, 1, 1}), 10), DimensionError);
}

TEST(BruteForceProject, BallClosedForm) {
  EXPECT_LE((oracle::brute_force_project(ConvexSet::ball(v2(0, 0), 1), v2(3, 4)) - v2(0.6, 0.8)).norm(), 1e-5);
}

TEST(BruteForceProject, ParabolaEpigraphFromOrigin) {
  EXPECT_LE((oracle::brute_force_project(ConvexSet::epigraph(Parabola{1, 0, 1}), v2(0, 0)) - v2(0, 1)).norm(), 1e-5);
}

TEST(BruteForceProject, PointInsideIsReturned) {
  const Vector x = v2(0.25, -0.5);
  EXPECT_EQ(oracle::brute_force_project(ConvexSet::ball(v2(0, 0), 1), x), x);
}

TEST(BruteForceProject, RejectsHighDimension) {
  const ConvexSet ball = ConvexSet::ball(Vector::Zero(4), 1);
  EXPECT_THROW(oracle::brute_force_project(ball, Vector::Constant(4, 3.0)), oracle::OracleError);
}

// Seeds 1001.. per family; 200 queries each.
TEST(OracleAgreement, PlanarFamiliesSeed1001) {
  std::uint64_t seed = 1001;
  for (const auto& [name, set] : feasor::testing::planar_families()) {
    double worst = 0.0;
    for (const Vector& x : oracle::Sampler::cube(seed++, 2, 4.0, 200).points())
      worst = std::max(worst, (project(set, x) - oracle::brute_force_project(set, x)).norm());
    EXPECT_LE(worst, 1e-5) << name;
  }
}

TEST(OracleAgreement, SpatialFamiliesSeed1101) {
  std::uint64_t seed = 1101;
  for (const auto& [name, set] : feasor::testing::spatial_families()) {
    double worst = 0.0;
    for (const Vector& x : oracle::Sampler::cube(seed++, 3, 3.0, 25).points())
      worst = std::max(worst, (project(set, x) - oracle::brute_force_project(set, x, 101)).norm());
    EXPECT_LE(worst, 1e-5) << name;
  }
}

TEST(CheckFirmlyNonexpansive, HalfspaceProjection) {
  const ConvexSet h = ConvexSet::halfspace(v2(1, -2), 0.3);
  EXPECT_LE(oracle::check_firmly_nonexpansive([&](const Vector& x) { return project(h, x); },
                                              oracle::Sampler::cube(1201, 2, 5.0, 1000)),
            1e-9);
}

TEST(CheckFirmlyNonexpansive, DrStepOnFixturePairsSeed1202) {
  std::uint64_t seed = 1202;
  for (const auto& name : feasor::testing::fixture_names()) {
    const auto pf = feasor::testing::load_fixture(name);
    for (std::size_t i = 0; i < pf.problem.size(); ++i) {
      const ConvexSet& a = pf.problem.set(static_cast<std::ptrdiff_t>(i));
      const ConvexSet& b = pf.problem.set(static_cast<std::ptrdiff_t>(i) + 1);
      EXPECT_LE(oracle::check_firmly_nonexpansive([&](const Vector& x) { return dr_step(a, b, x); },
                                                  oracle::Sampler::cube(seed++, 2, 5.0, 1000)),
                1e-9)
          << name << " pair " << i;
    }
  }
}

TEST(CheckFirmlyNonexpansive, ReflectOnBallIsNegativeControl) {
  const ConvexSet ball = ConvexSet::ball(v2(0, 0), 1);
  EXPECT_GT(oracle::check_firmly_nonexpansive([&](const Vector& x) { return reflect(ball, x); },
                                              oracle::Sampler::cube(1301, 2, 3.0, 1000)),
            1e-3);
}

TEST(CheckNonexpansive, HyperplaneReflectionIsIsometry) {
  const ConvexSet line = ConvexSet::hyperplane(v2(1, 1), 2);
  const double worst = oracle::check_nonexpansive([&](const Vector& x) { return reflect(line, x); },
                                                  oracle::Sampler::cube(1401, 2, 5.0, 1000));
  EXPECT_LE(std::abs(worst), 1e-12);
}

TEST(CheckNonexpansive, CyclicCycleOnThreeLines) {
  const auto pf = feasor::testing::load_fixture("three_lines.json");
  EXPECT_LE(oracle::check_nonexpansive([&](const Vector& x) { return cyclic_dr_cycle(pf.problem, 0, x).end; },
                                       oracle::Sampler::cube(1402, 2, 5.0, 1000)),
            1e-9);
}

TEST(CheckNonexpansive, ScaledIdentityIsNegativeControl) {
  EXPECT_GT(oracle::check_nonexpansive([](const Vector& x) { return Vector(1.1 * x); },
                                       oracle::Sampler::cube(1403, 2, 5.0, 1000)),
            1e-3);
}

TEST(CheckProjectionCharacterization, ThreeFamiliesSeed1501) {
  EXPECT_LE(oracle::check_projection_characterization(ConvexSet::halfspace(v2(0, 1), 0),
                                                      oracle::Sampler::cube(1501, 2, 4.0, 1000)),
            1e-9);
  EXPECT_LE(oracle::check_projection_characterization(ConvexSet::ball(v2(1, 0), 1),
                                                      oracle::Sampler::cube(1502, 2, 4.0, 1000)),
            1e-9);
  EXPECT_LE(oracle::check_projection_characterization(ConvexSet::epigraph(HyperbolaBranch{1, 1}),
                                                      oracle::Sampler::cube(1503, 2, 4.0, 1000)),
            1e-9);
}

TEST(CheckReflectionCharacterization, HyperplaneAndBallSeed1601) {
  for (const auto& [name, set] : {feasor::testing::NamedSet{"hyperplane", ConvexSet::hyperplane(v2(0, 1), 1)},
                                  feasor::testing::NamedSet{"ball", ConvexSet::ball(v2(0, 0), 1)}}) {
    const auto rep = oracle::check_reflection_characterization(set, oracle::Sampler::cube(1601, 2, 4.0, 1000));
    EXPECT_LE(rep.midpoint_violation, 1e-9) << name;
    EXPECT_LE(rep.inequality_violation, 1e-9) << name;
  }
}

TEST(CheckReflectionCharacterization, PointsInsideReflectToThemselves) {
  // A sampler box inside the ball: r = x and the inequality reads 0 <= 0.
  const ConvexSet ball = ConvexSet::ball(v2(0, 0), 2);
  const auto rep = oracle::check_reflection_characterization(ball, oracle::Sampler::cube(1602, 2, 1.0, 200));
  EXPECT_EQ(rep.midpoint_violation, 0.0);
  EXPECT_EQ(rep.inequality_violation, 0.0);
}

TEST(Violation, SignMatchesMembership) {
  for (const auto& [name, set] : feasor::testing::planar_families()) {
    for (const Vector& x : oracle::Sampler::cube(1701, 2, 4.0, 200).points()) {
      const Vector p = project(set, x);
      if (distance(set, x) > 1e-6) {
        EXPECT_GT(oracle::violation(set, x), 0.0) << name << " " << x.transpose();
      }
      EXPECT_LE(oracle::violation(set, p), 1e-8) << name;
    }
  }
}

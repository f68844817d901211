#include <tom/problem.hpp>
#include <tom/random.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace tom;

TEST(MbbProblem, PaperResolution) {
  const auto spec = make_mbb_problem(180, 60);
  EXPECT_EQ(spec.grid.node_count(), 181u * 61u);
  EXPECT_DOUBLE_EQ(spec.volume_target, 0.535);
  EXPECT_DOUBLE_EQ(spec.level, 0.5);
}

TEST(MbbProblem, LeftEdgeRollers) {
  const auto spec = make_mbb_problem(12, 4);
  const auto rollers = std::count_if(spec.fixed_dofs.begin(), spec.fixed_dofs.end(), [&](const FixedDof& f) {
    return spec.grid.node_ij(f.node)[0] == 0 && f.axis == Axis::X;
  });
  EXPECT_EQ(rollers, 5);
  ASSERT_EQ(spec.fixed_dofs.size(), 6u);
  EXPECT_EQ(spec.fixed_dofs.back(), (FixedDof{spec.grid.node(12, 0), Axis::Y}));
  ASSERT_EQ(spec.loads.size(), 1u);
  EXPECT_EQ(spec.loads[0].node, spec.grid.node(0, 4));
  EXPECT_EQ(spec.loads[0].force, Eigen::Vector2d(0.0, -1.0));
}

TEST(MbbProblem, SmallPresetGeometry) {
  const auto spec = make_mbb_problem(90, 30);
  EXPECT_DOUBLE_EQ(spec.grid.lx(), 3.0);
  EXPECT_DOUBLE_EQ(spec.grid.ly(), 1.0);
  EXPECT_NEAR(spec.grid.hx(), 1.0 / 30.0, 1e-15);
  EXPECT_NEAR(spec.grid.hy(), 1.0 / 30.0, 1e-15);
}

TEST(MbbProblem, RejectsBadAspect) {
  EXPECT_THROW(make_mbb_problem(10, 4), std::invalid_argument);
  EXPECT_THROW(make_mbb_problem(9, 3), std::invalid_argument);
}

TEST(CantileverProblem, LoadsSnapToNearestNodes) {
  const auto spec = make_cantilever_problem(15, 10);
  ASSERT_EQ(spec.loads.size(), 2u);
  EXPECT_EQ(spec.loads[0].node, spec.grid.node(15, 1));
  EXPECT_EQ(spec.loads[1].node, spec.grid.node(15, 9));
  for (const auto& l : spec.loads) EXPECT_EQ(l.force, Eigen::Vector2d(0.0, -0.5));
  EXPECT_DOUBLE_EQ(spec.volume_target, 0.5);
  EXPECT_EQ(spec.fixed_dofs.size(), 2u * 11u);
}

TEST(CantileverProblem, PaperResolution) {
  const auto spec = make_cantilever_problem(150, 100);
  const auto low = spec.grid.node_position(spec.loads[0].node);
  const auto high = spec.grid.node_position(spec.loads[1].node);
  EXPECT_NEAR(low.y(), 0.1, 1e-12);
  EXPECT_NEAR(high.y(), 0.9, 1e-12);
  EXPECT_NEAR(low.x(), 1.5, 1e-12);
}

TEST(CantileverProblem, RejectsBadAspectRatio) {
  EXPECT_THROW(make_cantilever_problem(10, 10), std::invalid_argument);
  EXPECT_NO_THROW(make_cantilever_problem(3, 2));
}

TEST(ProblemSpec, ConstructorsArePureAndSupported) {
  for (const auto& name : {"mbb", "cantilever"}) {
    const int nx = std::string(name) == "mbb" ? 24 : 24;
    const int ny = std::string(name) == "mbb" ? 8 : 16;
    const auto a = make_problem(name, nx, ny);
    const auto b = make_problem(name, nx, ny);
    EXPECT_EQ(a, b);
    EXPECT_FALSE(a.fixed_dofs.empty());
    EXPECT_NO_THROW(a.validate());
  }
  EXPECT_THROW(make_problem("bridge", 12, 4), std::invalid_argument);
}

TEST(ProblemSpec, ValidateCatchesBrokenSpecs) {
  auto spec = make_mbb_problem(12, 4);
  auto s = spec;
  s.fixed_dofs.clear();
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = spec;
  s.loads.clear();
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = spec;
  s.loads[0].node = 10000;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = spec;
  s.level = 0.4;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = spec;
  s.poisson_ratio = 0.5;
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(ProblemSpec, LoadVectorSumsNodalForces) {
  const auto spec = make_cantilever_problem(15, 10);
  const auto f = spec.load_vector();
  EXPECT_DOUBLE_EQ(f.sum(), -1.0);
  EXPECT_DOUBLE_EQ(f(2 * spec.loads[0].node + 1), -0.5);
}

TEST(Modulations, UniformOnCircle) {
  Rng rng(3);
  const auto z = sample_modulations(rng, 25, 1.2, ModulationMode::CircleUniform);
  ASSERT_EQ(z.size(), 25u);
  for (const auto& v : z) EXPECT_NEAR(v.norm(), 1.2, 1e-14);
}

TEST(Modulations, FixedAnglesEquallySpaced) {
  Rng rng(0);
  const Rng before = rng;
  const auto z = sample_modulations(rng, 4, 1.0, ModulationMode::CircleFixed);
  ASSERT_EQ(z.size(), 4u);
  for (int k = 0; k < 4; ++k) {
    const double phi = k * std::numbers::pi / 2;
    EXPECT_NEAR(z[static_cast<std::size_t>(k)].x(), std::cos(phi), 1e-15);
    EXPECT_NEAR(z[static_cast<std::size_t>(k)].y(), std::sin(phi), 1e-15);
  }
  EXPECT_EQ(rng, before);
}

TEST(Modulations, DeterministicPerSeed) {
  Rng a(11), b(11), c(12);
  const auto za = sample_modulations(a, 9, 0.6, ModulationMode::CircleUniform);
  const auto zb = sample_modulations(b, 9, 0.6, ModulationMode::CircleUniform);
  const auto zc = sample_modulations(c, 9, 0.6, ModulationMode::CircleUniform);
  EXPECT_EQ(za, zb);
  EXPECT_NE(za, zc);
}

TEST(Modulations, Uniform01Range) {
  Rng rng(5);
  double lo = 1, hi = 0;
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform01(rng);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
  EXPECT_LT(lo, 0.01);
  EXPECT_GT(hi, 0.99);
}

#include <tom/grid.hpp>

#include <gtest/gtest.h>

using tom::Grid2D;

TEST(Grid2D, CountsAndSpacing) {
  const Grid2D g(6, 2, 3.0, 1.0);
  EXPECT_EQ(g.node_count(), 7u * 3u);
  EXPECT_EQ(g.element_count(), 12u);
  EXPECT_DOUBLE_EQ(g.hx(), 0.5);
  EXPECT_DOUBLE_EQ(g.hy(), 0.5);
  EXPECT_DOUBLE_EQ(g.element_area(), 0.25);
  EXPECT_DOUBLE_EQ(g.domain_area(), 3.0);
}

TEST(Grid2D, RejectsDegenerateSizes) {
  EXPECT_THROW(Grid2D(0, 3, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(Grid2D(3, 3, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(Grid2D(3, 3, 1.0, -1.0), std::invalid_argument);
}

TEST(Grid2D, NumberingIsRowMajorFromLowerLeft) {
  const Grid2D g(4, 3, 4.0, 3.0);
  EXPECT_EQ(g.node(0, 0), 0);
  EXPECT_EQ(g.node(4, 0), 4);
  EXPECT_EQ(g.node(0, 1), 5);
  EXPECT_EQ(g.element(3, 2), 11);
  const auto ij = g.node_ij(g.node(2, 3));
  EXPECT_EQ(ij[0], 2);
  EXPECT_EQ(ij[1], 3);
  const auto nodes = g.element_nodes(g.element(1, 1));
  EXPECT_EQ(nodes[0], g.node(1, 1));
  EXPECT_EQ(nodes[1], g.node(2, 1));
  EXPECT_EQ(nodes[2], g.node(2, 2));
  EXPECT_EQ(nodes[3], g.node(1, 2));
}

TEST(Grid2D, CentroidsStrictlyInside) {
  const Grid2D g(9, 3, 3.0, 1.0, Eigen::Vector2d(-1.0, 2.0));
  const auto c = g.centroids();
  ASSERT_EQ(c.cols(), 27);
  for (Eigen::Index e = 0; e < c.cols(); ++e) {
    EXPECT_GT(c(0, e), -1.0);
    EXPECT_LT(c(0, e), 2.0);
    EXPECT_GT(c(1, e), 2.0);
    EXPECT_LT(c(1, e), 3.0);
    EXPECT_TRUE(g.contains(c.col(e)));
  }
  EXPECT_NEAR(c(0, 0), -1.0 + 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(c(1, 0), 2.0 + 1.0 / 6.0, 1e-15);
}

TEST(Grid2D, NodePositionsSpanDomain) {
  const Grid2D g(3, 2, 1.5, 1.0);
  const auto p = g.node_positions();
  EXPECT_DOUBLE_EQ(p(0, g.node(3, 2)), 1.5);
  EXPECT_DOUBLE_EQ(p(1, g.node(3, 2)), 1.0);
  EXPECT_FALSE(g.contains(Eigen::Vector2d(1.6, 0.5)));
}

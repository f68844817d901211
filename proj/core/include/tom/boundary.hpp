#pragma once

#include "tom/geometric.hpp"
#include "tom/grid.hpp"
#include "tom/random.hpp"
#include "tom/wire_net.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <functional>

namespace tom {

/// Points on the level set of one shape, refined by bisection.
struct BoundaryCloud {
  Eigen::Matrix2Xd points;
  Eigen::VectorXd bracket_width;  // length of the final bisection interval per point
  int shape_id = 0;

  Eigen::Index size() const { return points.cols(); }
  bool empty() const { return points.cols() == 0; }
};

/// Batch field evaluation: 2 x n positions in, n values out.
using FieldFunction = std::function<Eigen::VectorXd(const Eigen::Matrix2Xd&)>;

struct BoundaryOptions {
  double level = 0.5;
  int steps = 10;
  /// Points closer than exclusion->epsilon to any exclusion point are dropped.
  const InterfaceSpec* exclusion = nullptr;
};

/// Evaluates the field on the grid nodes, pairs every node at or above the level
/// with each 4-neighbour below it, bisects each segment `steps` times and
/// returns the midpoints of the final brackets. A field without a level
/// crossing yields an empty cloud.
BoundaryCloud extract_boundary(const FieldFunction& field, const Grid2D& grid, const BoundaryOptions& options = {},
                               int shape_id = 0);
BoundaryCloud extract_boundary(const WireNet& net, const Eigen::Vector2d& z, const Grid2D& grid,
                               const BoundaryOptions& options = {}, int shape_id = 0);

/// Uniform random subset of at most max_points points (order preserved).
BoundaryCloud subsample(const BoundaryCloud& cloud, Eigen::Index max_points, Rng& rng);

/// "x y" per line.
void write_boundary(const std::filesystem::path& path, const BoundaryCloud& cloud);

}  // namespace tom

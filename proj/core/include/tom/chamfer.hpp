#pragma once

#include "tom/boundary.hpp"

#include <Eigen/Core>

#include <vector>

namespace tom {

/// Index of the nearest column of `to` for every column of `from`
/// (brute force; ties resolve to the lowest index).
std::vector<Eigen::Index> nearest_neighbors(const Eigen::Matrix2Xd& from, const Eigen::Matrix2Xd& to);

/// One-sided chamfer discrepancy: mean over a of the distance to the
/// nearest point of b. Not symmetric. Throws on empty input.
double chamfer(const Eigen::Matrix2Xd& a, const Eigen::Matrix2Xd& b);
double chamfer(const BoundaryCloud& a, const BoundaryCloud& b);

/// (CD(a, b) + CD(b, a)) / 2.
double symmetric_chamfer(const BoundaryCloud& a, const BoundaryCloud& b);

struct ChamferGradient {
  /// d CD(a, b) / d x for every point x of a, with b held fixed.
  Eigen::Matrix2Xd grad;
  /// Points of a that coincide with their nearest neighbour; these get a
  /// zero subgradient.
  int coincident = 0;
};

ChamferGradient chamfer_spatial_grad(const Eigen::Matrix2Xd& a, const Eigen::Matrix2Xd& b);
ChamferGradient chamfer_spatial_grad(const BoundaryCloud& a, const BoundaryCloud& b);

}  // namespace tom

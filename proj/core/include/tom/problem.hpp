#pragma once

#include "tom/grid.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace tom {

enum class Axis : int { X = 0, Y = 1 };

struct FixedDof {
  int node;
  Axis axis;

  int dof() const { return 2 * node + static_cast<int>(axis); }
  friend bool operator==(const FixedDof&, const FixedDof&) = default;
};

struct PointLoad {
  int node;
  Eigen::Vector2d force;

  friend bool operator==(const PointLoad& a, const PointLoad& b) { return a.node == b.node && a.force == b.force; }
};

/// Ersatz stiffness floor used inside the stiffness interpolation.
inline constexpr double kDensityFloor = 1e-6;
/// Fixed level defining the shape as the super-level set of the density.
inline constexpr double kLevel = 0.5;

/// One linear-elastic benchmark problem on a regular grid.
struct ProblemSpec {
  Grid2D grid;
  std::vector<FixedDof> fixed_dofs;
  std::vector<PointLoad> loads;
  double volume_target;
  double youngs_modulus = 1.0;
  double poisson_ratio = 0.3;
  double level = kLevel;
  std::string name{};
  std::string symmetry_note{};

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;

  /// Assembled global load vector (2 dofs per node).
  Eigen::VectorXd load_vector() const;

  std::vector<int> load_nodes() const;
  std::vector<int> support_nodes() const;

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

/// Right half of the MBB beam (H = 1, L = 6): symmetry rollers on the
/// left edge, vertical support at the bottom-right corner, unit downward
/// load at the top-left corner, 53.5 % target volume. Requires nx = 3 ny.
ProblemSpec make_mbb_problem(int nx, int ny);

/// Cantilever (H = 1, L = 1.5): clamped left edge, two downward loads of
/// 0.5 on the right edge at heights 0.1 and 0.9, 50 % target volume.
/// Requires 2 nx = 3 ny.
ProblemSpec make_cantilever_problem(int nx, int ny);

/// Dispatch by name ("mbb" or "cantilever").
ProblemSpec make_problem(const std::string& name, int nx, int ny);

}  // namespace tom

#include "tom/problem.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace tom {

void ProblemSpec::validate() const {
  if (fixed_dofs.empty()) {
    throw std::invalid_argument("ProblemSpec: no fixed dofs, structure is unsupported");
  }
  if (loads.empty()) {
    throw std::invalid_argument("ProblemSpec: no loads");
  }
  const int nodes = static_cast<int>(grid.node_count());
  for (const auto& f : fixed_dofs) {
    if (f.node < 0 || f.node >= nodes) throw std::invalid_argument("ProblemSpec: fixed dof node out of range");
  }
  for (const auto& l : loads) {
    if (l.node < 0 || l.node >= nodes) throw std::invalid_argument("ProblemSpec: load node out of range");
    if (!l.force.allFinite()) throw std::invalid_argument("ProblemSpec: non-finite load");
  }
  if (!(volume_target > 0.0 && volume_target < 1.0)) {
    throw std::invalid_argument("ProblemSpec: volume target must lie in (0, 1)");
  }
  if (!(youngs_modulus > 0.0) || !std::isfinite(youngs_modulus)) {
    throw std::invalid_argument("ProblemSpec: Young's modulus must be positive");
  }
  if (!(poisson_ratio > 0.0 && poisson_ratio < 0.5)) {
    throw std::invalid_argument("ProblemSpec: Poisson ratio must lie in (0, 0.5)");
  }
  if (level != kLevel) {
    throw std::invalid_argument("ProblemSpec: level must be exactly 0.5");
  }
}

Eigen::VectorXd ProblemSpec::load_vector() const {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(2 * static_cast<Eigen::Index>(grid.node_count()));
  for (const auto& l : loads) {
    f(2 * l.node) += l.force.x();
    f(2 * l.node + 1) += l.force.y();
  }
  return f;
}

std::vector<int> ProblemSpec::load_nodes() const {
  std::set<int> nodes;
  for (const auto& l : loads) nodes.insert(l.node);
  return {nodes.begin(), nodes.end()};
}

std::vector<int> ProblemSpec::support_nodes() const {
  std::set<int> nodes;
  for (const auto& f : fixed_dofs) nodes.insert(f.node);
  return {nodes.begin(), nodes.end()};
}

ProblemSpec make_mbb_problem(int nx, int ny) {
  if (nx < 4 || ny < 4) {
    throw std::invalid_argument("make_mbb_problem: nx and ny must be >= 4");
  }
  if (nx != 3 * ny) {
    throw std::invalid_argument("make_mbb_problem: half-beam requires nx = 3 ny");
  }
  Grid2D grid(nx, ny, 3.0, 1.0);
  ProblemSpec spec{.grid = grid, .fixed_dofs = {}, .loads = {}, .volume_target = 0.535};
  spec.name = "mbb";
  spec.symmetry_note = "right half of the MBB beam; x-rollers on the symmetry edge x = 0";
  for (int j = 0; j <= ny; ++j) {
    spec.fixed_dofs.push_back({grid.node(0, j), Axis::X});
  }
  spec.fixed_dofs.push_back({grid.node(nx, 0), Axis::Y});
  spec.loads.push_back({grid.node(0, ny), Eigen::Vector2d(0.0, -1.0)});
  spec.validate();
  return spec;
}

ProblemSpec make_cantilever_problem(int nx, int ny) {
  if (nx < 1 || ny < 1) {
    throw std::invalid_argument("make_cantilever_problem: nx and ny must be >= 1");
  }
  if (2 * nx != 3 * ny) {
    throw std::invalid_argument("make_cantilever_problem: requires nx / ny = 1.5");
  }
  constexpr double kHeight = 1.0;
  constexpr double kLoadOffset = 0.1;
  Grid2D grid(nx, ny, 1.5, kHeight);
  const auto snap = [&](double y) { return static_cast<int>(std::lround(y / grid.hy())); };
  const int low = snap(kLoadOffset);
  const int high = snap(kHeight - kLoadOffset);
  if (low == high) {
    throw std::invalid_argument("make_cantilever_problem: grid too coarse, load nodes coincide");
  }
  ProblemSpec spec{.grid = grid, .fixed_dofs = {}, .loads = {}, .volume_target = 0.5};
  spec.name = "cantilever";
  spec.symmetry_note = "none";
  for (int j = 0; j <= ny; ++j) {
    spec.fixed_dofs.push_back({grid.node(0, j), Axis::X});
    spec.fixed_dofs.push_back({grid.node(0, j), Axis::Y});
  }
  spec.loads.push_back({grid.node(nx, low), Eigen::Vector2d(0.0, -0.5)});
  spec.loads.push_back({grid.node(nx, high), Eigen::Vector2d(0.0, -0.5)});
  spec.validate();
  return spec;
}

ProblemSpec make_problem(const std::string& name, int nx, int ny) {
  if (name == "mbb") return make_mbb_problem(nx, ny);
  if (name == "cantilever") return make_cantilever_problem(nx, ny);
  throw std::invalid_argument("unknown problem '" + name + "' (expected mbb or cantilever)");
}

}  // namespace tom

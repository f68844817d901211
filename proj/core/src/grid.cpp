#include "tom/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tom {

Grid2D::Grid2D(int nx, int ny, double lx, double ly, Eigen::Vector2d origin)
    : nx_(nx), ny_(ny), lx_(lx), ly_(ly), origin_(origin) {
  if (nx < 1 || ny < 1) {
    throw std::invalid_argument("Grid2D: element counts must be >= 1, got " + std::to_string(nx) + "x" +
                                std::to_string(ny));
  }
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly)) {
    throw std::invalid_argument("Grid2D: domain lengths must be positive and finite");
  }
  if (!origin.allFinite()) {
    throw std::invalid_argument("Grid2D: origin must be finite");
  }
}

std::array<int, 4> Grid2D::element_nodes(int element) const {
  const auto [i, j] = element_ij(element);
  return {node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)};
}

Eigen::Vector2d Grid2D::node_position(int n) const {
  const auto [i, j] = node_ij(n);
  return origin_ + Eigen::Vector2d(i * hx(), j * hy());
}

Eigen::Vector2d Grid2D::element_centroid(int element) const {
  const auto [i, j] = element_ij(element);
  return origin_ + Eigen::Vector2d((i + 0.5) * hx(), (j + 0.5) * hy());
}

Eigen::Matrix2Xd Grid2D::centroids() const {
  Eigen::Matrix2Xd out(2, static_cast<Eigen::Index>(element_count()));
  for (int e = 0; e < static_cast<int>(element_count()); ++e) {
    out.col(e) = element_centroid(e);
  }
  return out;
}

Eigen::Matrix2Xd Grid2D::node_positions() const {
  Eigen::Matrix2Xd out(2, static_cast<Eigen::Index>(node_count()));
  for (int n = 0; n < static_cast<int>(node_count()); ++n) {
    out.col(n) = node_position(n);
  }
  return out;
}

bool Grid2D::contains(const Eigen::Vector2d& x, double slack) const {
  const Eigen::Vector2d rel = x - origin_;
  return rel.x() >= -slack && rel.y() >= -slack && rel.x() <= lx_ + slack && rel.y() <= ly_ + slack;
}

}  // namespace tom

#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>

namespace tom {

/// Regular rectangular mesh of nx by ny bilinear elements.
///
/// Nodes are numbered row-major from the lower-left corner:
/// node(i, j) = j * (nx + 1) + i. Elements follow the same convention,
/// element(i, j) = j * nx + i, with element (i, j) spanning nodes
/// (i, j), (i+1, j), (i+1, j+1), (i, j+1).
class Grid2D {
public:
  Grid2D(int nx, int ny, double lx, double ly, Eigen::Vector2d origin = Eigen::Vector2d::Zero());

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  const Eigen::Vector2d& origin() const { return origin_; }

  double hx() const { return lx_ / nx_; }
  double hy() const { return ly_ / ny_; }
  double element_area() const { return hx() * hy(); }
  double domain_area() const { return lx_ * ly_; }

  std::size_t node_count() const { return static_cast<std::size_t>(nx_ + 1) * (ny_ + 1); }
  std::size_t element_count() const { return static_cast<std::size_t>(nx_) * ny_; }

  int node(int i, int j) const { return j * (nx_ + 1) + i; }
  int element(int i, int j) const { return j * nx_ + i; }
  std::array<int, 2> node_ij(int node) const { return {node % (nx_ + 1), node / (nx_ + 1)}; }
  std::array<int, 2> element_ij(int element) const { return {element % nx_, element / nx_}; }

  /// Corner nodes of an element, counter-clockwise from lower-left.
  std::array<int, 4> element_nodes(int element) const;

  Eigen::Vector2d node_position(int node) const;
  Eigen::Vector2d element_centroid(int element) const;

  /// 2 x element_count() matrix of centroids, element order.
  Eigen::Matrix2Xd centroids() const;
  /// 2 x node_count() matrix of node positions, node order.
  Eigen::Matrix2Xd node_positions() const;

  bool contains(const Eigen::Vector2d& x, double slack = 0.0) const;

  friend bool operator==(const Grid2D& a, const Grid2D& b) {
    return a.nx_ == b.nx_ && a.ny_ == b.ny_ && a.lx_ == b.lx_ && a.ly_ == b.ly_ && a.origin_ == b.origin_;
  }

private:
  int nx_;
  int ny_;
  double lx_;
  double ly_;
  Eigen::Vector2d origin_;
};

}  // namespace tom

#include "tom/chamfer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tom {

std::vector<Eigen::Index> nearest_neighbors(const Eigen::Matrix2Xd& from, const Eigen::Matrix2Xd& to) {
  if (to.cols() == 0) throw std::invalid_argument("nearest_neighbors: empty target set");
  std::vector<Eigen::Index> out(static_cast<std::size_t>(from.cols()));
  for (Eigen::Index i = 0; i < from.cols(); ++i) {
    const double x = from(0, i);
    const double y = from(1, i);
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index arg = 0;
    for (Eigen::Index j = 0; j < to.cols(); ++j) {
      const double dx = x - to(0, j);
      const double dy = y - to(1, j);
      const double d2 = dx * dx + dy * dy;
      if (d2 < best) {
        best = d2;
        arg = j;
      }
    }
    out[static_cast<std::size_t>(i)] = arg;
  }
  return out;
}

double chamfer(const Eigen::Matrix2Xd& a, const Eigen::Matrix2Xd& b) {
  if (a.cols() == 0 || b.cols() == 0) throw std::invalid_argument("chamfer: empty point cloud");
  const auto nn = nearest_neighbors(a, b);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.cols(); ++i) sum += (a.col(i) - b.col(nn[static_cast<std::size_t>(i)])).norm();
  return sum / static_cast<double>(a.cols());
}

double chamfer(const BoundaryCloud& a, const BoundaryCloud& b) { return chamfer(a.points, b.points); }

double symmetric_chamfer(const BoundaryCloud& a, const BoundaryCloud& b) {
  return 0.5 * (chamfer(a, b) + chamfer(b, a));
}

ChamferGradient chamfer_spatial_grad(const Eigen::Matrix2Xd& a, const Eigen::Matrix2Xd& b) {
  if (a.cols() == 0 || b.cols() == 0) throw std::invalid_argument("chamfer_spatial_grad: empty point cloud");
  const auto nn = nearest_neighbors(a, b);
  ChamferGradient out;
  out.grad = Eigen::Matrix2Xd::Zero(2, a.cols());
  const double scale = 1.0 / static_cast<double>(a.cols());
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    const Eigen::Vector2d d = a.col(i) - b.col(nn[static_cast<std::size_t>(i)]);
    const double norm = d.norm();
    if (norm == 0.0) {
      ++out.coincident;
      continue;
    }
    out.grad.col(i) = scale * d / norm;
  }
  return out;
}

ChamferGradient chamfer_spatial_grad(const BoundaryCloud& a, const BoundaryCloud& b) {
  return chamfer_spatial_grad(a.points, b.points);
}

}  // namespace tom

#include "tom/boundary.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace tom {

BoundaryCloud extract_boundary(const FieldFunction& field, const Grid2D& grid, const BoundaryOptions& options,
                               int shape_id) {
  if (options.steps < 1) throw std::invalid_argument("extract_boundary: need at least one bisection step");
  const Eigen::Matrix2Xd nodes = grid.node_positions();
  const Eigen::VectorXd values = field(nodes);
  if (values.size() != nodes.cols()) throw std::invalid_argument("extract_boundary: field returned wrong size");
  const double level = options.level;

  std::vector<std::pair<int, int>> pairs;
  for (int j = 0; j <= grid.ny(); ++j) {
    for (int i = 0; i <= grid.nx(); ++i) {
      const int n = grid.node(i, j);
      if (!(values(n) >= level)) continue;
      const std::array<std::array<int, 2>, 4> nbrs{{{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}}};
      for (const auto& [ni, nj] : nbrs) {
        if (ni < 0 || nj < 0 || ni > grid.nx() || nj > grid.ny()) continue;
        const int m = grid.node(ni, nj);
        if (values(m) < level) pairs.emplace_back(n, m);
      }
    }
  }

  const auto count = static_cast<Eigen::Index>(pairs.size());
  Eigen::Matrix2Xd inside(2, count);
  Eigen::Matrix2Xd outside(2, count);
  for (Eigen::Index k = 0; k < count; ++k) {
    inside.col(k) = nodes.col(pairs[static_cast<std::size_t>(k)].first);
    outside.col(k) = nodes.col(pairs[static_cast<std::size_t>(k)].second);
  }
  if (count > 0) {
    for (int step = 0; step < options.steps; ++step) {
      const Eigen::Matrix2Xd mid = 0.5 * (inside + outside);
      const Eigen::VectorXd f = field(mid);
      for (Eigen::Index k = 0; k < count; ++k) {
        if (f(k) >= level) {
          inside.col(k) = mid.col(k);
        } else {
          outside.col(k) = mid.col(k);
        }
      }
    }
  }

  std::vector<Eigen::Index> keep;
  keep.reserve(pairs.size());
  const Eigen::Matrix2Xd mids = 0.5 * (inside + outside);
  for (Eigen::Index k = 0; k < count; ++k) {
    bool excluded = false;
    if (options.exclusion != nullptr && options.exclusion->epsilon > 0.0) {
      const auto& ex = options.exclusion->points;
      const double eps2 = options.exclusion->epsilon * options.exclusion->epsilon;
      for (Eigen::Index e = 0; e < ex.cols() && !excluded; ++e) {
        excluded = (ex.col(e) - mids.col(k)).squaredNorm() < eps2;
      }
    }
    if (!excluded) keep.push_back(k);
  }

  BoundaryCloud cloud;
  cloud.shape_id = shape_id;
  cloud.points.resize(2, static_cast<Eigen::Index>(keep.size()));
  cloud.bracket_width.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t r = 0; r < keep.size(); ++r) {
    const auto k = keep[r];
    const auto c = static_cast<Eigen::Index>(r);
    cloud.points.col(c) = mids.col(k);
    cloud.bracket_width(c) = (inside.col(k) - outside.col(k)).norm();
  }
  return cloud;
}

BoundaryCloud extract_boundary(const WireNet& net, const Eigen::Vector2d& z, const Grid2D& grid,
                               const BoundaryOptions& options, int shape_id) {
  return extract_boundary([&](const Eigen::Matrix2Xd& x) { return net.forward(x, z); }, grid, options, shape_id);
}

BoundaryCloud subsample(const BoundaryCloud& cloud, Eigen::Index max_points, Rng& rng) {
  if (cloud.size() <= max_points) return cloud;
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(cloud.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  // Partial Fisher-Yates with the explicit generator keeps the draw portable.
  for (Eigen::Index k = 0; k < max_points; ++k) {
    const auto remaining = static_cast<double>(cloud.size() - k);
    const auto pick = k + static_cast<Eigen::Index>(uniform01(rng) * remaining);
    std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(std::min(pick, cloud.size() - 1))]);
  }
  idx.resize(static_cast<std::size_t>(max_points));
  std::sort(idx.begin(), idx.end());
  BoundaryCloud out;
  out.shape_id = cloud.shape_id;
  out.points.resize(2, max_points);
  out.bracket_width.resize(max_points);
  for (Eigen::Index k = 0; k < max_points; ++k) {
    out.points.col(k) = cloud.points.col(idx[static_cast<std::size_t>(k)]);
    out.bracket_width(k) = cloud.bracket_width(idx[static_cast<std::size_t>(k)]);
  }
  return out;
}

void write_boundary(const std::filesystem::path& path, const BoundaryCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << std::setprecision(17);
  for (Eigen::Index k = 0; k < cloud.size(); ++k) out << cloud.points(0, k) << ' ' << cloud.points(1, k) << '\n';
}

}  // namespace tom

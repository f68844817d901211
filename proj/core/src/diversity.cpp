#include "tom/diversity.hpp"

#include "tom/chamfer.hpp"
#include "tom/parallel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tom {

DiversityReport diversity_delta(const Eigen::MatrixXd& pairwise) {
  const auto m = pairwise.rows();
  if (pairwise.cols() != m) throw std::invalid_argument("diversity_delta: matrix must be square");
  if (m < 2) throw std::invalid_argument("diversity_delta: need at least two shapes");
  if (!pairwise.allFinite() || (pairwise.array() < 0.0).any()) {
    throw std::invalid_argument("diversity_delta: dissimilarities must be finite and non-negative");
  }
  DiversityReport out;
  out.pairwise = pairwise;
  out.nearest.resize(static_cast<std::size_t>(m));
  double root_sum = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    double best = std::numeric_limits<double>::infinity();
    int arg = -1;
    for (Eigen::Index k = 0; k < m; ++k) {
      if (k == j) continue;
      if (pairwise(j, k) < best) {
        best = pairwise(j, k);
        arg = static_cast<int>(k);
      }
    }
    out.nearest[static_cast<std::size_t>(j)] = arg;
    root_sum += std::sqrt(best);
  }
  out.delta = root_sum * root_sum;
  return out;
}

Eigen::MatrixXd chamfer_matrix(const std::vector<BoundaryCloud>& clouds, int threads) {
  const auto m = static_cast<Eigen::Index>(clouds.size());
  Eigen::MatrixXd one_sided = Eigen::MatrixXd::Zero(m, m);
  parallel_for(static_cast<std::size_t>(m * m), threads, [&](std::size_t idx) {
    const auto i = static_cast<Eigen::Index>(idx) / m;
    const auto j = static_cast<Eigen::Index>(idx) % m;
    const auto& a = clouds[static_cast<std::size_t>(i)];
    const auto& b = clouds[static_cast<std::size_t>(j)];
    if (i == j || a.empty() || b.empty()) return;
    one_sided(i, j) = chamfer(a, b);
  });
  return 0.5 * (one_sided + one_sided.transpose());
}

DiversityGradient diversity_gradient(const std::vector<BoundaryCloud>& clouds, int threads) {
  DiversityGradient out;
  out.report = diversity_delta(chamfer_matrix(clouds, threads));
  out.point_grads.reserve(clouds.size());
  for (const auto& c : clouds) {
    out.point_grads.push_back(Eigen::Matrix2Xd::Zero(2, c.size()));
    if (c.empty()) ++out.empty_clouds;
  }
  const auto m = clouds.size();
  double root_sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    root_sum += std::sqrt(out.report.pairwise(static_cast<Eigen::Index>(j), out.report.nearest[j]));
  }
  for (std::size_t j = 0; j < m; ++j) {
    const auto k = static_cast<std::size_t>(out.report.nearest[j]);
    const double d = out.report.pairwise(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
    if (d < 1e-12 || clouds[j].empty() || clouds[k].empty()) continue;
    // d delta / d d_jk = S / sqrt(d_jk); d_jk averages the two one-sided terms.
    const double weight = 0.5 * root_sum / std::sqrt(d);
    const ChamferGradient gj = chamfer_spatial_grad(clouds[j], clouds[k]);
    const ChamferGradient gk = chamfer_spatial_grad(clouds[k], clouds[j]);
    out.point_grads[j] += weight * gj.grad;
    out.point_grads[k] += weight * gk.grad;
    out.coincident += gj.coincident + gk.coincident;
  }
  return out;
}

Eigen::VectorXd level_set_upstream(const Eigen::Matrix2Xd& field_grad, const Eigen::Matrix2Xd& point_upstream,
                                   int* skipped) {
  if (field_grad.cols() != point_upstream.cols()) throw std::invalid_argument("level_set_upstream: size mismatch");
  Eigen::VectorXd u = Eigen::VectorXd::Zero(field_grad.cols());
  int skip = 0;
  for (Eigen::Index b = 0; b < field_grad.cols(); ++b) {
    const double n2 = field_grad.col(b).squaredNorm();
    if (n2 < 1e-12) {
      ++skip;
      continue;
    }
    u(b) = -point_upstream.col(b).dot(field_grad.col(b)) / n2;
  }
  if (skipped != nullptr) *skipped = skip;
  return u;
}

LevelSetBackpropStats diversity_backprop(const WireNet& net, const std::vector<BoundaryCloud>& clouds,
                                         const std::vector<Eigen::Vector2d>& mods,
                                         const std::vector<Eigen::Matrix2Xd>& point_upstream, Eigen::VectorXd& grad) {
  if (clouds.size() != mods.size() || clouds.size() != point_upstream.size()) {
    throw std::invalid_argument("diversity_backprop: clouds, modulations and upstreams differ in length");
  }
  LevelSetBackpropStats stats;
  for (std::size_t c = 0; c < clouds.size(); ++c) {
    if (clouds[c].empty()) continue;
    const Eigen::Matrix2Xd zs = mods[c].replicate(1, clouds[c].size());
    const FieldGradient fg = net.spatial_gradient(clouds[c].points, zs);
    int skipped = 0;
    const Eigen::VectorXd u = level_set_upstream(fg.grad, point_upstream[c], &skipped);
    stats.skipped += skipped;
    stats.used += static_cast<int>(clouds[c].size()) - skipped;
    GradTape tape;
    net.forward(clouds[c].points, zs, tape);
    net.backward_params(tape, u, grad);
  }
  return stats;
}

double l1_volumetric_dissimilarity(const DensityGrid& a, const DensityGrid& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("l1_volumetric_dissimilarity: grids differ");
  return (a.values() - b.values()).cwiseAbs().mean() * a.grid().domain_area();
}

}  // namespace tom

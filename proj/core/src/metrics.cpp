#include "tom/metrics.hpp"

#include "tom/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace tom {

namespace {

void check_same_grid(const DensityGrid& a, const DensityGrid& b, const char* who) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument(std::string(who) + ": fields live on different grids");
}

Eigen::VectorXd weights(const DensityGrid& rho, bool binarize) {
  Eigen::VectorXd w = rho.values();
  if (binarize) w = (w.array() > 0.5).cast<double>();
  const double mass = w.sum();
  if (!(mass > 0)) throw std::invalid_argument("sliced_w1: field has zero mass");
  return w / mass;
}

double w1_1d(const Eigen::VectorXd& proj, const std::vector<Eigen::Index>& order, const Eigen::VectorXd& diff) {
  double cum = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    cum += diff(order[k]);
    total += std::abs(cum) * (proj(order[k + 1]) - proj(order[k]));
  }
  return total;
}

double sliced_from_weights(const Eigen::Matrix2Xd& centroids, const Eigen::VectorXd& wa, const Eigen::VectorXd& wb,
                           const Eigen::Matrix2Xd& directions) {
  if (directions.cols() == 0) throw std::invalid_argument("sliced_w1: need at least one direction");
  const Eigen::VectorXd diff = wa - wb;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(centroids.cols()));
  double sum = 0.0;
  for (Eigen::Index d = 0; d < directions.cols(); ++d) {
    const Eigen::VectorXd proj = (directions.col(d).transpose() * centroids).transpose();
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return proj(i) < proj(j); });
    sum += w1_1d(proj, order, diff);
  }
  return sum / static_cast<double>(directions.cols());
}

}  // namespace

int load_violation(const DensityGrid& rho, const ProblemSpec& spec, double tau, LoadViolationMode mode) {
  const Grid2D& g = spec.grid;
  if (!(rho.grid() == g)) throw std::invalid_argument("load_violation: density grid does not match the problem");
  const auto nodes = spec.load_nodes();
  if (nodes.empty()) return 0;
  int void_nodes = 0;
  for (int n : nodes) {
    const auto [i, j] = g.node_ij(n);
    bool solid = false;
    for (int dj = -1; dj <= 0; ++dj)
      for (int di = -1; di <= 0; ++di) {
        const int ei = i + di, ej = j + dj;
        if (ei < 0 || ej < 0 || ei >= g.nx() || ej >= g.ny()) continue;
        if (rho[g.element(ei, ej)] > tau) solid = true;
      }
    if (!solid) ++void_nodes;
  }
  if (mode == LoadViolationMode::Any) return void_nodes > 0 ? 1 : 0;
  return void_nodes == static_cast<int>(nodes.size()) ? 1 : 0;
}

double load_violation_ratio(const std::vector<DensityGrid>& batch, const ProblemSpec& spec, double tau,
                            LoadViolationMode mode) {
  if (batch.empty()) return 0.0;
  int sum = 0;
  for (const auto& rho : batch) sum += load_violation(rho, spec, tau, mode);
  return static_cast<double>(sum) / static_cast<double>(batch.size());
}

Eigen::Matrix2Xd random_directions(int count, Rng& rng) {
  if (count < 1) throw std::invalid_argument("random_directions: count must be positive");
  Eigen::Matrix2Xd d(2, count);
  for (int k = 0; k < count; ++k) {
    const double phi = 2.0 * std::numbers::pi * uniform01(rng);
    d.col(k) << std::cos(phi), std::sin(phi);
  }
  return d;
}

double sliced_w1(const DensityGrid& a, const DensityGrid& b, const Eigen::Matrix2Xd& directions,
                 const SlicedW1Options& options) {
  check_same_grid(a, b, "sliced_w1");
  return sliced_from_weights(a.grid().centroids(), weights(a, options.binarize), weights(b, options.binarize),
                             directions);
}

double sliced_w1(const DensityGrid& a, const DensityGrid& b, int n_projections, Rng& rng,
                 const SlicedW1Options& options) {
  return sliced_w1(a, b, random_directions(n_projections, rng), options);
}

Eigen::MatrixXd sliced_w1_matrix(const std::vector<DensityGrid>& batch, const Eigen::Matrix2Xd& directions,
                                 const SlicedW1Options& options, int threads) {
  const auto M = static_cast<Eigen::Index>(batch.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(M, M);
  if (M == 0) return out;
  for (const auto& rho : batch) check_same_grid(batch.front(), rho, "sliced_w1_matrix");
  const Eigen::Matrix2Xd centroids = batch.front().grid().centroids();
  std::vector<Eigen::VectorXd> w;
  w.reserve(batch.size());
  for (const auto& rho : batch) w.push_back(weights(rho, options.binarize));
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (Eigen::Index i = 0; i < M; ++i)
    for (Eigen::Index j = i + 1; j < M; ++j) pairs.emplace_back(i, j);
  parallel_for(pairs.size(), threads, [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    const double d = sliced_from_weights(centroids, w[static_cast<std::size_t>(i)], w[static_cast<std::size_t>(j)],
                                         directions);
    out(i, j) = d;
    out(j, i) = d;
  });
  return out;
}

double hill_d2(const Eigen::MatrixXd& pairwise) {
  if (pairwise.rows() != pairwise.cols()) throw std::invalid_argument("hill_d2: matrix must be square");
  if (pairwise.size() == 0) return 0.0;
  return pairwise.sum() / static_cast<double>(pairwise.size());
}

double hausdorff(const Eigen::Matrix2Xd& a, const Eigen::Matrix2Xd& b) {
  if (a.cols() == 0 || b.cols() == 0) throw std::invalid_argument("hausdorff: empty cloud");
  auto one_sided = [](const Eigen::Matrix2Xd& p, const Eigen::Matrix2Xd& q) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < p.cols(); ++i)
      worst = std::max(worst, (q.colwise() - p.col(i)).colwise().squaredNorm().minCoeff());
    return std::sqrt(worst);
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

double hausdorff(const BoundaryCloud& a, const BoundaryCloud& b) { return hausdorff(a.points, b.points); }

double dssim(const DensityGrid& a, const DensityGrid& b, int window) {
  check_same_grid(a, b, "dssim");
  const int nx = a.grid().nx(), ny = a.grid().ny();
  if (window < 2 || window > nx || window > ny) throw std::invalid_argument("dssim: window does not fit the grid");
  constexpr double c1 = 1e-4, c2 = 9e-4;
  const double n = static_cast<double>(window) * window;
  double total = 0.0;
  int count = 0;
  for (int j0 = 0; j0 + window <= ny; ++j0)
    for (int i0 = 0; i0 + window <= nx; ++i0) {
      double sa = 0, sb = 0;
      for (int j = j0; j < j0 + window; ++j)
        for (int i = i0; i < i0 + window; ++i) {
          const int e = a.grid().element(i, j);
          sa += a[e];
          sb += b[e];
        }
      const double ma = sa / n, mb = sb / n;
      double vaa = 0, vbb = 0, vab = 0;
      for (int j = j0; j < j0 + window; ++j)
        for (int i = i0; i < i0 + window; ++i) {
          const int e = a.grid().element(i, j);
          const double da = a[e] - ma, db = b[e] - mb;
          vaa += da * da;
          vbb += db * db;
          vab += da * db;
        }
      vaa /= n - 1;
      vbb /= n - 1;
      vab /= n - 1;
      total += ((2 * ma * mb + c1) * (2 * vab + c2)) / ((ma * ma + mb * mb + c1) * (vaa + vbb + c2));
      ++count;
    }
  const double mean_ssim = total / count;
  return std::clamp((1.0 - mean_ssim) / 2.0, 0.0, 1.0);
}

}  // namespace tom

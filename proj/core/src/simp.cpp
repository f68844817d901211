#include "tom/simp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tom {

namespace {

int mirror(int k, int n) {
  if (k < 0) return -1 - k;
  if (k >= n) return 2 * n - 1 - k;
  return k;
}

}  // namespace

DensityFilter::DensityFilter(const Grid2D& grid, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("DensityFilter: radius must be positive");
  const int rx = static_cast<int>(std::ceil(radius / grid.hx()));
  const int ry = static_cast<int>(std::ceil(radius / grid.hy()));
  if (rx > grid.nx() || ry > grid.ny()) throw std::invalid_argument("DensityFilter: radius exceeds grid extent");

  double total = 0.0;
  for (int dj = -ry; dj <= ry; ++dj) {
    for (int di = -rx; di <= rx; ++di) {
      total += std::max(0.0, radius - std::hypot(di * grid.hx(), dj * grid.hy()));
    }
  }
  std::vector<Eigen::Triplet<double>> triplets;
  const int ne = static_cast<int>(grid.element_count());
  triplets.reserve(static_cast<std::size_t>(ne) * static_cast<std::size_t>((2 * rx + 1) * (2 * ry + 1)));
  for (int e = 0; e < ne; ++e) {
    const auto [i, j] = grid.element_ij(e);
    for (int dj = -ry; dj <= ry; ++dj) {
      for (int di = -rx; di <= rx; ++di) {
        const double w = std::max(0.0, radius - std::hypot(di * grid.hx(), dj * grid.hy()));
        if (w <= 0.0) continue;
        const int k = grid.element(mirror(i + di, grid.nx()), mirror(j + dj, grid.ny()));
        triplets.emplace_back(e, k, w / total);
      }
    }
  }
  weights_.resize(ne, ne);
  weights_.setFromTriplets(triplets.begin(), triplets.end());
  weights_.makeCompressed();
}

SimpResult optimize_simp(const ProblemSpec& spec, const SimpOptions& options,
                         const std::optional<Eigen::VectorXd>& initial, int start_iteration) {
  if (!(options.move_limit > 0.0 && options.move_limit <= 0.5)) {
    throw std::invalid_argument("optimize_simp: move limit must lie in (0, 0.5]");
  }
  if (options.iterations < 0) throw std::invalid_argument("optimize_simp: negative iteration count");
  options.beta.validate();

  const Grid2D& grid = spec.grid;
  const FemSolver solver(spec);
  const double radius = options.filter_radius > 0.0 ? options.filter_radius : 1.5 * grid.hx();
  const DensityFilter filter(grid, radius);
  const double target = spec.volume_target;
  const auto ne = static_cast<Eigen::Index>(grid.element_count());

  Eigen::VectorXd x;
  if (initial) {
    if (initial->size() != ne) throw std::invalid_argument("optimize_simp: initial field size mismatch");
    x = *initial;
  } else {
    x = Eigen::VectorXd::Constant(ne, heaviside_inverse(target, options.beta.beta(start_iteration)));
  }

  SimpResult result{.design = DensityGrid::uniform(grid, 0.0), .design_variables = x};
  const auto projected = [&](const Eigen::VectorXd& design, double beta) {
    return heaviside(filter.apply(design), beta).cwiseMax(0.0).cwiseMin(1.0).eval();
  };

  for (int it = 0; it < options.iterations; ++it) {
    const double beta = options.beta.beta(start_iteration + it);
    const Eigen::VectorXd filtered = filter.apply(x);
    const DensityGrid rho(grid, heaviside(filtered, beta).cwiseMax(0.0).cwiseMin(1.0));
    const FemSolution sol = solver.solve(rho, options.penalty);
    if (!std::isfinite(sol.compliance)) throw FemError("optimize_simp: non-finite compliance");
    result.compliance.push_back(sol.compliance);
    result.volume_fraction.push_back(rho.volume_fraction());

    const Eigen::VectorXd dh = heaviside_grad(filtered, beta);
    const Eigen::VectorXd dc = filter.backprop(sol.dc_drho.cwiseProduct(dh));
    const Eigen::VectorXd dv = filter.backprop(dh).cwiseMax(1e-30);
    const Eigen::VectorXd ratio = (-dc).cwiseMax(0.0).cwiseQuotient(dv);
    const Eigen::VectorXd lower = (x.array() - options.move_limit).cwiseMax(0.0);
    const Eigen::VectorXd upper = (x.array() + options.move_limit).cwiseMin(1.0);

    const auto update = [&](double lambda) {
      return (x.array() * (ratio.array() / lambda).sqrt()).max(lower.array()).min(upper.array()).matrix().eval();
    };
    double log_lo = -40.0 * std::log(10.0);
    double log_hi = 40.0 * std::log(10.0);
    Eigen::VectorXd candidate = x;
    bool matched = false;
    for (int k = 0; k < 100; ++k) {
      const double log_mid = 0.5 * (log_lo + log_hi);
      candidate = update(std::exp(log_mid));
      const double vol = projected(candidate, beta).mean();
      if (std::abs(vol - target) < options.volume_tolerance) {
        matched = true;
        break;
      }
      if (vol > target) {
        log_lo = log_mid;
      } else {
        log_hi = log_mid;
      }
    }
    if (!matched) ++result.bisection_failures;
    x = candidate;
  }

  const double final_beta = options.beta.beta(start_iteration + std::max(0, options.iterations - 1));
  result.design = DensityGrid(grid, projected(x, final_beta));
  result.design_variables = x;
  result.final_compliance = solver.solve(result.design, options.penalty).compliance;
  return result;
}

SimpResult finetune(const DensityGrid& initial, const ProblemSpec& spec, double fraction, double lr_scale,
                    const SimpOptions& base) {
  if (!(initial.grid() == spec.grid)) throw std::invalid_argument("finetune: density grid does not match problem");
  if (fraction < 0.0 || fraction > 1.0) throw std::invalid_argument("finetune: fraction must lie in [0, 1]");
  const int steps = static_cast<int>(std::lround(fraction * base.iterations));
  if (steps == 0) {
    const FemSolver solver(spec);
    SimpResult identity{.design = initial, .design_variables = initial.values()};
    identity.final_compliance = solver.solve(initial, base.penalty).compliance;
    return identity;
  }
  SimpOptions options = base;
  options.iterations = steps;
  options.move_limit = std::min(0.5, base.move_limit * lr_scale);
  return optimize_simp(spec, options, initial.values(), base.iterations - steps);
}

}  // namespace tom

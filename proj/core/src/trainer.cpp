#include "tom/trainer.hpp"

#include "tom/boundary.hpp"
#include "tom/diversity.hpp"
#include "tom/fem.hpp"
#include "tom/filters.hpp"
#include "tom/optimizer.hpp"
#include "tom/parallel.hpp"
#include "tom/random.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace tom {

namespace {

Eigen::Matrix2Xd broadcast(const Eigen::Vector2d& z, Eigen::Index n) { return z.replicate(1, n); }

Eigen::VectorXd project(const Eigen::VectorXd& field, double beta) {
  return heaviside(field, beta).cwiseMax(0.0).cwiseMin(1.0);
}

std::string theta_stats(const Eigen::VectorXd& theta) {
  int bad = 0;
  double max_abs = 0.0;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    if (!std::isfinite(theta(i))) ++bad;
    else max_abs = std::max(max_abs, std::abs(theta(i)));
  }
  std::ostringstream os;
  os << "theta: " << theta.size() << " params, " << bad << " non-finite, max |theta| = " << max_abs;
  return os.str();
}

struct ShapeWork {
  GradTape tape;
  Eigen::VectorXd field;
  Eigen::VectorXd hgrad;
  FemSolution sol;
  double volume_fraction = 0.0;
  BoundaryCloud cloud;
  std::optional<PointLoss> interface;
  std::optional<NormalLoss> normal;
  std::optional<PointLoss> design;
  GradTape interface_tape;
  GradTape design_tape;
  Eigen::VectorXd grad;
};

}  // namespace

const char* constraint_name(int id) {
  switch (id) {
    case kVolume: return "volume";
    case kDiversity: return "diversity";
    case kInterface: return "interface";
    case kNormal: return "normal";
    case kDesignRegion: return "design_region";
    default: return "unknown";
  }
}

DensityGrid shape_density(const WireNet& net, const Eigen::Vector2d& z, const Grid2D& grid, double beta) {
  return DensityGrid(grid, project(net.forward(grid.centroids(), z), beta));
}

double final_beta(const RunConfig& config) { return config.beta.beta(std::max(0, config.iterations - 1)); }

double reference_compliance(const ProblemSpec& spec, double penalty) {
  const FemSolver solver(spec);
  return solver.solve(DensityGrid::uniform(spec.grid, spec.volume_target), penalty).compliance;
}

TrainResult train(const ProblemSpec& spec, const RunConfig& config, const TrainHooks& hooks) {
  spec.validate();
  config.validate();
  config.beta.validate();
  if (spec.grid.nx() != config.nx || spec.grid.ny() != config.ny)
    throw std::invalid_argument("train: problem grid does not match the config");
  if (hooks.interface) hooks.interface->validate();

  const int M = config.shapes;
  const int threads = std::max(1, hooks.threads);
  const Grid2D& grid = spec.grid;
  const Eigen::Matrix2Xd centroids = grid.centroids();
  const auto n_el = centroids.cols();
  const FemSolver solver(spec);

  Rng rng(config.seed);
  TrainResult result{WireNet::initialized(config.hidden_layers, config.omega0, config.s0, rng, config.seed), {}, {}};
  WireNet& net = result.net;
  RunReport& report = result.report;
  AlmState& alm = result.alm;
  alm = AlmState(kConstraintCount,
                 {.mu0 = config.alm_mu0, .growth = config.alm_growth, .patience = config.alm_patience,
                  .decay = config.alm_decay});

  try {
    report.compliance_reference =
        solver.solve(DensityGrid::uniform(grid, spec.volume_target), config.penalty).compliance;
  } catch (const FemError& e) {
    throw TrainError(std::string("FEM solve failed before iteration 0 (reference compliance): ") + e.what());
  }
  const double c_ref = report.compliance_reference;

  // Centroids outside the design region carry the design-region penalty.
  Eigen::Matrix2Xd outside;
  if (hooks.interface && hooks.interface->in_design_region && config.design_region_scale > 0) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index e = 0; e < n_el; ++e)
      if (!hooks.interface->in_design_region(centroids.col(e))) idx.push_back(e);
    outside.resize(2, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) outside.col(static_cast<Eigen::Index>(k)) = centroids.col(idx[k]);
  }
  const bool use_interface = hooks.interface && hooks.interface->points.cols() > 0 && config.interface_scale > 0;
  const bool use_normal = use_interface && hooks.interface->normals && config.normal_scale > 0;
  const bool use_design = outside.cols() > 0;

  BoundaryOptions bopts{.level = spec.level, .steps = config.boundary_steps, .exclusion = hooks.interface};

  Adam adam(net.parameter_count());
  std::vector<ShapeWork> work(static_cast<std::size_t>(M));

  for (int t = 0; t < config.iterations; ++t) {
    const auto t_start = std::chrono::steady_clock::now();
    const double beta = config.beta.beta(t);
    const double lr = lr_schedule(t, config.learning_rate, config.lr_decay);
    const auto mods = sample_modulations(rng, M, config.radius, config.modulation);
    std::vector<std::uint64_t> shape_seeds(static_cast<std::size_t>(M));
    for (auto& s : shape_seeds) s = rng();
    const bool diversity_on = config.diversity && t >= config.diversity_start;

    parallel_for(static_cast<std::size_t>(M), threads, [&](std::size_t j) {
      ShapeWork& w = work[j];
      const Eigen::Vector2d& z = mods[j];
      w.field = net.forward(centroids, broadcast(z, n_el), w.tape);
      const Eigen::VectorXd rho = project(w.field, beta);
      w.hgrad = heaviside_grad(w.field, beta);
      try {
        w.sol = solver.solve(DensityGrid(grid, rho), config.penalty);
      } catch (const FemError& e) {
        throw TrainError("FEM solve failed at iteration " + std::to_string(t) + ", shape " + std::to_string(j) + ": " +
                         e.what());
      }
      w.volume_fraction = rho.mean();
      if (diversity_on) {
        Rng local(shape_seeds[j]);
        w.cloud = subsample(extract_boundary(net, z, grid, bopts, static_cast<int>(j)), config.boundary_max_points,
                            local);
      } else {
        w.cloud = BoundaryCloud{};
      }
      if (use_interface) {
        const auto& pts = hooks.interface->points;
        const Eigen::VectorXd f = net.forward(pts, broadcast(z, pts.cols()), w.interface_tape);
        w.interface = interface_loss(f, spec.level);
        if (use_normal) w.normal = normal_loss(net, z, *hooks.interface);
      }
      if (use_design) {
        const Eigen::VectorXd f = net.forward(outside, broadcast(z, outside.cols()), w.design_tape);
        w.design = design_region_loss(f, spec.level);
      }
    });

    // Reductions in shape order.
    double objective = 0.0;
    std::array<double, kConstraintCount> c{};
    std::vector<double> vol_slope(static_cast<std::size_t>(M), 0.0);
    for (int j = 0; j < M; ++j) {
      const ShapeWork& w = work[static_cast<std::size_t>(j)];
      objective += config.compliance_scale * w.sol.compliance / (c_ref * M);
      const double dv = w.volume_fraction - spec.volume_target;
      if (config.volume_mode == VolumeMode::Hinge) {
        c[kVolume] += config.volume_scale * std::max(0.0, dv) / M;
        vol_slope[static_cast<std::size_t>(j)] = dv > 0 ? 1.0 : 0.0;
      } else {
        c[kVolume] += config.volume_scale * std::abs(dv) / M;
        vol_slope[static_cast<std::size_t>(j)] = dv > 0 ? 1.0 : (dv < 0 ? -1.0 : 0.0);
      }
      if (w.interface) c[kInterface] += config.interface_scale * w.interface->value / M;
      if (w.normal) c[kNormal] += config.normal_scale * w.normal->value / M;
      if (w.design) c[kDesignRegion] += config.design_region_scale * w.design->value / M;
    }

    IterationRow row;
    row.iteration = t;
    row.beta = beta;
    row.learning_rate = lr;
    row.objective = objective;
    row.delta = std::numeric_limits<double>::quiet_NaN();

    std::optional<DiversityGradient> dgrad;
    std::vector<BoundaryCloud> clouds;
    if (diversity_on) {
      clouds.reserve(static_cast<std::size_t>(M));
      for (const auto& w : work) clouds.push_back(w.cloud);
      dgrad = diversity_gradient(clouds, threads);
      row.delta = dgrad->report.delta;
      c[kDiversity] = config.diversity_scale * std::max(0.0, config.delta_star - row.delta);
    }

    std::array<double, kConstraintCount> k{};
    double loss = objective;
    for (int i = 0; i < kConstraintCount; ++i) {
      k[static_cast<std::size_t>(i)] = alm.coefficient(i, c[static_cast<std::size_t>(i)]);
      loss += alm.penalty(i, c[static_cast<std::size_t>(i)]);
    }
    row.loss = loss;

    parallel_for(static_cast<std::size_t>(M), threads, [&](std::size_t j) {
      ShapeWork& w = work[j];
      w.grad = Eigen::VectorXd::Zero(net.parameter_count());
      Eigen::VectorXd rho_up = (config.compliance_scale / (c_ref * M)) * w.sol.dc_drho;
      if (vol_slope[j] != 0.0 && k[kVolume] != 0.0)
        rho_up.array() += k[kVolume] * config.volume_scale * vol_slope[j] / (static_cast<double>(M) * n_el);
      net.backward_params(w.tape, (rho_up.array() * w.hgrad.array()).matrix(), w.grad);
      if (w.interface && k[kInterface] != 0.0)
        net.backward_params(w.interface_tape, (k[kInterface] * config.interface_scale / M) * w.interface->upstream,
                            w.grad);
      if (w.design && k[kDesignRegion] != 0.0)
        net.backward_params(w.design_tape, (k[kDesignRegion] * config.design_region_scale / M) * w.design->upstream,
                            w.grad);
      if (w.normal && k[kNormal] != 0.0) {
        const auto& pts = hooks.interface->points;
        net.backward_spatial(pts, broadcast(mods[j], pts.cols()), Eigen::VectorXd::Zero(pts.cols()),
                             (k[kNormal] * config.normal_scale / M) * w.normal->upstream, w.grad);
      }
    });

    Eigen::VectorXd grad = Eigen::VectorXd::Zero(net.parameter_count());
    for (const auto& w : work) grad += w.grad;

    if (dgrad && k[kDiversity] != 0.0 && c[kDiversity] > 0.0) {
      std::vector<Eigen::Matrix2Xd> up(dgrad->point_grads.size());
      for (std::size_t j = 0; j < up.size(); ++j)
        up[j] = (-k[kDiversity] * config.diversity_scale) * dgrad->point_grads[j];
      const auto stats = diversity_backprop(net, clouds, mods, up, grad);
      row.skipped_points = stats.skipped;
    }

    if (!std::isfinite(loss) || !grad.allFinite())
      throw TrainError("non-finite loss or gradient at iteration " + std::to_string(t) + "; " + theta_stats(net.theta()));

    adam.step(net.theta(), grad, lr);
    if (!net.theta().allFinite())
      throw TrainError("non-finite parameters after iteration " + std::to_string(t) + "; " + theta_stats(net.theta()));

    for (int i = 0; i < kConstraintCount; ++i) {
      row.violation[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)];
      row.lambda[static_cast<std::size_t>(i)] = alm.constraints[static_cast<std::size_t>(i)].lambda;
      row.mu[static_cast<std::size_t>(i)] = alm.constraints[static_cast<std::size_t>(i)].mu;
    }
    alm = alm_update(alm, std::vector<double>(c.begin(), c.end()));

    for (int j = 0; j < M; ++j) {
      const ShapeWork& w = work[static_cast<std::size_t>(j)];
      report.shapes.push_back({.iteration = t,
                               .shape = j,
                               .compliance = w.sol.compliance,
                               .volume_fraction = w.volume_fraction,
                               .boundary_points = static_cast<int>(w.cloud.size())});
    }
    report.iterations.push_back(row);
    report.seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count());

    if (hooks.progress) hooks.progress(row);
    if (hooks.checkpoint && config.checkpoint_every > 0 && (t + 1) % config.checkpoint_every == 0)
      hooks.checkpoint(t + 1, net);
  }
  return result;
}

}  // namespace tom

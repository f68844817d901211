#include "tom/fem.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tom {

ElementMatrix element_stiffness(double nu, double hx, double hy) {
  const double c = 1.0 / (1.0 - nu * nu);
  Eigen::Matrix3d d;
  d << c, c * nu, 0.0, c * nu, c, 0.0, 0.0, 0.0, c * (1.0 - nu) / 2.0;

  constexpr std::array<double, 4> xi_a{-1.0, 1.0, 1.0, -1.0};
  constexpr std::array<double, 4> eta_a{-1.0, -1.0, 1.0, 1.0};
  const double g = 1.0 / std::sqrt(3.0);
  const double det_j = hx * hy / 4.0;

  ElementMatrix ke = ElementMatrix::Zero();
  for (double xi : {-g, g}) {
    for (double eta : {-g, g}) {
      Eigen::Matrix<double, 3, 8> b = Eigen::Matrix<double, 3, 8>::Zero();
      for (int a = 0; a < 4; ++a) {
        const double dx = xi_a[a] * (1.0 + eta * eta_a[a]) / 4.0 * (2.0 / hx);
        const double dy = eta_a[a] * (1.0 + xi * xi_a[a]) / 4.0 * (2.0 / hy);
        b(0, 2 * a) = dx;
        b(1, 2 * a + 1) = dy;
        b(2, 2 * a) = dy;
        b(2, 2 * a + 1) = dx;
      }
      ke.noalias() += b.transpose() * d * b * det_j;
    }
  }
  return 0.5 * (ke + ke.transpose());
}

double simp_modulus(double rho, double penalty) {
  return kDensityFloor + (1.0 - kDensityFloor) * std::pow(rho, penalty);
}

double simp_modulus_derivative(double rho, double penalty) {
  if (penalty == 1.0) return 1.0 - kDensityFloor;
  return (1.0 - kDensityFloor) * penalty * std::pow(rho, penalty - 1.0);
}

FemSolver::FemSolver(ProblemSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  const Grid2D& grid = spec_.grid;
  ke_ = element_stiffness(spec_.poisson_ratio, grid.hx(), grid.hy());

  const int ndof = 2 * static_cast<int>(grid.node_count());
  std::vector<char> fixed(static_cast<std::size_t>(ndof), 0);
  for (const auto& f : spec_.fixed_dofs) fixed[static_cast<std::size_t>(f.dof())] = 1;
  full_to_free_.assign(static_cast<std::size_t>(ndof), -1);
  for (int d = 0; d < ndof; ++d) {
    if (!fixed[static_cast<std::size_t>(d)]) {
      full_to_free_[static_cast<std::size_t>(d)] = static_cast<int>(free_to_full_.size());
      free_to_full_.push_back(d);
    }
  }

  const int ne = static_cast<int>(grid.element_count());
  element_dofs_.resize(static_cast<std::size_t>(ne));
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(ne) * 36);
  for (int e = 0; e < ne; ++e) {
    const auto nodes = grid.element_nodes(e);
    auto& dofs = element_dofs_[static_cast<std::size_t>(e)];
    for (int a = 0; a < 4; ++a) {
      dofs[2 * a] = 2 * nodes[a];
      dofs[2 * a + 1] = 2 * nodes[a] + 1;
    }
    for (int a = 0; a < 8; ++a) {
      const int ra = full_to_free_[static_cast<std::size_t>(dofs[a])];
      if (ra < 0) continue;
      for (int b = 0; b < 8; ++b) {
        const int rb = full_to_free_[static_cast<std::size_t>(dofs[b])];
        if (rb < 0 || ra < rb) continue;
        triplets.emplace_back(ra, rb, 1.0);
      }
    }
  }
  const auto nfree = static_cast<Eigen::Index>(free_to_full_.size());
  pattern_.resize(nfree, nfree);
  pattern_.setFromTriplets(triplets.begin(), triplets.end());
  pattern_.makeCompressed();

  const auto slot_of = [&](int row, int col) {
    const int* inner = pattern_.innerIndexPtr();
    const int begin = pattern_.outerIndexPtr()[col];
    const int end = pattern_.outerIndexPtr()[col + 1];
    const int* it = std::lower_bound(inner + begin, inner + end, row);
    return static_cast<int>(it - pattern_.innerIndexPtr());
  };
  slots_.resize(static_cast<std::size_t>(ne));
  for (int e = 0; e < ne; ++e) {
    const auto& dofs = element_dofs_[static_cast<std::size_t>(e)];
    auto& slots = slots_[static_cast<std::size_t>(e)];
    for (int a = 0; a < 8; ++a) {
      for (int b = 0; b < 8; ++b) {
        const int ra = full_to_free_[static_cast<std::size_t>(dofs[a])];
        const int rb = full_to_free_[static_cast<std::size_t>(dofs[b])];
        slots[static_cast<std::size_t>(8 * a + b)] = (ra < 0 || rb < 0 || ra < rb) ? -1 : slot_of(ra, rb);
      }
    }
  }

  const Eigen::VectorXd f = spec_.load_vector();
  free_load_.resize(nfree);
  for (Eigen::Index r = 0; r < nfree; ++r) free_load_(r) = f(free_to_full_[static_cast<std::size_t>(r)]);
}

void FemSolver::check_input(const DensityGrid& rho, double penalty) const {
  if (!(rho.grid() == spec_.grid)) throw std::invalid_argument("FemSolver: density grid does not match problem grid");
  if (!(penalty >= 1.0) || !std::isfinite(penalty)) throw std::invalid_argument("FemSolver: penalty must be >= 1");
  if (!rho.values().allFinite()) throw std::invalid_argument("FemSolver: non-finite densities");
}

Eigen::VectorXd FemSolver::assemble_values(const DensityGrid& rho, double penalty) const {
  Eigen::VectorXd values = Eigen::VectorXd::Zero(pattern_.nonZeros());
  const double modulus = spec_.youngs_modulus;
  for (std::size_t e = 0; e < slots_.size(); ++e) {
    const double s = modulus * simp_modulus(rho[static_cast<Eigen::Index>(e)], penalty);
    const auto& slots = slots_[e];
    for (int k = 0; k < 64; ++k) {
      const int slot = slots[static_cast<std::size_t>(k)];
      if (slot >= 0) values(slot) += s * ke_(k / 8, k % 8);
    }
  }
  return values;
}

Eigen::SparseMatrix<double> FemSolver::reduced_stiffness(const DensityGrid& rho, double penalty) const {
  check_input(rho, penalty);
  Eigen::SparseMatrix<double> lower = pattern_;
  const Eigen::VectorXd values = assemble_values(rho, penalty);
  std::copy(values.data(), values.data() + values.size(), lower.valuePtr());
  Eigen::SparseMatrix<double> full = lower.selfadjointView<Eigen::Lower>();
  return full;
}

Eigen::VectorXd FemSolver::element_energies(const Eigen::VectorXd& u) const {
  Eigen::VectorXd energy(static_cast<Eigen::Index>(element_dofs_.size()));
  Eigen::Matrix<double, 8, 1> ue;
  for (std::size_t e = 0; e < element_dofs_.size(); ++e) {
    for (int a = 0; a < 8; ++a) ue(a) = u(element_dofs_[e][static_cast<std::size_t>(a)]);
    energy(static_cast<Eigen::Index>(e)) = ue.dot(ke_ * ue);
  }
  return energy;
}

FemSolution FemSolver::solve(const DensityGrid& rho, double penalty) const {
  check_input(rho, penalty);
  Eigen::SparseMatrix<double> k = pattern_;
  const Eigen::VectorXd values = assemble_values(rho, penalty);
  std::copy(values.data(), values.data() + values.size(), k.valuePtr());

  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower> llt(k);
  if (llt.info() != Eigen::Success) {
    throw FemError("FEM: stiffness matrix is not positive definite (insufficient supports?)");
  }
  const Eigen::VectorXd diag = llt.matrixL().nestedExpression().diagonal();
  const double max_pivot = diag.cwiseAbs2().maxCoeff();
  const double min_pivot = diag.cwiseAbs2().minCoeff();
  if (!(min_pivot > 1e-13 * max_pivot)) {
    throw FemError("FEM: stiffness matrix is singular (insufficient supports?)");
  }
  const Eigen::VectorXd u_free = llt.solve(free_load_);
  if (llt.info() != Eigen::Success || !u_free.allFinite()) {
    throw FemError("FEM: linear solve failed");
  }

  FemSolution sol;
  sol.u = Eigen::VectorXd::Zero(2 * static_cast<Eigen::Index>(spec_.grid.node_count()));
  for (Eigen::Index r = 0; r < u_free.size(); ++r) sol.u(free_to_full_[static_cast<std::size_t>(r)]) = u_free(r);
  sol.compliance = free_load_.dot(u_free);

  const Eigen::VectorXd energy = element_energies(sol.u);
  const auto ne = static_cast<Eigen::Index>(spec_.grid.element_count());
  sol.dc_drho.resize(ne);
  for (Eigen::Index e = 0; e < ne; ++e) {
    sol.dc_drho(e) = -spec_.youngs_modulus * simp_modulus_derivative(rho[e], penalty) * energy(e);
  }
  const double area = spec_.grid.element_area();
  sol.volume = rho.values().sum() * area;
  sol.dv_drho = Eigen::VectorXd::Constant(ne, area);
  return sol;
}

FemSolution assemble_and_solve(const ProblemSpec& spec, const DensityGrid& rho, double penalty) {
  return FemSolver(spec).solve(rho, penalty);
}

double DerivativeCheck::relative_error() const {
  const double scale = std::max(std::abs(analytic), std::abs(numeric));
  return scale == 0.0 ? 0.0 : std::abs(analytic - numeric) / scale;
}

DerivativeCheck stiffness_derivative_check(const ProblemSpec& spec, const DensityGrid& rho, double penalty,
                                           int element, double step) {
  const FemSolver solver(spec);
  const FemSolution base = solver.solve(rho, penalty);
  Eigen::VectorXd plus = rho.values();
  Eigen::VectorXd minus = rho.values();
  plus(element) += step;
  minus(element) -= step;
  const double c_plus = solver.solve(DensityGrid(rho.grid(), plus), penalty).compliance;
  const double c_minus = solver.solve(DensityGrid(rho.grid(), minus), penalty).compliance;
  return {base.dc_drho(element), (c_plus - c_minus) / (2.0 * step)};
}

}  // namespace tom

#include "tom/density.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>
#include <string>

namespace tom {

DensityGrid::DensityGrid(Grid2D grid, Eigen::VectorXd values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != static_cast<Eigen::Index>(grid_.element_count())) {
    throw std::invalid_argument("DensityGrid: expected " + std::to_string(grid_.element_count()) + " values, got " +
                                std::to_string(values_.size()));
  }
  for (Eigen::Index e = 0; e < values_.size(); ++e) {
    const double v = values_(e);
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw std::invalid_argument("DensityGrid: value " + std::to_string(v) + " at element " + std::to_string(e) +
                                  " outside [0, 1]");
    }
  }
}

DensityGrid DensityGrid::uniform(const Grid2D& grid, double value) {
  return {grid, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(grid.element_count()), value)};
}

void write_density(const std::filesystem::path& path, const DensityGrid& rho) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  const auto& g = rho.grid();
  out << std::setprecision(17);
  out << g.nx() << ' ' << g.ny() << ' ' << g.lx() << ' ' << g.ly() << '\n';
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (i) out << ' ';
      out << rho[g.element(i, j)];
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

DensityGrid read_density(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open density file " + path.string());
  int nx = 0;
  int ny = 0;
  double lx = 0.0;
  double ly = 0.0;
  if (!(in >> nx >> ny >> lx >> ly)) throw std::runtime_error("malformed density header in " + path.string());
  Grid2D grid(nx, ny, lx, ly);
  Eigen::VectorXd values(static_cast<Eigen::Index>(grid.element_count()));
  for (Eigen::Index e = 0; e < values.size(); ++e) {
    if (!(in >> values(e))) {
      throw std::runtime_error("density file " + path.string() + " truncated at value " + std::to_string(e));
    }
  }
  return {grid, values};
}

void write_pgm(const std::filesystem::path& path, const DensityGrid& rho) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  const auto& g = rho.grid();
  out << "P5\n" << g.nx() << ' ' << g.ny() << "\n255\n";
  for (int j = g.ny() - 1; j >= 0; --j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double v = rho[g.element(i, j)];
      out.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * (1.0 - v)))));
    }
  }
}

}  // namespace tom

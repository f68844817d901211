#include "tom/geometric.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tom {

void InterfaceSpec::validate() const {
  if (!points.allFinite()) throw std::invalid_argument("InterfaceSpec: non-finite point");
  if (normals) {
    if (normals->cols() != points.cols()) throw std::invalid_argument("InterfaceSpec: normal count mismatch");
    for (Eigen::Index k = 0; k < normals->cols(); ++k) {
      if (std::abs(normals->col(k).norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("InterfaceSpec: normal " + std::to_string(k) + " is not unit length");
      }
    }
  }
  if (epsilon < 0.0) throw std::invalid_argument("InterfaceSpec: negative exclusion radius");
}

InterfaceSpec read_interface(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open interface file " + path.string());
  std::vector<Eigen::Vector2d> pts;
  std::vector<Eigen::Vector2d> nrm;
  std::optional<bool> with_normals;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::vector<double> vals;
    for (double v; ls >> v;) vals.push_back(v);
    if (!ls.eof() || (vals.size() != 2 && vals.size() != 4)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected 'x y' or 'x y nx ny'");
    }
    const bool has = vals.size() == 4;
    if (with_normals && *with_normals != has) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": inconsistent normal columns");
    }
    with_normals = has;
    pts.emplace_back(vals[0], vals[1]);
    if (has) {
      Eigen::Vector2d n(vals[2], vals[3]);
      if (!(n.norm() > 0.0)) throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": zero normal");
      nrm.push_back(n.normalized());
    }
  }
  InterfaceSpec spec;
  spec.points.resize(2, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t k = 0; k < pts.size(); ++k) spec.points.col(static_cast<Eigen::Index>(k)) = pts[k];
  if (with_normals.value_or(false)) {
    Eigen::Matrix2Xd n(2, static_cast<Eigen::Index>(nrm.size()));
    for (std::size_t k = 0; k < nrm.size(); ++k) n.col(static_cast<Eigen::Index>(k)) = nrm[k];
    spec.normals = n;
  }
  spec.validate();
  return spec;
}

PointLoss design_region_loss(const Eigen::VectorXd& field, double level) {
  PointLoss out;
  const auto n = field.size();
  out.upstream = Eigen::VectorXd::Zero(n);
  if (n == 0) return out;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double excess = std::max(0.0, field(k) - level);
    out.value += excess * excess;
    out.upstream(k) = 2.0 * excess / static_cast<double>(n);
  }
  out.value /= static_cast<double>(n);
  return out;
}

PointLoss interface_loss(const Eigen::VectorXd& field, double level) {
  PointLoss out;
  const auto n = field.size();
  out.upstream = Eigen::VectorXd::Zero(n);
  if (n == 0) return out;
  const Eigen::ArrayXd dev = field.array() - level;
  out.value = dev.square().mean();
  out.upstream = (2.0 / static_cast<double>(n)) * dev.matrix();
  return out;
}

PointLoss design_region_loss(const WireNet& net, const Eigen::Vector2d& z, const Eigen::Matrix2Xd& points,
                             double level) {
  return design_region_loss(net.forward(points, z), level);
}

PointLoss interface_loss(const WireNet& net, const Eigen::Vector2d& z, const InterfaceSpec& interface, double level) {
  return interface_loss(net.forward(interface.points, z), level);
}

NormalLoss normal_loss(const Eigen::Matrix2Xd& field_grad, const Eigen::Matrix2Xd& normals) {
  if (field_grad.cols() != normals.cols()) throw std::invalid_argument("normal_loss: size mismatch");
  NormalLoss out;
  const auto n = field_grad.cols();
  out.upstream = Eigen::Matrix2Xd::Zero(2, n);
  if (n == 0) return out;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Vector2d g = field_grad.col(k);
    const double norm = g.norm();
    if (norm < 1e-12) {
      ++out.skipped;
      continue;
    }
    const Eigen::Vector2d unit = g / norm;
    const Eigen::Vector2d diff = unit - normals.col(k);
    out.value += diff.squaredNorm();
    // d|u - n|^2 / dg = 2 (I - u u^T) (u - n) / |g|
    out.upstream.col(k) = 2.0 * (diff - unit * unit.dot(diff)) / norm;
  }
  out.value /= static_cast<double>(n);
  out.upstream /= static_cast<double>(n);
  out.skipped_fraction = static_cast<double>(out.skipped) / static_cast<double>(n);
  return out;
}

NormalLoss normal_loss(const WireNet& net, const Eigen::Vector2d& z, const InterfaceSpec& interface) {
  if (!interface.normals) throw std::invalid_argument("normal_loss: interface has no prescribed normals");
  return normal_loss(net.spatial_gradient(interface.points, z).grad, *interface.normals);
}

}  // namespace tom

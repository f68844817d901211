#include "tom/wire_net.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tom {

namespace {

using Eigen::ArrayXXd;
using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

double sigmoid(double y) {
  return y >= 0.0 ? 1.0 / (1.0 + std::exp(-y)) : std::exp(y) / (1.0 + std::exp(y));
}

void check_batch(const Eigen::Matrix2Xd& points, const Eigen::Matrix2Xd& mods) {
  if (points.cols() != mods.cols()) {
    throw std::invalid_argument("WireNet: point and modulation batch sizes differ");
  }
  if (!points.allFinite() || !mods.allFinite()) throw std::invalid_argument("WireNet: non-finite input");
}

Eigen::Matrix2Xd broadcast(const Eigen::Vector2d& z, Index n) { return z.replicate(1, n); }

}  // namespace

WireNet::WireNet(std::vector<int> widths, double omega0, double s0)
    : widths_(std::move(widths)), omega0_(omega0), s0_(s0) {
  if (widths_.empty()) throw std::invalid_argument("WireNet: need at least one hidden layer");
  if (!std::isfinite(omega0_) || !std::isfinite(s0_)) throw std::invalid_argument("WireNet: non-finite frequency");
  Index offset = 0;
  Index fan_in = kInputDim;
  for (int w : widths_) {
    if (w < 1) throw std::invalid_argument("WireNet: layer widths must be positive");
    LayerView l{.fan_in = fan_in, .width = w, .w_cos = 0, .b_cos = 0, .w_gauss = 0, .b_gauss = 0};
    l.w_cos = offset;
    offset += w * fan_in;
    l.b_cos = offset;
    offset += w;
    l.w_gauss = offset;
    offset += w * fan_in;
    l.b_gauss = offset;
    offset += w;
    layers_.push_back(l);
    fan_in = w;
  }
  head_w_ = offset;
  offset += fan_in;
  head_b_ = offset;
  offset += 1;
  theta_ = VectorXd::Zero(offset);
}

WireNet WireNet::initialized(std::vector<int> widths, double omega0, double s0, Rng& rng, std::uint64_t seed) {
  WireNet net(std::move(widths), omega0, s0);
  net.seed_ = seed;
  const auto fill = [&](Index offset, Index count, double bound) {
    for (Index k = 0; k < count; ++k) net.theta_(offset + k) = bound * (2.0 * uniform01(rng) - 1.0);
  };
  for (std::size_t li = 0; li < net.layers_.size(); ++li) {
    const LayerView& l = net.layers_[li];
    const double bound = li == 0 ? 1.0 / kInputDim : std::sqrt(6.0 / static_cast<double>(l.fan_in)) / omega0;
    fill(l.w_cos, l.width * l.fan_in, bound);
    fill(l.b_cos, l.width, bound);
    fill(l.w_gauss, l.width * l.fan_in, bound);
    fill(l.b_gauss, l.width, bound);
  }
  const auto last = static_cast<double>(net.widths_.back());
  fill(net.head_w_, net.widths_.back(), std::sqrt(6.0 / last) / omega0);
  return net;
}

Eigen::Map<const MatrixXd> WireNet::mat(Index offset, Index rows, Index cols) const {
  return {theta_.data() + offset, rows, cols};
}

Eigen::Map<const VectorXd> WireNet::vec(Index offset, Index size) const { return {theta_.data() + offset, size}; }

MatrixXd WireNet::stack_inputs(const Eigen::Matrix2Xd& points, const Eigen::Matrix2Xd& mods) const {
  check_batch(points, mods);
  MatrixXd v(kInputDim, points.cols());
  v.topRows<2>() = points;
  v.bottomRows<2>() = mods;
  return v;
}

VectorXd WireNet::forward(const Eigen::Matrix2Xd& points, const Eigen::Matrix2Xd& mods) const {
  MatrixXd v = stack_inputs(points, mods);
  for (const LayerView& l : layers_) {
    const MatrixXd p = (mat(l.w_cos, l.width, l.fan_in) * v).colwise() + vec(l.b_cos, l.width);
    const MatrixXd q = (mat(l.w_gauss, l.width, l.fan_in) * v).colwise() + vec(l.b_gauss, l.width);
    v = ((omega0_ * p.array()).cos() * (-(s0_ * q.array()).square()).exp()).matrix();
  }
  const VectorXd y = (vec(head_w_, widths_.back()).transpose() * v).transpose().array() + theta_(head_b_);
  return y.unaryExpr(&sigmoid);
}

VectorXd WireNet::forward(const Eigen::Matrix2Xd& points, const Eigen::Vector2d& z) const {
  return forward(points, broadcast(z, points.cols()));
}

VectorXd WireNet::forward(const Eigen::Matrix2Xd& points, const Eigen::Matrix2Xd& mods, GradTape& tape) const {
  tape = GradTape{};
  tape.net = this;
  tape.batch = points.cols();
  MatrixXd v = stack_inputs(points, mods);
  for (const LayerView& l : layers_) {
    MatrixXd p = (mat(l.w_cos, l.width, l.fan_in) * v).colwise() + vec(l.b_cos, l.width);
    MatrixXd q = (mat(l.w_gauss, l.width, l.fan_in) * v).colwise() + vec(l.b_gauss, l.width);
    MatrixXd a = (omega0_ * p.array()).cos().matrix();
    MatrixXd g = (-(s0_ * q.array()).square()).exp().matrix();
    tape.inputs.push_back(std::move(v));
    v = a.cwiseProduct(g);
    tape.pre_cos.push_back(std::move(p));
    tape.pre_gauss.push_back(std::move(q));
    tape.act_cos.push_back(std::move(a));
    tape.act_gauss.push_back(std::move(g));
  }
  const VectorXd y = (vec(head_w_, widths_.back()).transpose() * v).transpose().array() + theta_(head_b_);
  tape.last = std::move(v);
  tape.output = y.unaryExpr(&sigmoid);
  return tape.output;
}

void WireNet::backward_params(const GradTape& tape, const VectorXd& upstream, VectorXd& grad) const {
  if (tape.net != this || tape.inputs.size() != layers_.size()) {
    throw std::invalid_argument("backward_params: tape was recorded by a different network");
  }
  if (upstream.size() != tape.batch) throw std::invalid_argument("backward_params: upstream size does not match tape");
  if (grad.size() != theta_.size()) throw std::invalid_argument("backward_params: gradient buffer size mismatch");

  const VectorXd dy = upstream.cwiseProduct(tape.output.cwiseProduct((1.0 - tape.output.array()).matrix()));
  grad.segment(head_w_, widths_.back()) += tape.last * dy;
  grad(head_b_) += dy.sum();
  MatrixXd dv = vec(head_w_, widths_.back()) * dy.transpose();

  for (std::size_t k = layers_.size(); k-- > 0;) {
    const LayerView& l = layers_[k];
    const ArrayXXd p = tape.pre_cos[k].array();
    const ArrayXXd q = tape.pre_gauss[k].array();
    const MatrixXd dp = (dv.array() * tape.act_gauss[k].array() * (-omega0_) * (omega0_ * p).sin()).matrix();
    const MatrixXd dq =
        (dv.array() * tape.act_cos[k].array() * (-2.0 * s0_ * s0_) * q * tape.act_gauss[k].array()).matrix();
    const MatrixXd& in = tape.inputs[k];
    Eigen::Map<MatrixXd>(grad.data() + l.w_cos, l.width, l.fan_in) += dp * in.transpose();
    grad.segment(l.b_cos, l.width) += dp.rowwise().sum();
    Eigen::Map<MatrixXd>(grad.data() + l.w_gauss, l.width, l.fan_in) += dq * in.transpose();
    grad.segment(l.b_gauss, l.width) += dq.rowwise().sum();
    if (k > 0) {
      dv = mat(l.w_cos, l.width, l.fan_in).transpose() * dp + mat(l.w_gauss, l.width, l.fan_in).transpose() * dq;
    }
  }
}

FieldGradient WireNet::spatial_gradient(const Eigen::Matrix2Xd& points, const Eigen::Matrix2Xd& mods) const {
  MatrixXd v = stack_inputs(points, mods);
  const Index n = points.cols();
  std::array<MatrixXd, 2> dv;
  for (int d = 0; d < 2; ++d) {
    dv[d] = MatrixXd::Zero(kInputDim, n);
    dv[d].row(d).setOnes();
  }
  for (const LayerView& l : layers_) {
    const auto w1 = mat(l.w_cos, l.width, l.fan_in);
    const auto w2 = mat(l.w_gauss, l.width, l.fan_in);
    const ArrayXXd p = ((w1 * v).colwise() + vec(l.b_cos, l.width)).array();
    const ArrayXXd q = ((w2 * v).colwise() + vec(l.b_gauss, l.width)).array();
    const ArrayXXd a = (omega0_ * p).cos();
    const ArrayXXd da_dp = -omega0_ * (omega0_ * p).sin();
    const ArrayXXd g = (-(s0_ * q).square()).exp();
    const ArrayXXd dg_dq = -2.0 * s0_ * s0_ * q * g;
    for (int d = 0; d < 2; ++d) {
      const ArrayXXd pd = (w1 * dv[d]).array();
      const ArrayXXd qd = (w2 * dv[d]).array();
      dv[d] = (da_dp * pd * g + a * dg_dq * qd).matrix();
    }
    v = (a * g).matrix();
  }
  const auto head = vec(head_w_, widths_.back());
  const VectorXd y = (head.transpose() * v).transpose().array() + theta_(head_b_);
  FieldGradient out;
  out.value = y.unaryExpr(&sigmoid);
  const VectorXd slope = out.value.cwiseProduct((1.0 - out.value.array()).matrix());
  out.grad.resize(2, n);
  for (int d = 0; d < 2; ++d) {
    out.grad.row(d) = ((head.transpose() * dv[d]).transpose().cwiseProduct(slope)).transpose();
  }
  return out;
}

FieldGradient WireNet::spatial_gradient(const Eigen::Matrix2Xd& points, const Eigen::Vector2d& z) const {
  return spatial_gradient(points, broadcast(z, points.cols()));
}

Eigen::Vector2d WireNet::spatial_gradient(const Eigen::Vector2d& x, const Eigen::Vector2d& z) const {
  return spatial_gradient(Eigen::Matrix2Xd(x), Eigen::Matrix2Xd(z)).grad.col(0);
}

void WireNet::backward_spatial(const Eigen::Matrix2Xd& points, const Eigen::Matrix2Xd& mods,
                               const VectorXd& value_upstream, const Eigen::Matrix2Xd& grad_upstream,
                               VectorXd& grad) const {
  const Index n = points.cols();
  if (value_upstream.size() != n || grad_upstream.cols() != n) {
    throw std::invalid_argument("backward_spatial: upstream size mismatch");
  }
  if (grad.size() != theta_.size()) throw std::invalid_argument("backward_spatial: gradient buffer size mismatch");

  struct Record {
    MatrixXd in;
    std::array<MatrixXd, 2> din;
    ArrayXXd p, q, a, g;
    std::array<ArrayXXd, 2> pd, qd, ad, gd;
  };
  std::vector<Record> rec(layers_.size());

  MatrixXd v = stack_inputs(points, mods);
  std::array<MatrixXd, 2> dv;
  for (int d = 0; d < 2; ++d) {
    dv[d] = MatrixXd::Zero(kInputDim, n);
    dv[d].row(d).setOnes();
  }
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const LayerView& l = layers_[k];
    const auto w1 = mat(l.w_cos, l.width, l.fan_in);
    const auto w2 = mat(l.w_gauss, l.width, l.fan_in);
    Record& r = rec[k];
    r.in = v;
    r.din = dv;
    r.p = ((w1 * v).colwise() + vec(l.b_cos, l.width)).array();
    r.q = ((w2 * v).colwise() + vec(l.b_gauss, l.width)).array();
    r.a = (omega0_ * r.p).cos();
    r.g = (-(s0_ * r.q).square()).exp();
    for (int d = 0; d < 2; ++d) {
      r.pd[d] = (w1 * dv[d]).array();
      r.qd[d] = (w2 * dv[d]).array();
      r.ad[d] = -omega0_ * (omega0_ * r.p).sin() * r.pd[d];
      r.gd[d] = -2.0 * s0_ * s0_ * r.q * r.g * r.qd[d];
      dv[d] = (r.ad[d] * r.g + r.a * r.gd[d]).matrix();
    }
    v = (r.a * r.g).matrix();
  }
  const auto head = vec(head_w_, widths_.back());
  const VectorXd y = (head.transpose() * v).transpose().array() + theta_(head_b_);
  const VectorXd sig = y.unaryExpr(&sigmoid);
  const ArrayXXd s1 = (sig.array() * (1.0 - sig.array())).transpose();
  const ArrayXXd s2 = s1 * (1.0 - 2.0 * sig.array().transpose());

  std::array<Eigen::RowVectorXd, 2> ydot;
  for (int d = 0; d < 2; ++d) ydot[d] = head.transpose() * dv[d];

  // Adjoints of the head output y and of its tangents.
  Eigen::RowVectorXd y_bar = (value_upstream.transpose().array() * s1).matrix();
  std::array<Eigen::RowVectorXd, 2> ydot_bar;
  for (int d = 0; d < 2; ++d) {
    y_bar.array() += grad_upstream.row(d).array() * ydot[d].array() * s2;
    ydot_bar[d] = (grad_upstream.row(d).array() * s1).matrix();
  }
  grad.segment(head_w_, widths_.back()) += v * y_bar.transpose();
  for (int d = 0; d < 2; ++d) grad.segment(head_w_, widths_.back()) += dv[d] * ydot_bar[d].transpose();
  grad(head_b_) += y_bar.sum();

  MatrixXd v_bar = head * y_bar;
  std::array<MatrixXd, 2> dv_bar{head * ydot_bar[0], head * ydot_bar[1]};

  const double w2c = omega0_ * omega0_;
  const double s2c = 2.0 * s0_ * s0_;
  for (std::size_t k = layers_.size(); k-- > 0;) {
    const LayerView& l = layers_[k];
    const Record& r = rec[k];
    const ArrayXXd sin_p = (omega0_ * r.p).sin();
    const ArrayXXd cos_p = r.a;
    ArrayXXd a_bar = v_bar.array() * r.g;
    ArrayXXd g_bar = v_bar.array() * r.a;
    for (int d = 0; d < 2; ++d) {
      a_bar += dv_bar[d].array() * r.gd[d];
      g_bar += dv_bar[d].array() * r.ad[d];
    }
    ArrayXXd p_bar = a_bar * (-omega0_ * sin_p);
    ArrayXXd q_bar = g_bar * (-s2c * r.q * r.g);
    std::array<ArrayXXd, 2> pd_bar;
    std::array<ArrayXXd, 2> qd_bar;
    for (int d = 0; d < 2; ++d) {
      const ArrayXXd ad_bar = dv_bar[d].array() * r.g;
      const ArrayXXd gd_bar = dv_bar[d].array() * r.a;
      p_bar += ad_bar * (-w2c * cos_p * r.pd[d]);
      pd_bar[d] = ad_bar * (-omega0_ * sin_p);
      q_bar += gd_bar * (-s2c * r.qd[d] * r.g * (1.0 - s2c * r.q.square()));
      qd_bar[d] = gd_bar * (-s2c * r.q * r.g);
    }
    Eigen::Map<MatrixXd> gw1(grad.data() + l.w_cos, l.width, l.fan_in);
    Eigen::Map<MatrixXd> gw2(grad.data() + l.w_gauss, l.width, l.fan_in);
    gw1 += p_bar.matrix() * r.in.transpose();
    gw2 += q_bar.matrix() * r.in.transpose();
    for (int d = 0; d < 2; ++d) {
      gw1 += pd_bar[d].matrix() * r.din[d].transpose();
      gw2 += qd_bar[d].matrix() * r.din[d].transpose();
    }
    grad.segment(l.b_cos, l.width) += p_bar.matrix().rowwise().sum();
    grad.segment(l.b_gauss, l.width) += q_bar.matrix().rowwise().sum();
    if (k > 0) {
      const auto w1 = mat(l.w_cos, l.width, l.fan_in);
      const auto w2 = mat(l.w_gauss, l.width, l.fan_in);
      v_bar = w1.transpose() * p_bar.matrix() + w2.transpose() * q_bar.matrix();
      for (int d = 0; d < 2; ++d) {
        dv_bar[d] = w1.transpose() * pd_bar[d].matrix() + w2.transpose() * qd_bar[d].matrix();
      }
    }
  }
}

void write_checkpoint(const std::filesystem::path& path, const WireNet& net) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "tom-wire-net 1\nwidths";
  for (int w : net.widths()) out << ' ' << w;
  out << std::setprecision(17);
  out << "\nomega0 " << net.omega0() << "\ns0 " << net.s0() << "\nseed " << net.seed() << "\nparams "
      << net.parameter_count() << '\n';
  for (Eigen::Index k = 0; k < net.parameter_count(); ++k) out << net.theta()(k) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

WireNet read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
  const auto fail = [&](const std::string& what) {
    return std::runtime_error("malformed checkpoint " + path.string() + ": " + what);
  };
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "tom-wire-net" || version != 1) throw fail("bad header");
  std::string key;
  std::string line;
  if (!(in >> key) || key != "widths") throw fail("expected widths");
  std::getline(in, line);
  std::vector<int> widths;
  {
    std::istringstream ws(line);
    for (int w; ws >> w;) widths.push_back(w);
  }
  double omega0 = 0.0;
  double s0 = 0.0;
  std::uint64_t seed = 0;
  Eigen::Index count = 0;
  if (!(in >> key >> omega0) || key != "omega0") throw fail("expected omega0");
  if (!(in >> key >> s0) || key != "s0") throw fail("expected s0");
  if (!(in >> key >> seed) || key != "seed") throw fail("expected seed");
  if (!(in >> key >> count) || key != "params") throw fail("expected params");
  WireNet net(widths, omega0, s0);
  if (count != net.parameter_count()) throw fail("parameter count does not match widths");
  for (Eigen::Index k = 0; k < count; ++k) {
    if (!(in >> net.theta()(k))) throw fail("truncated parameters");
  }
  net.set_seed(seed);
  return net;
}

}  // namespace tom

#include "uavnet/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace uavnet {

void MlpGradients::set_zero() {
  for (auto& w : weight) w.setZero();
  for (auto& b : bias) b.setZero();
}

double MlpGradients::squared_norm() const {
  double s = 0.0;
  for (const auto& w : weight) s += w.squaredNorm();
  for (const auto& b : bias) s += b.squaredNorm();
  return s;
}

Mlp::Mlp(std::vector<int> widths) : widths_(std::move(widths)) {
  if (widths_.size() < 2) throw std::invalid_argument("Mlp: need at least input and output widths");
  for (int w : widths_)
    if (w < 1) throw std::invalid_argument("Mlp: layer widths must be >= 1");
  for (std::size_t i = 0; i + 1 < widths_.size(); ++i) {
    layers_.push_back({Eigen::MatrixXd::Zero(widths_[i + 1], widths_[i]),
                       Eigen::VectorXd::Zero(widths_[i + 1])});
  }
}

Mlp Mlp::he_init(std::vector<int> widths, Rng& rng) {
  Mlp net(std::move(widths));
  for (auto& layer : net.layers_) {
    std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / static_cast<double>(layer.weight.cols())));
    for (Eigen::Index c = 0; c < layer.weight.cols(); ++c)
      for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) layer.weight(r, c) = dist(rng);
  }
  return net;
}

void Mlp::check_input(Eigen::Index rows) const {
  if (layers_.empty()) throw std::logic_error("Mlp: empty network");
  if (rows != widths_.front())
    throw std::invalid_argument("Mlp: input width " + std::to_string(rows) + " != " +
                                std::to_string(widths_.front()));
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x) const {
  check_input(x.size());
  Eigen::VectorXd a = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Eigen::VectorXd z = layers_[i].weight * a + layers_[i].bias;
    a = (i + 1 < layers_.size()) ? Eigen::VectorXd(z.cwiseMax(0.0)) : z;
  }
  return a;
}

Eigen::MatrixXd Mlp::forward_batch(const Eigen::MatrixXd& x) const {
  check_input(x.rows());
  Eigen::MatrixXd a = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Eigen::MatrixXd z = layers_[i].weight * a;
    z.colwise() += layers_[i].bias;
    a = (i + 1 < layers_.size()) ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z;
  }
  return a;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x, Tape& tape) const {
  check_input(x.rows());
  tape.inputs.resize(layers_.size());
  tape.pre.resize(layers_.size());
  Eigen::MatrixXd a = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    tape.inputs[i] = a;
    Eigen::MatrixXd z = layers_[i].weight * a;
    z.colwise() += layers_[i].bias;
    tape.pre[i] = z;
    a = (i + 1 < layers_.size()) ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z;
  }
  return a;
}

MlpGradients Mlp::backward(const Tape& tape, const Eigen::MatrixXd& upstream,
                           Eigen::MatrixXd* input_grad) const {
  if (tape.inputs.size() != layers_.size())
    throw std::logic_error("Mlp::backward: tape does not match network");
  if (upstream.rows() != widths_.back() || upstream.cols() != tape.inputs.front().cols())
    throw std::invalid_argument("Mlp::backward: upstream gradient has wrong shape");

  MlpGradients grads;
  grads.weight.resize(layers_.size());
  grads.bias.resize(layers_.size());
  Eigen::MatrixXd delta = upstream;
  for (std::size_t k = layers_.size(); k-- > 0;) {
    if (k + 1 < layers_.size()) {
      delta = delta.array() * (tape.pre[k].array() > 0.0).cast<double>();
    }
    grads.weight[k].noalias() = delta * tape.inputs[k].transpose();
    grads.bias[k] = delta.rowwise().sum();
    if (k > 0 || input_grad != nullptr) {
      Eigen::MatrixXd next = layers_[k].weight.transpose() * delta;
      delta = std::move(next);
    }
  }
  if (input_grad != nullptr) *input_grad = delta;
  return grads;
}

MlpGradients Mlp::zero_gradients() const {
  MlpGradients g;
  for (const auto& layer : layers_) {
    g.weight.push_back(Eigen::MatrixXd::Zero(layer.weight.rows(), layer.weight.cols()));
    g.bias.push_back(Eigen::VectorXd::Zero(layer.bias.size()));
  }
  return g;
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers_)
    n += static_cast<std::size_t>(layer.weight.size() + layer.bias.size());
  return n;
}

double& Mlp::parameter(std::size_t index) {
  for (auto& layer : layers_) {
    const auto nw = static_cast<std::size_t>(layer.weight.size());
    if (index < nw) return layer.weight.data()[index];
    index -= nw;
    const auto nb = static_cast<std::size_t>(layer.bias.size());
    if (index < nb) return layer.bias.data()[index];
    index -= nb;
  }
  throw std::out_of_range("Mlp::parameter: index out of range");
}

double Mlp::parameter(std::size_t index) const { return const_cast<Mlp*>(this)->parameter(index); }

void Mlp::soft_update(const Mlp& source, double tau) {
  if (source.widths_ != widths_) throw std::invalid_argument("Mlp::soft_update: shape mismatch");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    layers_[i].weight = tau * source.layers_[i].weight + (1.0 - tau) * layers_[i].weight;
    layers_[i].bias = tau * source.layers_[i].bias + (1.0 - tau) * layers_[i].bias;
  }
}

bool operator==(const Mlp& a, const Mlp& b) {
  if (a.widths_ != b.widths_) return false;
  for (std::size_t i = 0; i < a.layers_.size(); ++i) {
    if (a.layers_[i].weight != b.layers_[i].weight) return false;
    if (a.layers_[i].bias != b.layers_[i].bias) return false;
  }
  return true;
}

namespace {

double flat_gradient(const MlpGradients& g, std::size_t index) {
  for (std::size_t k = 0; k < g.weight.size(); ++k) {
    const auto nw = static_cast<std::size_t>(g.weight[k].size());
    if (index < nw) return g.weight[k].data()[index];
    index -= nw;
    const auto nb = static_cast<std::size_t>(g.bias[k].size());
    if (index < nb) return g.bias[k].data()[index];
    index -= nb;
  }
  throw std::out_of_range("flat_gradient");
}

}  // namespace

GradCheckReport grad_check(Mlp net, const OutputLoss& loss, const Eigen::VectorXd& x, double h,
                           double floor) {
  Mlp::Tape tape;
  const Eigen::VectorXd out = net.forward(Eigen::MatrixXd(x), tape);
  Eigen::VectorXd dout(out.size());
  loss(out, dout);
  const MlpGradients grads = net.backward(tape, Eigen::MatrixXd(dout));

  const auto eval = [&](const Mlp& n) {
    Eigen::VectorXd scratch(n.output_size());
    return loss(n.forward(x), scratch);
  };

  GradCheckReport report;
  for (std::size_t i = 0; i < net.parameter_count(); ++i) {
    double& p = net.parameter(i);
    const double saved = p;
    p = saved + h;
    const double up = eval(net);
    p = saved - h;
    const double down = eval(net);
    p = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double analytic = flat_gradient(grads, i);
    const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
    const double rel = std::abs(analytic - numeric) / denom;
    if (rel > report.max_relative_error || i == 0) {
      report.max_relative_error = rel;
      report.worst_parameter = i;
      report.analytic = analytic;
      report.numeric = numeric;
    }
  }
  return report;
}

double huber(double residual, double delta) {
  const double a = std::abs(residual);
  return a <= delta ? 0.5 * residual * residual : delta * (a - 0.5 * delta);
}

double huber_grad(double residual, double delta) {
  return std::clamp(residual, -delta, delta);
}

}  // namespace uavnet

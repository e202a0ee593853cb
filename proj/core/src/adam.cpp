#include "uavnet/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace uavnet {

Adam::Adam(const Mlp& net, AdamConfig config)
    : config_(config), m_(net.zero_gradients()), v_(net.zero_gradients()) {}

void Adam::step(Mlp& net, const MlpGradients& grads) {
  if (grads.weight.size() != m_.weight.size())
    throw std::invalid_argument("Adam::step: gradient shape does not match optimizer state");
  ++t_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  const double lr = config_.learning_rate;
  const double eps = config_.epsilon;

  auto update = [&](auto& param, const auto& g, auto& m, auto& v) {
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
    param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
  };
  auto& layers = net.layers();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    update(layers[i].weight, grads.weight[i], m_.weight[i], v_.weight[i]);
    update(layers[i].bias, grads.bias[i], m_.bias[i], v_.bias[i]);
  }
}

}  // namespace uavnet

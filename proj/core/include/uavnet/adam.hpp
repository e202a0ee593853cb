#pragma once

#include "uavnet/mlp.hpp"

namespace uavnet {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Bias-corrected Adam bound to one network's shape.
class Adam {
 public:
  Adam() = default;
  Adam(const Mlp& net, AdamConfig config);

  /// Descends along `grads` (pass the gradient of the loss to minimize).
  void step(Mlp& net, const MlpGradients& grads);

  long steps() const { return t_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  MlpGradients m_;
  MlpGradients v_;
  long t_ = 0;
};

}  // namespace uavnet

#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <functional>
#include <vector>

#include "uavnet/rng.hpp"

namespace uavnet {

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out
};

/// Parameter-shaped container used for gradients and optimizer moments.
struct MlpGradients {
  std::vector<Eigen::MatrixXd> weight;
  std::vector<Eigen::VectorXd> bias;

  void set_zero();
  double squared_norm() const;
};

/// Fully connected network: rectifier on hidden layers, identity on the output.
/// Batched calls take one sample per column.
class Mlp {
 public:
  /// Activations kept by a forward pass for the matching backward pass.
  struct Tape {
    std::vector<Eigen::MatrixXd> inputs;  // input of each layer
    std::vector<Eigen::MatrixXd> pre;     // pre-activation of each layer
  };

  Mlp() = default;
  /// Zero-initialized network with the given layer widths (input, hidden..., output).
  explicit Mlp(std::vector<int> widths);
  /// He-style init: weights N(0, 2/fan_in), zero biases.
  static Mlp he_init(std::vector<int> widths, Rng& rng);

  const std::vector<int>& widths() const { return widths_; }
  int input_size() const { return widths_.front(); }
  int output_size() const { return widths_.back(); }
  std::size_t num_layers() const { return layers_.size(); }
  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Tape& tape) const;

  /// Reverse pass for a scalar loss whose gradient w.r.t. the outputs is
  /// `upstream` (out x batch). Gradients are summed over the batch. When
  /// `input_grad` is non-null it receives dLoss/dInput (in x batch).
  MlpGradients backward(const Tape& tape, const Eigen::MatrixXd& upstream,
                        Eigen::MatrixXd* input_grad = nullptr) const;

  MlpGradients zero_gradients() const;

  std::size_t parameter_count() const;
  /// Flat view over all parameters: layer by layer, weight (column-major) then bias.
  double& parameter(std::size_t index);
  double parameter(std::size_t index) const;

  /// Polyak averaging: this <- tau * source + (1 - tau) * this.
  void soft_update(const Mlp& source, double tau);

  friend bool operator==(const Mlp& a, const Mlp& b);

 private:
  void check_input(Eigen::Index rows) const;

  std::vector<int> widths_;
  std::vector<DenseLayer> layers_;
};

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::size_t worst_parameter = 0;  // flat index, see Mlp::parameter
  double analytic = 0.0;
  double numeric = 0.0;
};

/// Scalar loss of the network output and its gradient with respect to that output.
using OutputLoss = std::function<double(const Eigen::VectorXd& output, Eigen::VectorXd& grad)>;

/// Compares backward() against central differences with step h for every parameter.
/// Relative error is |a - n| / max(|a|, |n|, floor).
GradCheckReport grad_check(Mlp net, const OutputLoss& loss, const Eigen::VectorXd& x,
                           double h = 1e-5, double floor = 1e-3);

/// Huber loss on a residual and its derivative.
double huber(double residual, double delta);
double huber_grad(double residual, double delta);

}  // namespace uavnet

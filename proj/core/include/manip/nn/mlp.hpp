#pragma once

#include <random>
#include <vector>

#include <Eigen/Core>

namespace manip::nn {

using Rng = std::mt19937_64;

enum class Activation { kIdentity = 0, kTanh = 1 };

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  void set_zero();
  Gradients& operator+=(const Gradients& other);
  bool all_finite() const;
};

// Fully connected network with ReLU hidden layers. Batches are stored one
// sample per column.
class Mlp {
 public:
  struct Cache {
    std::vector<Eigen::MatrixXd> activations;  // input, then each layer output
  };

  Mlp() = default;
  // Uniform fan-in initialization; the last layer is additionally scaled by
  // final_scale.
  Mlp(std::vector<int> layer_sizes, Activation output, Rng& rng, double final_scale = 1.0);

  const std::vector<int>& layer_sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  int num_layers() const { return static_cast<int>(weights_.size()); }
  Activation output_activation() const { return output_; }

  std::vector<Eigen::MatrixXd>& weights() { return weights_; }
  std::vector<Eigen::VectorXd>& biases() { return biases_; }
  const std::vector<Eigen::MatrixXd>& weights() const { return weights_; }
  const std::vector<Eigen::VectorXd>& biases() const { return biases_; }

  Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Cache& cache) const;
  Eigen::VectorXd forward_one(const Eigen::VectorXd& x) const;

  // Gradients of sum_j upstream(:, j) . y(:, j) with respect to the
  // parameters, and optionally the inputs.
  Gradients backward(const Cache& cache, const Eigen::MatrixXd& upstream, Eigen::MatrixXd* input_grad = nullptr) const;

  Gradients zero_gradients() const;
  long parameter_count() const;
  bool all_finite() const;
  bool same_shape(const Mlp& other) const;

  friend bool operator==(const Mlp& a, const Mlp& b);

 private:
  void check_input(const Eigen::MatrixXd& x) const;

  std::vector<int> sizes_;
  Activation output_ = Activation::kIdentity;
  std::vector<Eigen::MatrixXd> weights_;  // out x in
  std::vector<Eigen::VectorXd> biases_;
};

// target = tau * online + (1 - tau) * target
void polyak_blend(Mlp& target, const Mlp& online, double tau);

// Hidden widths repeated `layers` times between input and output.
std::vector<int> make_layer_sizes(int input, int hidden_width, int hidden_layers, int output);

}  // namespace manip::nn

#include "manip/nn/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace manip::nn {

void Gradients::set_zero() {
  for (auto& w : weights) w.setZero();
  for (auto& b : biases) b.setZero();
}

Gradients& Gradients::operator+=(const Gradients& other) {
  for (std::size_t i = 0; i < weights.size(); ++i) {
    weights[i] += other.weights[i];
    biases[i] += other.biases[i];
  }
  return *this;
}

bool Gradients::all_finite() const {
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!weights[i].allFinite() || !biases[i].allFinite()) return false;
  }
  return true;
}

Mlp::Mlp(std::vector<int> layer_sizes, Activation output, Rng& rng, double final_scale)
    : sizes_(std::move(layer_sizes)), output_(output) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp: need at least input and output sizes");
  for (int s : sizes_) {
    if (s <= 0) throw std::invalid_argument("Mlp: layer sizes must be positive");
  }
  const std::size_t n = sizes_.size() - 1;
  weights_.resize(n);
  biases_.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    weights_[l].resize(out, in);
    biases_[l].resize(out);
    for (Eigen::Index j = 0; j < weights_[l].cols(); ++j) {
      for (Eigen::Index i = 0; i < weights_[l].rows(); ++i) weights_[l](i, j) = dist(rng);
    }
    for (Eigen::Index i = 0; i < biases_[l].size(); ++i) biases_[l][i] = dist(rng);
  }
  weights_.back() *= final_scale;
  biases_.back() *= final_scale;
}

void Mlp::check_input(const Eigen::MatrixXd& x) const {
  if (sizes_.empty()) throw std::logic_error("Mlp: network is empty");
  if (x.rows() != sizes_.front()) {
    throw std::invalid_argument("Mlp: input has " + std::to_string(x.rows()) + " rows, expected " +
                                std::to_string(sizes_.front()));
  }
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x, Cache& cache) const {
  check_input(x);
  const std::size_t n = weights_.size();
  cache.activations.resize(n + 1);
  cache.activations[0] = x;
  for (std::size_t l = 0; l < n; ++l) {
    Eigen::MatrixXd& z = cache.activations[l + 1];
    z.noalias() = weights_[l] * cache.activations[l];
    z.colwise() += biases_[l];
    if (l + 1 < n) {
      z = z.cwiseMax(0.0);
    } else if (output_ == Activation::kTanh) {
      z = z.array().tanh().matrix();
    }
  }
  return cache.activations.back();
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
  Cache cache;
  return forward(x, cache);
}

Eigen::VectorXd Mlp::forward_one(const Eigen::VectorXd& x) const { return forward(Eigen::MatrixXd(x)).col(0); }

Gradients Mlp::backward(const Cache& cache, const Eigen::MatrixXd& upstream, Eigen::MatrixXd* input_grad) const {
  const std::size_t n = weights_.size();
  if (cache.activations.size() != n + 1) throw std::invalid_argument("Mlp::backward: cache does not match network");
  const Eigen::MatrixXd& y = cache.activations.back();
  if (upstream.rows() != y.rows() || upstream.cols() != y.cols()) {
    throw std::invalid_argument("Mlp::backward: upstream gradient shape mismatch");
  }
  Gradients g;
  g.weights.resize(n);
  g.biases.resize(n);
  Eigen::MatrixXd delta = upstream;
  if (output_ == Activation::kTanh) delta.array() *= 1.0 - y.array().square();
  for (std::size_t l = n; l-- > 0;) {
    g.weights[l].noalias() = delta * cache.activations[l].transpose();
    g.biases[l] = delta.rowwise().sum();
    if (l > 0 || input_grad) {
      Eigen::MatrixXd prev = weights_[l].transpose() * delta;
      if (l > 0) {
        prev.array() *= (cache.activations[l].array() > 0.0).cast<double>();
        delta = std::move(prev);
      } else {
        *input_grad = std::move(prev);
      }
    }
  }
  return g;
}

Gradients Mlp::zero_gradients() const {
  Gradients g;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    g.weights.push_back(Eigen::MatrixXd::Zero(weights_[l].rows(), weights_[l].cols()));
    g.biases.push_back(Eigen::VectorXd::Zero(biases_[l].size()));
  }
  return g;
}

long Mlp::parameter_count() const {
  long c = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) c += weights_[l].size() + biases_[l].size();
  return c;
}

bool Mlp::all_finite() const {
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    if (!weights_[l].allFinite() || !biases_[l].allFinite()) return false;
  }
  return true;
}

bool Mlp::same_shape(const Mlp& other) const { return sizes_ == other.sizes_ && output_ == other.output_; }

bool operator==(const Mlp& a, const Mlp& b) {
  if (!a.same_shape(b)) return false;
  for (std::size_t l = 0; l < a.weights_.size(); ++l) {
    if (a.weights_[l] != b.weights_[l] || a.biases_[l] != b.biases_[l]) return false;
  }
  return true;
}

void polyak_blend(Mlp& target, const Mlp& online, double tau) {
  if (!target.same_shape(online)) throw std::invalid_argument("polyak_blend: architecture mismatch");
  for (int l = 0; l < target.num_layers(); ++l) {
    auto& tw = target.weights()[static_cast<std::size_t>(l)];
    auto& tb = target.biases()[static_cast<std::size_t>(l)];
    tw = tau * online.weights()[static_cast<std::size_t>(l)] + (1.0 - tau) * tw;
    tb = tau * online.biases()[static_cast<std::size_t>(l)] + (1.0 - tau) * tb;
  }
}

std::vector<int> make_layer_sizes(int input, int hidden_width, int hidden_layers, int output) {
  std::vector<int> sizes{input};
  for (int i = 0; i < hidden_layers; ++i) sizes.push_back(hidden_width);
  sizes.push_back(output);
  return sizes;
}

}  // namespace manip::nn

#include "manip/nn/adam.hpp"

#include <cmath>
#include <stdexcept>

#include "manip/error.hpp"

namespace manip::nn {

Adam::Adam(const Mlp& net, AdamConfig cfg) : cfg_(cfg), m_(net.zero_gradients()), v_(net.zero_gradients()) {}

void Adam::step(Mlp& net, const Gradients& grads) {
  if (grads.weights.size() != m_.weights.size()) throw std::invalid_argument("Adam: gradient shape mismatch");
  if (!grads.all_finite()) throw NumericalError("Adam: non-finite gradient");
  ++t_;
  const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  const double step = cfg_.lr / c1;
  const double inv_sqrt_c2 = 1.0 / std::sqrt(c2);
  auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
    m = cfg_.beta1 * m + (1.0 - cfg_.beta1) * g;
    v = cfg_.beta2 * v + (1.0 - cfg_.beta2) * g.cwiseProduct(g);
    param.array() -= step * m.array() / (v.array().sqrt() * inv_sqrt_c2 + cfg_.eps);
  };
  for (std::size_t l = 0; l < grads.weights.size(); ++l) {
    update(net.weights()[l], m_.weights[l], v_.weights[l], grads.weights[l]);
    update(net.biases()[l], m_.biases[l], v_.biases[l], grads.biases[l]);
  }
}

}  // namespace manip::nn

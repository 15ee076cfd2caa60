#pragma once

#include "manip/nn/mlp.hpp"

namespace manip::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class Adam {
 public:
  Adam() = default;
  Adam(const Mlp& net, AdamConfig cfg);

  // Throws NumericalError on non-finite gradients; the network is untouched then.
  void step(Mlp& net, const Gradients& grads);

  long steps() const { return t_; }
  const AdamConfig& config() const { return cfg_; }
  const Gradients& first_moment() const { return m_; }
  const Gradients& second_moment() const { return v_; }

 private:
  AdamConfig cfg_;
  Gradients m_;
  Gradients v_;
  long t_ = 0;
};

}  // namespace manip::nn

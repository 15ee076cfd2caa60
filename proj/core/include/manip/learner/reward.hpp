#pragma once

#include <Eigen/Core>

#include "manip/sim/state.hpp"

namespace manip::learner {

// Sparse goal reward: 0 when d(s_t, s_g) / d(s_0, s_g) <= epsilon, else -1,
// with d the Q_d-weighted distance. A start already at the goal counts as
// success.
double sparse_reward(const sim::SystemState& s_t, const sim::SystemState& s_0, const sim::SystemState& s_g,
                     double epsilon, const Eigen::VectorXd& q_d);

// Same test on flat coordinate vectors.
double sparse_reward(const Eigen::VectorXd& s_t, const Eigen::VectorXd& s_0, const Eigen::VectorXd& s_g,
                     double epsilon, const Eigen::VectorXd& q_d);

}  // namespace manip::learner

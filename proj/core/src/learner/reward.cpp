#include "manip/learner/reward.hpp"

#include <stdexcept>

#include "manip/planner/rewards.hpp"

namespace manip::learner {

double sparse_reward(const Eigen::VectorXd& s_t, const Eigen::VectorXd& s_0, const Eigen::VectorXd& s_g,
                     double epsilon, const Eigen::VectorXd& q_d) {
  if (s_t.size() != s_g.size() || s_0.size() != s_g.size() || q_d.size() != s_g.size()) {
    throw std::invalid_argument("sparse_reward: dimension mismatch");
  }
  const double d0 = planner::weighted_norm(s_0 - s_g, q_d);
  if (d0 == 0.0) return 0.0;
  const double d = planner::weighted_norm(s_t - s_g, q_d);
  return d / d0 <= epsilon ? 0.0 : -1.0;
}

double sparse_reward(const sim::SystemState& s_t, const sim::SystemState& s_0, const sim::SystemState& s_g,
                     double epsilon, const Eigen::VectorXd& q_d) {
  return sparse_reward(s_t.flat(), s_0.flat(), s_g.flat(), epsilon, q_d);
}

}  // namespace manip::learner

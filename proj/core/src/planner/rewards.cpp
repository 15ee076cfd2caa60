#include "manip/planner/rewards.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

namespace manip::planner {

double weighted_norm(const Eigen::VectorXd& x, const Eigen::VectorXd& w) {
  return std::sqrt((x.array().square() * w.array()).sum());
}

double distance_reward(const sim::SystemState& s, const sim::SystemState& s_g, const Eigen::VectorXd& q_d) {
  return -weighted_norm(s.flat() - s_g.flat(), q_d);
}

double proximity_reward(const Eigen::VectorXd& d, const Eigen::VectorXd& q_p) { return -weighted_norm(d, q_p); }

double reachability_reward(double m, double q_m, double m_min) {
  return -q_m * std::log(std::max(m, m_min) / m_min);
}

double reachability(const Eigen::MatrixXd& b_o, const Eigen::VectorXd& ds_o, double mu) {
  const Eigen::Index n = ds_o.size();
  Eigen::MatrixXd m = mu * Eigen::MatrixXd::Identity(n, n);
  if (b_o.size() > 0) m.noalias() += b_o * b_o.transpose();
  const Eigen::LLT<Eigen::MatrixXd> llt(m);
  return ds_o.dot(llt.solve(ds_o));
}

Rewards node_rewards(const sim::SystemState& s, const sim::SystemState& s_g, const Eigen::VectorXd& d, double m,
                     const PlannerParams& params) {
  Rewards r;
  r.r_d = distance_reward(s, s_g, params.q_d);
  r.r_p = proximity_reward(d, params.q_p);
  r.r_m = reachability_reward(m, params.q_m, params.m_min);
  r.total = r.r_d + r.r_p + r.r_m;
  return r;
}

}  // namespace manip::planner

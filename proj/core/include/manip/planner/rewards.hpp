#pragma once

#include <Eigen/Core>

#include "manip/planner/params.hpp"
#include "manip/sim/state.hpp"

namespace manip::planner {

struct Rewards {
  double r_d = 0.0;
  double r_p = 0.0;
  double r_m = 0.0;
  double total = 0.0;
};

// sqrt(x^T diag(w) x)
double weighted_norm(const Eigen::VectorXd& x, const Eigen::VectorXd& w);

double distance_reward(const sim::SystemState& s, const sim::SystemState& s_g, const Eigen::VectorXd& q_d);
double proximity_reward(const Eigen::VectorXd& d, const Eigen::VectorXd& q_p);
double reachability_reward(double m, double q_m, double m_min);

// m = ds_o^T (B_o B_o^T + mu I)^-1 ds_o via a Cholesky solve.
double reachability(const Eigen::MatrixXd& b_o, const Eigen::VectorXd& ds_o, double mu);

Rewards node_rewards(const sim::SystemState& s, const sim::SystemState& s_g, const Eigen::VectorXd& d, double m,
                     const PlannerParams& params);

}  // namespace manip::planner

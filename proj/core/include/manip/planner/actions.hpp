#pragma once

#include <random>

#include <Eigen/Core>

#include "manip/planner/tree.hpp"

namespace manip::planner {

using Rng = std::mt19937_64;

ActionType sample_action_type(const PlannerParams& params, Rng& rng);

// Builds an action of the given type at `node_idx`. Falls back to a random
// action for continuation at the root and for a vanishing proximity or
// goal-directed direction; the returned command records the type used.
ActionCommand sample_action(const SearchTree& tree, int node_idx, ActionType type, const sim::EnvModel& env,
                            const PlannerParams& params, Rng& rng);

// Minimizer of 0.5 (f0 + B da - s_g)^T Q (f0 + B da - s_g) + 0.5 (a0 + da)^T R (a0 + da).
Eigen::VectorXd goal_directed_delta(const Eigen::MatrixXd& b, const Eigen::MatrixXd& q, const Eigen::MatrixXd& r,
                                    const Eigen::VectorXd& f0_star, const Eigen::VectorXd& a0_star,
                                    const Eigen::VectorXd& s_g);

// Gradient (dd/da)^T d of 0.5 |d|^2 under a kinematic displacement of the
// commanded joints, by central differences.
Eigen::VectorXd proximity_gradient(const sim::EnvModel& env, const sim::SystemState& s, double h = 1e-6);

Eigen::VectorXd random_unit_vector(int n, Rng& rng);

}  // namespace manip::planner

#pragma once

#include <array>
#include <string>

#include <Eigen/Core>

#include "manip/sim/env.hpp"

namespace manip::planner {

enum class ActionType { kRandom = 0, kContinuation = 1, kProximity = 2, kGoalDirected = 3, kNone = 4 };

inline constexpr int kNumActionTypes = 4;

std::string_view action_type_name(ActionType t);
char action_type_letter(ActionType t);

struct PlannerParams {
  int n_g = 30;       // sub-goals per search
  int n_i = 30;       // node selections per sub-goal
  double b_g = 0.0;   // task-goal bias

  double beta_min = 0.2;
  double beta_max = 1.2;
  double beta_init = 1.2;
  bool adaptive_beta = true;

  double n_e_init = 1.0;
  int n_e_max = 10;
  bool adaptive_horizon = true;

  // Relative weights of random, continuation, proximity, goal-directed.
  std::array<double, kNumActionTypes> p_a{1.0, 1.0, 2.0, 2.0};
  int k_max = 3;

  Eigen::VectorXd q_d;  // diagonal of Q_d, n_s entries
  Eigen::VectorXd q_p;  // diagonal of Q_p, one entry per proximity sensor
  double q_m = 1.0;
  double m_min = 1e-3;
  double mu = 1e-4;
  double r_weight = 1e-3;      // R = r_weight * I for goal-directed actions
  double jacobian_step = 1e-4;

  long max_nodes = 0;  // 0: no node budget besides n_g * n_i iterations

  // Throws ConfigError when the parameters are inconsistent with `env`.
  void validate(const sim::EnvModel& env) const;

  // p_a normalized to sum one.
  std::array<double, kNumActionTypes> action_probabilities() const;
};

PlannerParams default_params(const sim::EnvModel& env);

// Parses an action-mix label such as "rpg" into equal weights over the named
// types (r random, c continuation, p proximity, g goal-directed).
std::array<double, kNumActionTypes> parse_action_mix(std::string_view letters);

}  // namespace manip::planner

#pragma once

#include <string>
#include <string_view>

#include <Eigen/Core>

#include "manip/planner/params.hpp"
#include "manip/sim/env.hpp"

namespace manip::learner {

enum class DemoMode { kFixedRatio, kDecaying, kInitialOnly, kNone };
enum class PretrainMode { kNone, kPolicy, kPolicyValue };

std::string_view demo_mode_name(DemoMode m);
DemoMode parse_demo_mode(std::string_view s);
std::string_view pretrain_mode_name(PretrainMode m);
PretrainMode parse_pretrain_mode(std::string_view s);

struct TrainConfig {
  int n_epochs = 150;
  int n_cycles = 50;
  int n_rollouts = 2;
  int n_steps = 75;
  int n_episode = 40;   // network updates after each rollout
  int n_batch = 256;
  double gamma = 0.98;
  double tau = 0.05;
  double eta = 0.3;     // random action chance
  double sigma = 0.1;   // Gaussian noise, fraction of the action half-range
  double lr_actor = 1e-3;
  double lr_critic = 1e-3;
  double action_l2 = 0.0;
  int hidden_width = 256;
  int hidden_layers = 4;
  long buffer_episodes = 10000;
  int eval_runs = 10;
  bool stop_on_success = true;
  long max_env_steps = 0;  // 0: no cap; checked at epoch boundaries
  double epsilon = 0.2;  // success threshold on the distance ratio

  DemoMode demo_mode = DemoMode::kNone;
  double b_p = 0.25;
  double her_ratio = 0.0;  // 0 disables relabeling

  PretrainMode pretrain = PretrainMode::kNone;
  int pretrain_demos = 200;
  int pretrain_updates = 2000;

  // Demonstration trees.
  int demo_trees = 4;
  long demo_nodes = 3000;

  Eigen::VectorXd q_d;  // distance weights shared with the planner

  void validate(const sim::EnvModel& env) const;
};

// Table values plus the task-specific horizon and distance weights.
TrainConfig default_train_config(const sim::EnvModel& env, const planner::PlannerParams& params);

}  // namespace manip::learner

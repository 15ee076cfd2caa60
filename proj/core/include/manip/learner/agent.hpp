#pragma once

#include <optional>
#include <random>

#include <Eigen/Core>

#include "manip/learner/replay_buffer.hpp"
#include "manip/learner/train_config.hpp"
#include "manip/nn/adam.hpp"
#include "manip/nn/mlp.hpp"
#include "manip/nn/normalizer.hpp"
#include "manip/sim/env.hpp"
#include "manip/sim/state.hpp"

namespace manip::learner {

// Policy and value networks with their targets, optimizers and the shared
// input normalizer over [s, s_g]. Policy outputs live in [-1, 1] and scale
// the per-joint maximum step alpha_max.
struct NetworkBundle {
  nn::Mlp actor;
  nn::Mlp critic;
  nn::Mlp actor_target;
  nn::Mlp critic_target;
  nn::Adam actor_opt;
  nn::Adam critic_opt;
  nn::Normalizer normalizer;
  std::optional<nn::Mlp> il_actor;  // fixed imitation policy for dual selection

  int state_dim = 0;
  int action_dim = 0;
};

NetworkBundle make_networks(const sim::EnvModel& env, const TrainConfig& cfg, Rng& rng);

// Normalized [s; s_g] columns.
Eigen::MatrixXd observation_batch(const NetworkBundle& nets, const Eigen::MatrixXd& s, const Eigen::MatrixXd& g);

// Policy-space action of an absolute command: clip((a - q_r) / alpha_max, -1, 1).
Eigen::VectorXd to_policy_action(const sim::EnvModel& env, const Eigen::VectorXd& s, const Eigen::VectorXd& command);
// Absolute command for a policy-space action, clamped to the joint bounds.
Eigen::VectorXd to_command(const sim::EnvModel& env, const Eigen::VectorXd& s, const Eigen::VectorXd& u);

Eigen::VectorXd deterministic_action(const NetworkBundle& nets, const Eigen::VectorXd& s, const Eigen::VectorXd& g,
                                     bool* chose_il = nullptr);

// With explore set: uniform action with probability eta, otherwise the policy
// output plus N(0, sigma^2), clipped to [-1, 1].
Eigen::VectorXd policy_action(const NetworkBundle& nets, const Eigen::VectorXd& s, const Eigen::VectorXd& g,
                              bool explore, double eta, double sigma, Rng& rng, bool* chose_il = nullptr);

// Picks whichever of pi_RL(s, s_g) and pi_IL(s, s_g) the critic values more
// (ties keep pi_RL). Falls back to pi_RL when no imitation policy exists.
Eigen::VectorXd dual_policy_select(const NetworkBundle& nets, const Eigen::VectorXd& s, const Eigen::VectorXd& g,
                                   bool* chose_il = nullptr);

struct UpdateStats {
  double critic_loss = 0.0;
  double actor_objective = 0.0;  // mean Q of the policy action
  double target_min = 0.0;
  double target_max = 0.0;
};

// One minibatch critic regression step and one actor ascent step.
UpdateStats ddpg_update(const ReplayBuffer& buffer, NetworkBundle& nets, const TrainConfig& cfg,
                        const sim::EnvModel& env, Rng& rng);

// Critic targets r + gamma Q'(s', pi'(s')) clipped to [-1/(1-gamma), 0].
Eigen::RowVectorXd critic_targets(const NetworkBundle& nets, const Eigen::MatrixXd& obs_next,
                                  const Eigen::RowVectorXd& rewards, double gamma);

void update_targets(NetworkBundle& nets, double tau);

// Episode start/goal pair from the task distributions.
std::pair<sim::SystemState, sim::SystemState> sample_start_goal(const sim::EnvModel& env, Rng& rng);

struct RolloutResult {
  Episode episode;
  bool success = false;
  double total_reward = 0.0;
  int il_choices = 0;
  int rl_choices = 0;
};

RolloutResult rollout_policy(const sim::EnvModel& env, const NetworkBundle& nets, const TrainConfig& cfg,
                             const sim::SystemState& s0, const sim::SystemState& goal, bool explore, Rng& rng);

struct EvalResult {
  double success_rate = 0.0;
  double mean_reward = 0.0;  // mean undiscounted episode return
};

// eval_runs deterministic rollouts from sampled start/goal pairs.
EvalResult evaluate(const NetworkBundle& nets, const sim::EnvModel& env, const TrainConfig& cfg, Rng& rng);

}  // namespace manip::learner

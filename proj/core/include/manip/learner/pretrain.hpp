#pragma once

#include <vector>

#include "manip/learner/agent.hpp"
#include "manip/learner/demos.hpp"

namespace manip::learner {

// Discounted Monte-Carlo values of an episode's transitions under its own
// goal, treating the end of the episode as absorbing.
std::vector<double> monte_carlo_values(const Episode& ep, double gamma, double epsilon, const Eigen::VectorXd& q_d);

struct PretrainStats {
  int demos_used = 0;
  int demos_rejected = 0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
};

// Supervised pre-training on goal-reaching demonstrations. Trains an
// imitation policy (stored in nets.il_actor) and, for kPolicyValue, fits the
// critic to the Monte-Carlo values and copies it into the target.
PretrainStats pretrain(const std::vector<Episode>& demos, NetworkBundle& nets, const TrainConfig& cfg,
                       const sim::EnvModel& env, Rng& rng);

// Draws cfg.pretrain_demos goals and keeps the demonstrations that reach them.
std::vector<Episode> collect_pretrain_demos(const DemoSet& demos, const sim::EnvModel& env, const TrainConfig& cfg,
                                            Rng& rng, int* rejected = nullptr);

}  // namespace manip::learner

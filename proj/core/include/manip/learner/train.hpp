#pragma once

#include <vector>

#include "manip/learner/agent.hpp"
#include "manip/learner/demos.hpp"

namespace manip::learner {

struct EpochMetrics {
  int epoch = 0;
  long env_steps = 0;  // transitions stored so far, demos included
  double success_rate = 0.0;
  double mean_episode_reward = 0.0;
  double demo_fraction = 0.0;  // demo episodes among those in the buffer
  double critic_loss = 0.0;
  double actor_objective = 0.0;
  long il_choices = 0;
  long rl_choices = 0;
};

struct CycleStats {
  int demo_episodes = 0;
  int policy_episodes = 0;
  double reward_sum = 0.0;
  long il_choices = 0;
  long rl_choices = 0;
};

// Demo probability for one rollout under the configured mode.
double demo_probability(const TrainConfig& cfg, int epoch, double success_rate);

// One episode appended to the buffer: a demonstration with the mode's demo
// probability, otherwise an exploratory policy rollout. Updates the
// normalizer with the new samples.
CycleStats collect_rollout(const sim::EnvModel& env, NetworkBundle& nets, const DemoSet* demos, const TrainConfig& cfg,
                           int epoch, double success_rate, ReplayBuffer& buffer, Rng& rng);

// n_rollouts calls of collect_rollout without network updates in between.
CycleStats collect_cycle(const sim::EnvModel& env, NetworkBundle& nets, const DemoSet* demos, const TrainConfig& cfg,
                         int epoch, double success_rate, ReplayBuffer& buffer, Rng& rng);

struct TrainResult {
  NetworkBundle nets;
  std::vector<EpochMetrics> metrics;
  bool stopped_early = false;
};

TrainResult train(const sim::EnvModel& env, const DemoSet* demos, const TrainConfig& cfg, unsigned long seed);

}  // namespace manip::learner

#pragma once

#include <random>
#include <vector>

#include "manip/learner/replay_buffer.hpp"
#include "manip/learner/train_config.hpp"
#include "manip/planner/search.hpp"

namespace manip::learner {

// Planner trees grown from the task start state; demonstrations are read off
// the node closest to a requested goal.
struct DemoSet {
  sim::EnvModel env;
  std::vector<planner::SearchTree> trees;
  Eigen::VectorXd q_d;

  bool empty() const { return trees.empty(); }
};

// Plans cfg.demo_trees trees, each towards a goal drawn from the task goal
// distribution, with cfg.demo_nodes nodes apiece.
DemoSet build_demo_set(const sim::EnvModel& env, const planner::PlannerParams& params, const TrainConfig& cfg,
                       Rng& rng);

// Clip or pad a root path to exactly n_steps base steps. Long paths keep the
// last n_steps steps; short paths are front-padded with the start state and
// a hold command equal to the initial joint positions.
// Actions are stored in policy space; the episode start is the path root.
Episode fit_to_horizon(const sim::EnvModel& env, const planner::Trajectory& traj, int n_steps);

// Demonstration towards s_g as a stored episode (is_demo set).
Episode demo_episode(const DemoSet& demos, const sim::SystemState& s_g, int n_steps);

std::vector<Transition> demo_trajectory(const DemoSet& demos, const sim::SystemState& s_g, int n_steps,
                                        double epsilon);

}  // namespace manip::learner

#include "manip/learner/demos.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "manip/learner/agent.hpp"
#include "manip/planner/rewards.hpp"
#include "manip/sim/dynamics.hpp"

namespace manip::learner {

DemoSet build_demo_set(const sim::EnvModel& env, const planner::PlannerParams& params, const TrainConfig& cfg,
                       Rng& rng) {
  DemoSet set;
  set.env = env;
  set.q_d = cfg.q_d;
  planner::PlannerParams p = params;
  p.max_nodes = cfg.demo_nodes;
  // Large enough that the node budget is what stops the search.
  p.n_g = std::max<int>(p.n_g, static_cast<int>(cfg.demo_nodes / std::max(1, p.n_i)) + 1);
  const sim::SystemState start = sim::start_state(env);
  for (int i = 0; i < cfg.demo_trees; ++i) {
    const sim::SystemState goal = sim::sample_goal_state(env, rng);
    set.trees.push_back(planner::plan(env, start, goal, p, rng));
  }
  return set;
}

Episode fit_to_horizon(const sim::EnvModel& env, const planner::Trajectory& traj, int n_steps) {
  if (n_steps <= 0) throw std::invalid_argument("fit_to_horizon: n_steps must be positive");
  if (traj.states.size() != traj.commands.size() + 1) throw std::invalid_argument("fit_to_horizon: malformed path");
  Episode ep;
  ep.start = traj.states.front().flat();
  ep.is_demo = true;
  const int len = traj.steps();
  if (len >= n_steps) {
    const int cut = len - n_steps;
    ep.initial_command = cut == 0 ? traj.initial_command : traj.commands[static_cast<std::size_t>(cut - 1)];
    for (int t = cut; t <= len; ++t) ep.states.push_back(traj.states[static_cast<std::size_t>(t)].flat());
    for (int t = cut; t < len; ++t) ep.commands.push_back(traj.commands[static_cast<std::size_t>(t)]);
  } else {
    const int pad = n_steps - len;
    ep.initial_command = traj.initial_command;
    for (int t = 0; t < pad; ++t) {
      ep.states.push_back(ep.start);
      ep.commands.push_back(traj.initial_command);
    }
    for (const auto& s : traj.states) ep.states.push_back(s.flat());
    for (const auto& c : traj.commands) ep.commands.push_back(c);
  }
  for (int t = 0; t < n_steps; ++t) {
    ep.actions.push_back(
        to_policy_action(env, ep.states[static_cast<std::size_t>(t)], ep.commands[static_cast<std::size_t>(t)]));
  }
  return ep;
}

Episode demo_episode(const DemoSet& demos, const sim::SystemState& s_g, int n_steps) {
  if (demos.empty()) throw std::invalid_argument("demo_episode: empty demo set");
  std::size_t best_tree = 0;
  int best_node = 0;
  double best_r = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < demos.trees.size(); ++k) {
    const int i = planner::closest_node(demos.trees[k], s_g, demos.q_d);
    const double r = planner::distance_reward(demos.trees[k].node(i).state, s_g, demos.q_d);
    if (r > best_r) {
      best_r = r;
      best_tree = k;
      best_node = i;
    }
  }
  Episode ep = fit_to_horizon(demos.env, planner::path_to(demos.trees[best_tree], best_node), n_steps);
  ep.goal = s_g.flat();
  return ep;
}

std::vector<Transition> demo_trajectory(const DemoSet& demos, const sim::SystemState& s_g, int n_steps,
                                        double epsilon) {
  return episode_transitions(demo_episode(demos, s_g, n_steps), epsilon, demos.q_d);
}

}  // namespace manip::learner

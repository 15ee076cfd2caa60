#pragma once

#include <vector>

#include "manip/planner/actions.hpp"
#include "manip/planner/tree.hpp"

namespace manip::planner {

struct SearchParamsState {
  double beta = 1.2;
  double n_e = 1.0;  // stored as a real, rounded at use

  int horizon() const;
};

// One adaptive update. When found_better is set, i_e is the 1-based index of
// the extension that found the new best node.
SearchParamsState update_search_params(const SearchParamsState& cur, bool found_better, int i_e,
                                       const PlannerParams& params);

// Returns the node holding the sampled reward rank (1 = best, ties oldest first).
int select_node(const SearchTree& tree, double beta, Rng& rng);

sim::SystemState sample_goal(const sim::SystemState& task_goal, double b_g, const sim::EnvModel& env, Rng& rng);

SearchTree plan(const sim::EnvModel& env, const sim::SystemState& s_1, const sim::SystemState& task_goal,
                const PlannerParams& params, Rng& rng);

// Root-to-node path, split into base steps. states has one more entry than
// commands; commands[t] is tracked from states[t] starting at the previous
// command (initial_command for t = 0).
struct Trajectory {
  Eigen::VectorXd initial_command;
  std::vector<sim::SystemState> states;
  std::vector<Eigen::VectorXd> commands;
  int node = 0;

  int steps() const { return static_cast<int>(commands.size()); }
};

Trajectory path_to(const SearchTree& tree, int node_idx);

// Path to the node closest to s_g in distance reward (ties oldest first).
Trajectory best_trajectory(const SearchTree& tree, const sim::SystemState& s_g, const PlannerParams& params);

// Index of the node with the largest distance reward under s_g.
int closest_node(const SearchTree& tree, const sim::SystemState& s_g, const Eigen::VectorXd& q_d);

// 1 - r_d(best)/r_d(s_0), best over all nodes; 1 when s_0 is the goal.
double search_progress(const SearchTree& tree, const sim::SystemState& s_0, const sim::SystemState& s_g,
                       const Eigen::VectorXd& q_d);

}  // namespace manip::planner

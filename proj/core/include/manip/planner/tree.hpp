#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "manip/planner/params.hpp"
#include "manip/planner/rewards.hpp"
#include "manip/sim/env.hpp"
#include "manip/sim/state.hpp"

namespace manip::planner {

struct ActionCommand {
  ActionType type = ActionType::kNone;
  Eigen::VectorXd direction;  // unit norm
  Eigen::VectorXd magnitude;  // 0 <= magnitude <= alpha_max
  int k = 1;                  // step-size multiple

  Eigen::VectorXd relative() const { return direction.cwiseProduct(magnitude); }
};

struct TreeNode {
  int parent = -1;
  sim::SystemState state;
  ActionCommand action;
  Eigen::VectorXd command;  // absolute joint command tracked at the end of the incoming action

  // Incoming action split into base steps: k commands and the k - 1 states
  // reached between them. Replaying base step j from waypoint j - 1 (or the
  // parent state) reproduces the next waypoint exactly.
  std::vector<Eigen::VectorXd> base_commands;
  std::vector<sim::SystemState> waypoints;

  Eigen::VectorXd proximity;  // goal independent
  Eigen::MatrixXd b_o;        // object control Jacobian, empty when unused
  Rewards rewards;            // under the tree's current goal
  double task_distance = 0.0; // r_d under the task goal
};

class SearchTree {
 public:
  SearchTree() = default;

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
  int size() const { return static_cast<int>(nodes_.size()); }
  bool empty() const { return nodes_.empty(); }

  int best_index() const { return best_index_; }
  const sim::SystemState& goal() const { return goal_; }
  const sim::SystemState& task_goal() const { return task_goal_; }
  int best_task_index() const { return best_task_index_; }

  // Appends a node whose rewards are already evaluated under goal(). Returns
  // its index and whether it strictly improved the best total reward.
  int append(TreeNode node, bool* improved = nullptr);

  void set_goal(sim::SystemState goal) { goal_ = std::move(goal); }
  void set_task_goal(sim::SystemState goal) { task_goal_ = std::move(goal); }
  TreeNode& mutable_node(int i) { return nodes_.at(static_cast<std::size_t>(i)); }
  void refresh_best();

  // Search statistics.
  long failed_extensions = 0;
  std::array<long, kNumActionTypes> action_counts{};
  std::vector<double> progress;  // search progress after each appended node
  std::vector<int> goal_changes; // tree size when each sub-goal started

 private:
  std::vector<TreeNode> nodes_;
  int best_index_ = -1;
  int best_task_index_ = -1;
  sim::SystemState goal_;
  sim::SystemState task_goal_;
};

// Fills proximity, cached Jacobian and rewards of `node` under tree.goal().
void evaluate_node(const sim::EnvModel& env, const PlannerParams& params, const SearchTree& tree, TreeNode& node);

// Tree holding only the root state.
SearchTree make_tree(const sim::EnvModel& env, const sim::SystemState& root, const sim::SystemState& task_goal,
                     const PlannerParams& params);

// Recomputes every node's rewards under a new goal and refreshes best_index.
void recompute_rewards(SearchTree& tree, const sim::SystemState& s_g, const PlannerParams& params);

// Runs the action from node `node_idx` and appends the result. Returns the new
// index, or -1 when the rollout diverged (counted in failed_extensions).
int extend(SearchTree& tree, int node_idx, const ActionCommand& cmd, const sim::EnvModel& env,
           const PlannerParams& params, bool* improved = nullptr);

// Command the robot tracks when resting at the root.
inline Eigen::VectorXd root_command(const sim::SystemState& root) { return root.q_r(); }

}  // namespace manip::planner

#include "manip/planner/tree.hpp"

#include <algorithm>

#include "manip/error.hpp"
#include "manip/sim/dynamics.hpp"

namespace manip::planner {
namespace {

double node_reachability(const TreeNode& node, const sim::SystemState& goal, double mu) {
  const Eigen::VectorXd ds_o = node.state.q_o() - goal.q_o();
  return reachability(node.b_o, ds_o, mu);
}

}  // namespace

int SearchTree::append(TreeNode node, bool* improved) {
  const int idx = size();
  nodes_.push_back(std::move(node));
  const TreeNode& n = nodes_.back();
  bool better = false;
  if (best_index_ < 0) {
    best_index_ = idx;
  } else if (n.rewards.total > nodes_[static_cast<std::size_t>(best_index_)].rewards.total) {
    best_index_ = idx;
    better = true;
  }
  if (best_task_index_ < 0 || n.task_distance > nodes_[static_cast<std::size_t>(best_task_index_)].task_distance) {
    best_task_index_ = idx;
  }
  const double root_distance = nodes_.front().task_distance;
  const double best_distance = nodes_[static_cast<std::size_t>(best_task_index_)].task_distance;
  progress.push_back(root_distance == 0.0 ? 1.0 : 1.0 - best_distance / root_distance);
  if (improved) *improved = better;
  return idx;
}

void SearchTree::refresh_best() {
  best_index_ = nodes_.empty() ? -1 : 0;
  for (int i = 1; i < size(); ++i) {
    if (nodes_[static_cast<std::size_t>(i)].rewards.total >
        nodes_[static_cast<std::size_t>(best_index_)].rewards.total) {
      best_index_ = i;
    }
  }
}

void evaluate_node(const sim::EnvModel& env, const PlannerParams& params, const SearchTree& tree, TreeNode& node) {
  node.proximity = sim::proximity(env, node.state).d;
  if (params.q_m > 0.0 && node.b_o.size() == 0) {
    node.b_o = sim::control_jacobian(env, node.state, node.command, Eigen::VectorXd::Zero(env.n_r),
                                     params.jacobian_step)
                   .object;
  }
  const double m = node_reachability(node, tree.goal(), params.mu);
  node.rewards = node_rewards(node.state, tree.goal(), node.proximity, m, params);
  node.task_distance = distance_reward(node.state, tree.task_goal(), params.q_d);
}

SearchTree make_tree(const sim::EnvModel& env, const sim::SystemState& root, const sim::SystemState& task_goal,
                     const PlannerParams& params) {
  if (root.n_r() != env.n_r || root.n_o() != env.n_o) throw std::invalid_argument("make_tree: state/env mismatch");
  SearchTree tree;
  tree.set_goal(task_goal);
  tree.set_task_goal(task_goal);
  TreeNode node;
  node.state = root;
  node.command = root_command(root);
  node.action.type = ActionType::kNone;
  node.action.direction = Eigen::VectorXd::Zero(env.n_r);
  node.action.magnitude = Eigen::VectorXd::Zero(env.n_r);
  node.action.k = 0;
  evaluate_node(env, params, tree, node);
  tree.append(std::move(node));
  return tree;
}

void recompute_rewards(SearchTree& tree, const sim::SystemState& s_g, const PlannerParams& params) {
  tree.set_goal(s_g);
  for (int i = 0; i < tree.size(); ++i) {
    TreeNode& n = tree.mutable_node(i);
    const double m = node_reachability(n, s_g, params.mu);
    n.rewards.r_d = distance_reward(n.state, s_g, params.q_d);
    n.rewards.r_m = reachability_reward(m, params.q_m, params.m_min);
    n.rewards.total = n.rewards.r_d + n.rewards.r_p + n.rewards.r_m;
  }
  tree.refresh_best();
}

int extend(SearchTree& tree, int node_idx, const ActionCommand& cmd, const sim::EnvModel& env,
           const PlannerParams& params, bool* improved) {
  if (improved) *improved = false;
  const TreeNode& parent = tree.node(node_idx);
  if (cmd.k < 1) throw std::invalid_argument("extend: step multiple must be at least 1");
  const Eigen::VectorXd prev = parent.command;
  const Eigen::VectorXd target =
      (parent.state.q_r() + cmd.relative()).cwiseMax(env.joint_min()).cwiseMin(env.joint_max());

  TreeNode child;
  child.parent = node_idx;
  child.action = cmd;
  child.command = target;
  child.base_commands.reserve(static_cast<std::size_t>(cmd.k));
  try {
    sim::SystemState s = parent.state;
    Eigen::VectorXd last = prev;
    for (int j = 1; j <= cmd.k; ++j) {
      Eigen::VectorXd next = j == cmd.k ? target : Eigen::VectorXd(prev + (target - prev) * (double(j) / cmd.k));
      s = sim::rollout_segment(env, s, last, next, env.dt_a);
      child.base_commands.push_back(next);
      if (j < cmd.k) child.waypoints.push_back(s);
      last = std::move(next);
    }
    child.state = std::move(s);
    evaluate_node(env, params, tree, child);
  } catch (const SimulationDiverged&) {
    ++tree.failed_extensions;
    return -1;
  }
  return tree.append(std::move(child), improved);
}

}  // namespace manip::planner

#include "manip/planner/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "manip/planner/pareto.hpp"
#include "manip/sim/dynamics.hpp"

namespace manip::planner {

int SearchParamsState::horizon() const { return std::max(1, static_cast<int>(std::lround(n_e))); }

SearchParamsState update_search_params(const SearchParamsState& cur, bool found_better, int i_e,
                                       const PlannerParams& params) {
  SearchParamsState next = cur;
  if (found_better) {
    if (params.adaptive_beta) next.beta = params.beta_max;
    if (params.adaptive_horizon) next.n_e = 0.95 * cur.n_e + 0.05 * (i_e + 1);
  } else {
    if (params.adaptive_beta) next.beta = std::max(0.99 * cur.beta, params.beta_min);
    if (params.adaptive_horizon) {
      next.n_e = std::min(0.95 * cur.n_e + 0.05 * (cur.n_e + 1.0), static_cast<double>(params.n_e_max));
    }
  }
  return next;
}

int select_node(const SearchTree& tree, double beta, Rng& rng) {
  const int n = tree.size();
  const int rank = sample_pareto_rank(n, beta, rng);
  if (n == 1) return 0;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const auto& nodes = tree.nodes();
  auto better = [&nodes](int a, int b) {
    const double ra = nodes[static_cast<std::size_t>(a)].rewards.total;
    const double rb = nodes[static_cast<std::size_t>(b)].rewards.total;
    return ra > rb || (ra == rb && a < b);
  };
  std::nth_element(order.begin(), order.begin() + (rank - 1), order.end(), better);
  return order[static_cast<std::size_t>(rank - 1)];
}

sim::SystemState sample_goal(const sim::SystemState& task_goal, double b_g, const sim::EnvModel& env, Rng& rng) {
  const double p = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  if (p < b_g) return task_goal;
  return sim::sample_feasible_state(env, rng);
}

SearchTree plan(const sim::EnvModel& env, const sim::SystemState& s_1, const sim::SystemState& task_goal,
                const PlannerParams& params, Rng& rng) {
  params.validate(env);
  SearchTree tree = make_tree(env, s_1, task_goal, params);
  SearchParamsState st{params.beta_init, params.n_e_init};
  auto budget_left = [&] { return params.max_nodes <= 0 || tree.size() < params.max_nodes; };

  for (int ig = 0; ig < params.n_g && budget_left(); ++ig) {
    const sim::SystemState s_g = sample_goal(task_goal, params.b_g, env, rng);
    recompute_rewards(tree, s_g, params);
    tree.goal_changes.push_back(tree.size());
    for (int ii = 0; ii < params.n_i && budget_left(); ++ii) {
      int idx = select_node(tree, st.beta, rng);
      const int n_e = st.horizon();
      bool better = false;
      for (int ie = 1; ie <= n_e && budget_left(); ++ie) {
        const ActionType type = sample_action_type(params, rng);
        const ActionCommand cmd = sample_action(tree, idx, type, env, params, rng);
        ++tree.action_counts[static_cast<std::size_t>(cmd.type)];
        bool improved = false;
        const int child = extend(tree, idx, cmd, env, params, &improved);
        if (child < 0) continue;
        if (improved) {
          better = true;
          st = update_search_params(st, true, ie, params);
        }
        idx = child;
      }
      if (!better) st = update_search_params(st, false, 0, params);
    }
  }
  return tree;
}

Trajectory path_to(const SearchTree& tree, int node_idx) {
  std::vector<int> chain;
  for (int i = node_idx; i >= 0; i = tree.node(i).parent) chain.push_back(i);
  std::reverse(chain.begin(), chain.end());
  Trajectory traj;
  traj.node = node_idx;
  const TreeNode& root = tree.node(chain.front());
  traj.initial_command = root.command;
  traj.states.push_back(root.state);
  for (std::size_t c = 1; c < chain.size(); ++c) {
    const TreeNode& n = tree.node(chain[c]);
    const int k = static_cast<int>(n.base_commands.size());
    for (int j = 0; j < k; ++j) {
      traj.commands.push_back(n.base_commands[static_cast<std::size_t>(j)]);
      traj.states.push_back(j + 1 < k ? n.waypoints[static_cast<std::size_t>(j)] : n.state);
    }
  }
  return traj;
}

int closest_node(const SearchTree& tree, const sim::SystemState& s_g, const Eigen::VectorXd& q_d) {
  int best = 0;
  double best_r = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < tree.size(); ++i) {
    const double r = distance_reward(tree.node(i).state, s_g, q_d);
    if (r > best_r) {
      best_r = r;
      best = i;
    }
  }
  return best;
}

Trajectory best_trajectory(const SearchTree& tree, const sim::SystemState& s_g, const PlannerParams& params) {
  return path_to(tree, closest_node(tree, s_g, params.q_d));
}

double search_progress(const SearchTree& tree, const sim::SystemState& s_0, const sim::SystemState& s_g,
                       const Eigen::VectorXd& q_d) {
  const double r0 = distance_reward(s_0, s_g, q_d);
  if (r0 == 0.0) return 1.0;
  const double best = distance_reward(tree.node(closest_node(tree, s_g, q_d)).state, s_g, q_d);
  return 1.0 - best / r0;
}

}  // namespace manip::planner

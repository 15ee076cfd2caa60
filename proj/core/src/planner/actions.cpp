#include "manip/planner/actions.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "manip/error.hpp"
#include "manip/sim/dynamics.hpp"

namespace manip::planner {
namespace {

constexpr double kTinyNorm = 1e-12;

Eigen::VectorXd uniform_magnitude(const Eigen::VectorXd& alpha_max, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd m(alpha_max.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) m[i] = alpha_max[i] * unit(rng);
  return m;
}

}  // namespace

Eigen::VectorXd random_unit_vector(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(n);
  double norm = 0.0;
  do {
    for (int i = 0; i < n; ++i) v[i] = normal(rng);
    norm = v.norm();
  } while (norm < kTinyNorm);
  return v / norm;
}

ActionType sample_action_type(const PlannerParams& params, Rng& rng) {
  const auto p = params.action_probabilities();
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  int last = 0;
  for (int i = 0; i < kNumActionTypes; ++i) {
    if (p[i] <= 0.0) continue;
    last = i;
    acc += p[i];
    if (u < acc) return static_cast<ActionType>(i);
  }
  return static_cast<ActionType>(last);
}

Eigen::VectorXd goal_directed_delta(const Eigen::MatrixXd& b, const Eigen::MatrixXd& q, const Eigen::MatrixXd& r,
                                    const Eigen::VectorXd& f0_star, const Eigen::VectorXd& a0_star,
                                    const Eigen::VectorXd& s_g) {
  const Eigen::MatrixXd bt_q = b.transpose() * q;
  const Eigen::MatrixXd h = bt_q * b + r;
  const Eigen::LLT<Eigen::MatrixXd> llt(h);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("goal_directed_delta: B^T Q B + R is not positive definite (check Q and R)");
  }
  const Eigen::VectorXd rhs = bt_q * (f0_star - s_g) + r * a0_star;
  return -llt.solve(rhs);
}

Eigen::VectorXd proximity_gradient(const sim::EnvModel& env, const sim::SystemState& s, double h) {
  const Eigen::VectorXd d = sim::proximity(env, s).d;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(env.n_r);
  sim::SystemState probe = s;
  for (int j = 0; j < env.n_r; ++j) {
    const double q0 = s.q_r()[j];
    probe.q_r()[j] = q0 + h;
    const Eigen::VectorXd dp = sim::proximity(env, probe).d;
    probe.q_r()[j] = q0 - h;
    const Eigen::VectorXd dm = sim::proximity(env, probe).d;
    probe.q_r()[j] = q0;
    g[j] = ((dp - dm) / (2.0 * h)).dot(d);
  }
  return g;
}

ActionCommand sample_action(const SearchTree& tree, int node_idx, ActionType type, const sim::EnvModel& env,
                            const PlannerParams& params, Rng& rng) {
  const TreeNode& node = tree.node(node_idx);
  const Eigen::VectorXd alpha_max = env.alpha_max();
  ActionCommand cmd;
  cmd.k = std::uniform_int_distribution<int>(1, params.k_max)(rng);

  auto random_action = [&] {
    cmd.type = ActionType::kRandom;
    cmd.direction = random_unit_vector(env.n_r, rng);
    cmd.magnitude = uniform_magnitude(alpha_max, rng);
    return cmd;
  };

  switch (type) {
    case ActionType::kRandom:
    case ActionType::kNone:
      return random_action();
    case ActionType::kContinuation:
      if (node.action.type == ActionType::kNone) return random_action();
      cmd.type = ActionType::kContinuation;
      cmd.direction = node.action.direction;
      cmd.magnitude = uniform_magnitude(alpha_max, rng);
      return cmd;
    case ActionType::kProximity: {
      const Eigen::VectorXd g = proximity_gradient(env, node.state);
      const double norm = g.norm();
      if (!(norm > kTinyNorm)) return random_action();
      cmd.type = ActionType::kProximity;
      cmd.direction = -g / norm;
      cmd.magnitude = uniform_magnitude(alpha_max, rng);
      return cmd;
    }
    case ActionType::kGoalDirected: {
      const Eigen::VectorXd a0 = node.action.type == ActionType::kNone ? Eigen::VectorXd::Zero(env.n_r)
                                                                        : node.action.relative();
      Eigen::VectorXd a;
      try {
        const sim::ControlJacobian jac =
            sim::control_jacobian(env, node.state, node.command, a0, params.jacobian_step);
        const sim::SystemState f0 =
            sim::rollout_segment(env, node.state, node.command, node.state.q_r() + a0, env.dt_a);
        Eigen::VectorXd q_diag = params.q_d;
        q_diag.segment(env.n_r, env.n_r).setZero();
        q_diag.tail(env.n_o).setZero();
        const Eigen::MatrixXd q = q_diag.asDiagonal();
        const Eigen::MatrixXd r = params.r_weight * Eigen::MatrixXd::Identity(env.n_r, env.n_r);
        a = a0 + goal_directed_delta(jac.full, q, r, f0.flat(), a0, tree.goal().flat());
      } catch (const SimulationDiverged&) {
        return random_action();
      }
      const double norm = a.norm();
      if (!(norm > kTinyNorm) || !a.allFinite()) return random_action();
      cmd.type = ActionType::kGoalDirected;
      cmd.direction = a / norm;
      cmd.magnitude = alpha_max;
      return cmd;
    }
  }
  return random_action();
}

}  // namespace manip::planner

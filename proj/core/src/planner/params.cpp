#include "manip/planner/params.hpp"

#include <cmath>
#include <numbers>

#include "manip/error.hpp"

namespace manip::planner {

std::string_view action_type_name(ActionType t) {
  switch (t) {
    case ActionType::kRandom: return "random";
    case ActionType::kContinuation: return "continuation";
    case ActionType::kProximity: return "proximity";
    case ActionType::kGoalDirected: return "goal_directed";
    case ActionType::kNone: return "none";
  }
  return "none";
}

char action_type_letter(ActionType t) {
  switch (t) {
    case ActionType::kRandom: return 'r';
    case ActionType::kContinuation: return 'c';
    case ActionType::kProximity: return 'p';
    case ActionType::kGoalDirected: return 'g';
    case ActionType::kNone: return '-';
  }
  return '-';
}

std::array<double, kNumActionTypes> parse_action_mix(std::string_view letters) {
  std::array<double, kNumActionTypes> w{};
  if (letters.empty()) throw ConfigError("empty action mix");
  for (char c : letters) {
    int i = -1;
    switch (c) {
      case 'r': i = 0; break;
      case 'c': i = 1; break;
      case 'p': i = 2; break;
      case 'g': i = 3; break;
      default:
        throw ConfigError("action mix '" + std::string(letters) + "': unknown letter '" + std::string(1, c) +
                          "' (use r, c, p, g)");
    }
    w[static_cast<std::size_t>(i)] = 1.0;
  }
  return w;
}

std::array<double, kNumActionTypes> PlannerParams::action_probabilities() const {
  double sum = 0.0;
  for (double w : p_a) sum += w;
  std::array<double, kNumActionTypes> out{};
  for (int i = 0; i < kNumActionTypes; ++i) out[i] = p_a[i] / sum;
  return out;
}

void PlannerParams::validate(const sim::EnvModel& env) const {
  auto fail = [](const std::string& msg) { throw ConfigError("planner: " + msg); };
  if (n_g < 1) fail("n_g must be at least 1");
  if (n_i < 0) fail("n_i must be nonnegative");
  if (!(b_g >= 0.0 && b_g <= 1.0)) fail("b_g must lie in [0, 1]");
  if (!(beta_min > 0.0)) fail("beta_min must be positive");
  if (!(beta_min <= beta_max)) fail("beta_min must not exceed beta_max");
  if (adaptive_beta && !(beta_init >= beta_min && beta_init <= beta_max)) {
    fail("beta_init must lie in [beta_min, beta_max]");
  }
  if (!(beta_init > 0.0)) fail("beta_init must be positive");
  if (n_e_max < 1) fail("n_e_max must be at least 1");
  if (!(n_e_init >= 1.0 && n_e_init <= n_e_max)) fail("n_e_init must lie in [1, n_e_max]");
  double sum = 0.0;
  for (double w : p_a) {
    if (!(w >= 0.0) || !std::isfinite(w)) fail("p_a weights must be finite and nonnegative");
    sum += w;
  }
  if (!(sum > 0.0)) fail("p_a must have positive total weight");
  if (k_max < 1) fail("k_max must be at least 1");
  if (q_d.size() != env.n_s()) fail("q_d needs " + std::to_string(env.n_s()) + " entries");
  if ((q_d.array() < 0.0).any()) fail("q_d must be nonnegative");
  if (q_p.size() != static_cast<Eigen::Index>(env.sensors.size())) {
    fail("q_p needs " + std::to_string(env.sensors.size()) + " entries");
  }
  if ((q_p.array() < 0.0).any()) fail("q_p must be nonnegative");
  if (!(q_m >= 0.0)) fail("q_m must be nonnegative");
  if (!(m_min > 0.0)) fail("m_min must be positive");
  if (!(mu > 0.0)) fail("mu must be positive");
  if (!(r_weight > 0.0)) fail("r_weight must be positive");
  if (!(jacobian_step > 0.0)) fail("jacobian_step must be positive");
  if (max_nodes < 0) fail("max_nodes must be nonnegative");
}

PlannerParams default_params(const sim::EnvModel& env) {
  PlannerParams p;
  const int nr = env.n_r;
  const int no = env.n_o;
  p.q_d = Eigen::VectorXd::Zero(env.n_s());
  const int o = 2 * nr;
  switch (env.task) {
    case sim::Task::kBoxPush1D:
      p.p_a = {1, 1, 2, 2};
      p.q_d[o] = 1.0;
      p.q_p = Eigen::VectorXd::Ones(1);
      p.q_m = 1.0;
      break;
    case sim::Task::kBoxPush2D:
      p.p_a = {6, 2, 2, 1};
      p.q_d.segment(o, 2).setOnes();
      p.q_p = Eigen::VectorXd::Constant(1, 1e-3);
      p.q_m = 1e-3;
      break;
    case sim::Task::kPlanarHand:
      p.p_a = {1, 1, 2, 2};
      p.q_d.segment(o, 3) << 1.0, 1.0, std::numbers::pi / 2;
      p.q_p = Eigen::VectorXd::Constant(2, 1e-2);
      p.q_m = 1e-2;
      break;
  }
  p.q_d.segment(o + no, no).setConstant(0.1);
  if (p.q_p.size() != static_cast<Eigen::Index>(env.sensors.size())) {
    p.q_p = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(env.sensors.size()), p.q_p[0]);
  }
  return p;
}

}  // namespace manip::planner

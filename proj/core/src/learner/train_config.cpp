#include "manip/learner/train_config.hpp"

#include <cmath>
#include <string>

#include "manip/error.hpp"

namespace manip::learner {

std::string_view demo_mode_name(DemoMode m) {
  switch (m) {
    case DemoMode::kFixedRatio: return "fixed_ratio";
    case DemoMode::kDecaying: return "decaying";
    case DemoMode::kInitialOnly: return "initial_only";
    case DemoMode::kNone: return "none";
  }
  return "none";
}

DemoMode parse_demo_mode(std::string_view s) {
  if (s == "fixed_ratio" || s == "fixed") return DemoMode::kFixedRatio;
  if (s == "decaying") return DemoMode::kDecaying;
  if (s == "initial_only") return DemoMode::kInitialOnly;
  if (s == "none") return DemoMode::kNone;
  throw ConfigError("unknown demo mode '" + std::string(s) + "' (fixed_ratio, decaying, initial_only, none)");
}

std::string_view pretrain_mode_name(PretrainMode m) {
  switch (m) {
    case PretrainMode::kNone: return "none";
    case PretrainMode::kPolicy: return "policy";
    case PretrainMode::kPolicyValue: return "policy_value";
  }
  return "none";
}

PretrainMode parse_pretrain_mode(std::string_view s) {
  if (s == "none") return PretrainMode::kNone;
  if (s == "policy") return PretrainMode::kPolicy;
  if (s == "policy_value") return PretrainMode::kPolicyValue;
  throw ConfigError("unknown pretrain mode '" + std::string(s) + "' (none, policy, policy_value)");
}

namespace {

void check_rate(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1]");
}

void check_positive(long v, const char* name) {
  if (v <= 0) throw ConfigError(std::string(name) + " must be positive");
}

}  // namespace

void TrainConfig::validate(const sim::EnvModel& env) const {
  if (n_epochs < 0) throw ConfigError("n_epochs must be non-negative");
  check_positive(n_cycles, "n_cycles");
  check_positive(n_rollouts, "n_rollouts");
  check_positive(n_steps, "n_steps");
  if (n_episode < 0) throw ConfigError("n_episode must be non-negative");
  check_positive(n_batch, "n_batch");
  check_positive(hidden_width, "hidden_width");
  check_positive(hidden_layers, "hidden_layers");
  check_positive(buffer_episodes, "buffer_episodes");
  check_positive(eval_runs, "eval_runs");
  check_positive(demo_trees, "demo_trees");
  check_positive(demo_nodes, "demo_nodes");
  if (max_env_steps < 0) throw ConfigError("max_env_steps must be non-negative");
  if (pretrain_demos < 0 || pretrain_updates < 0) throw ConfigError("pretrain counts must be non-negative");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in [0, 1)");
  check_rate(tau, "tau");
  check_rate(eta, "eta");
  check_rate(b_p, "b_p");
  check_rate(her_ratio, "her_ratio");
  if (!(sigma >= 0.0 && std::isfinite(sigma))) throw ConfigError("sigma must be non-negative");
  if (!(lr_actor > 0.0) || !(lr_critic > 0.0)) throw ConfigError("learning rates must be positive");
  if (!(action_l2 >= 0.0)) throw ConfigError("action_l2 must be non-negative");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (q_d.size() != env.n_s()) throw ConfigError("q_d must have one entry per state coordinate");
  if ((q_d.array() < 0.0).any() || !(q_d.array() > 0.0).any()) {
    throw ConfigError("q_d must be non-negative with at least one positive entry");
  }
}

TrainConfig default_train_config(const sim::EnvModel& env, const planner::PlannerParams& params) {
  TrainConfig c;
  switch (env.task) {
    case sim::Task::kBoxPush1D: c.n_steps = 75; break;
    case sim::Task::kBoxPush2D: c.n_steps = 100; break;
    case sim::Task::kPlanarHand: c.n_steps = 80; break;
  }
  c.q_d = params.q_d;
  return c;
}

}  // namespace manip::learner

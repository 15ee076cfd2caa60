#include "manip/sim/env.hpp"

#include <cmath>
#include <sstream>

#include "manip/error.hpp"
#include "manip/sim/env_io.hpp"

namespace manip::sim {

EnvModel default_env(Task task);  // task_defaults.cpp

std::string_view task_name(Task task) {
  switch (task) {
    case Task::kBoxPush1D: return "box_push_1d";
    case Task::kBoxPush2D: return "box_push_2d";
    case Task::kPlanarHand: return "planar_hand";
  }
  return "unknown";
}

Task parse_task(std::string_view name) {
  if (name == "box_push_1d") return Task::kBoxPush1D;
  if (name == "box_push_2d") return Task::kBoxPush2D;
  if (name == "planar_hand") return Task::kPlanarHand;
  throw ConfigError("unknown task '" + std::string(name) +
                    "' (expected box_push_1d, box_push_2d or planar_hand)");
}

int EnvModel::substeps_per_action() const {
  return static_cast<int>(std::lround(dt_a / dt_c));
}

Eigen::VectorXd EnvModel::alpha_max() const {
  return alpha_fraction * (joint_max() - joint_min());
}

void EnvModel::validate() const {
  auto fail = [this](const std::string& msg) {
    throw ConfigError("env '" + name + "': " + msg);
  };
  const int ns = n_s();
  if (n_r <= 0 || n_o <= 0) fail("dimensions must be positive");
  auto check_size = [&](const Eigen::VectorXd& v, int n, const char* what) {
    if (v.size() != n) {
      fail(std::string(what) + " has " + std::to_string(v.size()) + " entries, expected " +
           std::to_string(n));
    }
    if (!v.allFinite()) fail(std::string(what) + " is not finite");
  };
  check_size(state_min, ns, "state_min");
  check_size(state_max, ns, "state_max");
  check_size(joint_inertia, n_r, "joint_inertia");
  check_size(kp, n_r, "kp");
  check_size(kd, n_r, "kd");
  check_size(start_state, ns, "start");
  check_size(task_goal, ns, "goal");
  check_size(start_jitter, ns, "start_jitter");
  check_size(goal_min, ns, "goal_min");
  check_size(goal_max, ns, "goal_max");
  for (int i = 0; i < ns; ++i) {
    if (!(state_min[i] < state_max[i])) fail("state_min < state_max violated at " + std::to_string(i));
    if (goal_min[i] > goal_max[i]) fail("goal_min > goal_max at " + std::to_string(i));
  }
  if ((joint_inertia.array() <= 0).any()) fail("joint_inertia must be positive");
  if ((kp.array() < 0).any() || (kd.array() < 0).any()) fail("PD gains must be nonnegative");
  if (!(object_mass > 0) || !(object_inertia > 0)) fail("object mass/inertia must be positive");
  if (!(dt_c > 0)) fail("dt_c must be positive");
  if (dt_c > dt_a) fail("dt_c must not exceed dt_a");
  const double ratio = dt_a / dt_c;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) fail("dt_a must be an integer multiple of dt_c");
  if (!(contact.stiffness > 0)) fail("contact stiffness must be positive");
  if (contact.friction < 0 || support.friction < 0) fail("friction must be nonnegative");
  if (contact.damping < 0 || contact.tangential_damping < 0) fail("contact damping must be nonnegative");
  if (task == Task::kPlanarHand && !(support.stiffness > 0)) fail("support stiffness must be positive");
  if (ground_friction < 0 || ground_damping < 0) fail("ground friction must be nonnegative");
  if (!(alpha_fraction > 0)) fail("alpha_fraction must be positive");
  if (!(penetration_tol >= 0)) fail("penetration_tol must be nonnegative");
  if (feasible_retries < 1) fail("feasible_retries must be at least 1");
  for (const auto& s : sensors) {
    if (s.robot_body < 0 || s.robot_body >= n_r) fail("sensor robot_body out of range");
  }
}

namespace {

void set_vector(Eigen::VectorXd& target, const std::string& key, const std::string& value, int n) {
  Eigen::VectorXd v = parse_vector(value, key);
  if (v.size() == 1 && n > 1) v = Eigen::VectorXd::Constant(n, v[0]);
  if (v.size() != n) {
    throw ConfigError("override '" + key + "' needs " + std::to_string(n) + " values, got " +
                      std::to_string(v.size()));
  }
  target = v;
}

void set_vec2(Eigen::Vector2d& target, const std::string& key, const std::string& value) {
  Eigen::VectorXd v;
  set_vector(v, key, value, 2);
  target = v;
}

}  // namespace

void apply_env_override(EnvModel& env, const std::string& key, const std::string& value) {
  const int ns = env.n_s();
  const int nr = env.n_r;
  auto scalar = [&](double& field) { field = parse_double(value, key); };

  if (key == "dt_c") return scalar(env.dt_c);
  if (key == "dt_a") return scalar(env.dt_a);
  if (key == "kp") return set_vector(env.kp, key, value, nr);
  if (key == "kd") return set_vector(env.kd, key, value, nr);
  if (key == "joint_inertia") return set_vector(env.joint_inertia, key, value, nr);
  if (key == "object_mass") return scalar(env.object_mass);
  if (key == "object_inertia") return scalar(env.object_inertia);
  if (key == "contact_stiffness") return scalar(env.contact.stiffness);
  if (key == "contact_damping") return scalar(env.contact.damping);
  if (key == "contact_friction") return scalar(env.contact.friction);
  if (key == "contact_tangential_damping") return scalar(env.contact.tangential_damping);
  if (key == "support_stiffness") return scalar(env.support.stiffness);
  if (key == "support_damping") return scalar(env.support.damping);
  if (key == "support_friction") return scalar(env.support.friction);
  if (key == "support_tangential_damping") return scalar(env.support.tangential_damping);
  if (key == "ground_friction") return scalar(env.ground_friction);
  if (key == "ground_damping") return scalar(env.ground_damping);
  if (key == "gravity") return scalar(env.gravity);
  if (key == "pusher_half") return set_vec2(env.pusher_half, key, value);
  if (key == "object_half") return set_vec2(env.object_half, key, value);
  if (key == "link_length") return scalar(env.link_length);
  if (key == "link_radius") return scalar(env.link_radius);
  if (key == "state_min") return set_vector(env.state_min, key, value, ns);
  if (key == "state_max") return set_vector(env.state_max, key, value, ns);
  if (key == "start") return set_vector(env.start_state, key, value, ns);
  if (key == "goal") return set_vector(env.task_goal, key, value, ns);
  if (key == "start_jitter") return set_vector(env.start_jitter, key, value, ns);
  if (key == "goal_min") return set_vector(env.goal_min, key, value, ns);
  if (key == "goal_max") return set_vector(env.goal_max, key, value, ns);
  if (key == "alpha_fraction") return scalar(env.alpha_fraction);
  if (key == "penetration_tol") return scalar(env.penetration_tol);
  if (key == "feasible_retries") {
    env.feasible_retries = static_cast<int>(parse_double(value, key));
    return;
  }
  throw ConfigError("unknown env parameter '" + key + "'");
}

EnvModel make_env(Task task, const ParamMap& overrides) {
  EnvModel env = default_env(task);
  for (const auto& [key, value] : overrides) {
    if (key == "task") {
      if (parse_task(value) != task) throw ConfigError("override 'task' conflicts with requested task");
      continue;
    }
    apply_env_override(env, key, value);
  }
  env.validate();
  return env;
}

EnvModel make_env(std::string_view name, const ParamMap& overrides) {
  return make_env(parse_task(name), overrides);
}

}  // namespace manip::sim

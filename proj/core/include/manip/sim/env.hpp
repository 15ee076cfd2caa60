#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace manip::sim {

enum class Task { kBoxPush1D, kBoxPush2D, kPlanarHand };

std::string_view task_name(Task task);
Task parse_task(std::string_view name);

// Compliant spring-damper contact with Coulomb-capped viscous friction.
struct ContactParams {
  double stiffness = 0.0;           // k_n [N/m]
  double damping = 0.0;             // c_n [N s/m]
  double friction = 0.0;            // mu_f [-]
  double tangential_damping = 0.0;  // c_t [N s/m]
};

// A virtual proximity sensor. Point pairs report the distance between a
// point fixed on a robot body and a point fixed on the object. Face-anchored
// pairs (box tasks) report the gap between the facing surfaces, i.e. the
// distance between the closest face points, zero once they touch.
struct SensorPair {
  int robot_body = 0;  // joint/link index
  Eigen::Vector2d robot_local = Eigen::Vector2d::Zero();
  Eigen::Vector2d object_local = Eigen::Vector2d::Zero();
  bool face_anchored = false;
};

using ParamMap = std::map<std::string, std::string>;

// Immutable description of one planar task. All numbers are in SI units.
struct EnvModel {
  Task task = Task::kBoxPush1D;
  std::string name;
  int n_r = 0;
  int n_o = 0;

  Eigen::VectorXd state_min;  // n_s
  Eigen::VectorXd state_max;  // n_s

  Eigen::VectorXd joint_inertia;  // n_r, mass or rotational inertia per joint
  Eigen::VectorXd kp;             // n_r
  Eigen::VectorXd kd;             // n_r
  double object_mass = 1.0;
  double object_inertia = 1.0;

  double dt_c = 0.01;  // control substep [s]
  double dt_a = 0.4;   // base action step [s]

  ContactParams contact;  // robot vs object
  ContactParams support;  // object vs palm/floor (vertical-plane tasks)
  // Top-down sliding resistance of the object on the table (box tasks).
  double ground_friction = 0.0;  // Coulomb coefficient
  double ground_damping = 0.0;   // viscous cap [N s/m]
  double gravity = 0.0;          // in-plane, along -y [m/s^2]

  Eigen::Vector2d pusher_half = Eigen::Vector2d::Zero();
  Eigen::Vector2d object_half = Eigen::Vector2d::Zero();
  double link_length = 0.0;
  double link_radius = 0.0;
  std::array<Eigen::Vector2d, 2> finger_base{Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()};

  std::vector<SensorPair> sensors;

  // Default episode: planner start, task goal, and the distributions the
  // learner draws start/goal pairs from.
  Eigen::VectorXd start_state;
  Eigen::VectorXd task_goal;
  Eigen::VectorXd start_jitter;  // half-width per coordinate
  Eigen::VectorXd goal_min;
  Eigen::VectorXd goal_max;

  double alpha_fraction = 0.3;  // alpha_max = fraction * joint range
  double penetration_tol = 1e-6;
  int feasible_retries = 10000;

  int n_s() const { return 2 * (n_r + n_o); }
  int substeps_per_action() const;
  Eigen::VectorXd alpha_max() const;
  Eigen::VectorXd joint_min() const { return state_min.head(n_r); }
  Eigen::VectorXd joint_max() const { return state_max.head(n_r); }

  // Throws ConfigError on an inconsistent model.
  void validate() const;
};

EnvModel make_env(std::string_view name, const ParamMap& overrides = {});
EnvModel make_env(Task task, const ParamMap& overrides = {});

// Applies one "key = value" override; throws ConfigError for unknown keys or
// malformed values. Does not re-validate.
void apply_env_override(EnvModel& env, const std::string& key, const std::string& value);

}  // namespace manip::sim

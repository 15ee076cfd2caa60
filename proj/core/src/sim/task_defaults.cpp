// Default geometry, gains and contact constants for the three planar tasks.
// Every number here can be overridden per run through make_env.
#include <cmath>
#include <numbers>

#include "manip/sim/env.hpp"

namespace manip::sim {
namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

EnvModel box_push_1d() {
  EnvModel e;
  e.task = Task::kBoxPush1D;
  e.name = "box_push_1d";
  e.n_r = 1;
  e.n_o = 1;
  // [x_r, v_r, x_o, v_o]
  e.state_min = vec({-0.5, -3.0, -0.5, -2.0});
  e.state_max = vec({1.5, 3.0, 1.5, 2.0});
  e.joint_inertia = vec({1.0});
  e.kp = vec({225.0});
  e.kd = vec({30.0});
  e.object_mass = 1.0;
  e.object_inertia = 1.0;
  e.contact = {5000.0, 20.0, 0.0, 0.0};
  e.ground_friction = 0.5;
  e.ground_damping = 20.0;
  e.pusher_half = {0.1, 0.1};
  e.object_half = {0.1, 0.1};
  e.sensors = {SensorPair{0, {0.0, 0.0}, {0.0, 0.0}, true}};
  e.start_state = vec({-0.3, 0.0, 0.0, 0.0});
  e.task_goal = vec({-0.3, 0.0, 1.0, 0.0});
  e.start_jitter = vec({0.05, 0.0, 0.05, 0.0});
  e.goal_min = vec({-0.3, 0.0, 0.9, 0.0});
  e.goal_max = vec({-0.3, 0.0, 1.1, 0.0});
  e.alpha_fraction = 0.1;
  return e;
}

EnvModel box_push_2d() {
  EnvModel e;
  e.task = Task::kBoxPush2D;
  e.name = "box_push_2d";
  e.n_r = 2;
  e.n_o = 2;
  // [x_r, y_r, vx_r, vy_r, x_o, y_o, vx_o, vy_o]
  e.state_min = vec({-0.5, -0.5, -3.0, -3.0, -0.3, -0.35, -1.0, -1.0});
  e.state_max = vec({1.3, 0.5, 3.0, 3.0, 1.1, 0.35, 1.0, 1.0});
  e.joint_inertia = vec({1.0, 1.0});
  e.kp = vec({225.0, 225.0});
  e.kd = vec({30.0, 30.0});
  e.object_mass = 1.0;
  e.object_inertia = 1.0;
  e.contact = {5000.0, 20.0, 0.2, 10.0};
  e.ground_friction = 0.5;
  e.ground_damping = 20.0;
  e.pusher_half = {0.1, 0.1};
  e.object_half = {0.1, 0.1};
  e.sensors = {SensorPair{0, {0.0, 0.0}, {0.0, 0.0}, true}};
  // Pusher starts between the object and its goal.
  e.start_state = vec({0.3, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0});
  e.task_goal = vec({0.3, 0.0, 0.0, 0.0, 0.8, 0.0, 0.0, 0.0});
  e.start_jitter = vec({0.05, 0.05, 0.0, 0.0, 0.05, 0.05, 0.0, 0.0});
  e.goal_min = vec({0.3, 0.0, 0.0, 0.0, 0.6, -0.15, 0.0, 0.0});
  e.goal_max = vec({0.3, 0.0, 0.0, 0.0, 1.0, 0.15, 0.0, 0.0});
  return e;
}

EnvModel planar_hand() {
  constexpr double kPi = std::numbers::pi;
  EnvModel e;
  e.task = Task::kPlanarHand;
  e.name = "planar_hand";
  e.n_r = 4;
  e.n_o = 3;
  // [q_l1, q_l2, q_r1, q_r2, qd x4, x_o, y_o, th_o, vx_o, vy_o, w_o]
  e.state_min = vec({-1.5, -2.2, -1.5, -2.2, -10, -10, -10, -10, -0.35, 0.0, -kPi, -2.0, -2.0, -10.0});
  e.state_max = vec({1.5, 2.2, 1.5, 2.2, 10, 10, 10, 10, 0.35, 0.45, kPi, 2.0, 2.0, 10.0});
  // Fingers are modelled per joint with gravity compensation.
  e.joint_inertia = vec({0.01, 0.01, 0.01, 0.01});
  e.kp = vec({4.0, 4.0, 4.0, 4.0});
  e.kd = vec({0.4, 0.4, 0.4, 0.4});
  e.object_mass = 0.2;
  e.object_inertia = 0.2 * (0.2 * 0.2 + 0.2 * 0.2) / 12.0;
  e.contact = {400.0, 2.0, 0.8, 2.0};
  e.support = {500.0, 2.0, 0.6, 2.0};
  e.gravity = 9.81;
  e.object_half = {0.1, 0.1};
  e.link_length = 0.15;
  e.link_radius = 0.015;
  e.finger_base = {Eigen::Vector2d(-0.3, 0.0), Eigen::Vector2d(0.3, 0.0)};
  e.sensors = {SensorPair{1, {0.15, 0.0}, {0.0, 0.0}, false}, SensorPair{3, {0.15, 0.0}, {0.0, 0.0}, false}};
  e.start_state = vec({0, 0, 0, 0, 0, 0, 0, 0, 0.0, 0.1, 0.0, 0, 0, 0});
  e.task_goal = vec({0, 0, 0, 0, 0, 0, 0, 0, 0.0, 0.1, kPi / 2, 0, 0, 0});
  e.start_jitter = vec({0.05, 0.05, 0.05, 0.05, 0, 0, 0, 0, 0.02, 0.0, 0.0, 0, 0, 0});
  e.goal_min = vec({0, 0, 0, 0, 0, 0, 0, 0, -0.05, 0.1, 1.3, 0, 0, 0});
  e.goal_max = vec({0, 0, 0, 0, 0, 0, 0, 0, 0.05, 0.1, 1.8, 0, 0, 0});
  return e;
}

}  // namespace

EnvModel default_env(Task task) {
  switch (task) {
    case Task::kBoxPush1D: return box_push_1d();
    case Task::kBoxPush2D: return box_push_2d();
    case Task::kPlanarHand: return planar_hand();
  }
  return box_push_1d();
}

}  // namespace manip::sim

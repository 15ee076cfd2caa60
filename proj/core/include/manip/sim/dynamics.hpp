#pragma once

#include <random>
#include <vector>

#include <Eigen/Core>

#include "manip/sim/env.hpp"
#include "manip/sim/state.hpp"

namespace manip::sim {

using Rng = std::mt19937_64;

struct RolloutTrace {
  std::vector<SystemState> substates;             // initial state plus one per substep
  std::vector<Eigen::VectorXd> applied_reference;  // reference at substep index t = 0..n
};

struct ProximityReading {
  Eigen::VectorXd d;
};

// One active contact pair as seen by the integrator in a given state.
struct ContactReport {
  int pair = 0;                  // candidate pair index
  bool support = false;          // object against palm/floor rather than robot
  double depth = 0.0;
  Eigen::Vector2d normal;        // unit; from object toward robot (or support toward object)
  double normal_force = 0.0;     // >= 0
  Eigen::Vector2d tangential_force = Eigen::Vector2d::Zero();
};

// One semi-implicit Euler step of length dt_c with PD tracking of the
// absolute joint reference `a_ref`. Throws SimulationDiverged.
SystemState substep(const EnvModel& env, const SystemState& s, const Eigen::VectorXd& a_ref);

// Runs dt_total / dt_c substeps, blending the reference linearly from
// prev_cmd (t = 0) into new_cmd (last substep).
SystemState rollout_segment(const EnvModel& env, const SystemState& s, const Eigen::VectorXd& prev_cmd,
                            const Eigen::VectorXd& new_cmd, double dt_total, RolloutTrace* trace = nullptr);

// Interpolated reference used at substep t of an n-substep segment.
Eigen::VectorXd interpolated_reference(const Eigen::VectorXd& prev_cmd, const Eigen::VectorXd& new_cmd, int t,
                                       int n);

ProximityReading proximity(const EnvModel& env, const SystemState& s);

// Contact forces acting in state s (no integration).
std::vector<ContactReport> contact_report(const EnvModel& env, const SystemState& s);

bool is_penetrating(const EnvModel& env, const SystemState& s);

struct ControlJacobian {
  Eigen::MatrixXd full;    // n_s x n_r
  Eigen::MatrixXd object;  // n_o x n_r, object configuration rows of `full`
};

inline constexpr double kJacobianStep = 1e-4;

// Central differences of the one-base-step map a -> f(s, a) where the command
// tracked is q_r + a, starting from the previously tracked command prev_cmd.
ControlJacobian control_jacobian(const EnvModel& env, const SystemState& s, const Eigen::VectorXd& prev_cmd,
                                 const Eigen::VectorXd& a0, double h = kJacobianStep);

// Uniform sample of the state box, rejected while penetrating.
SystemState sample_feasible_state(const EnvModel& env, Rng& rng);

// Uniform sample of [lo, hi] rejected while penetrating (episode starts).
SystemState sample_feasible_in(const EnvModel& env, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                               Rng& rng);

// Uniform sample of [goal_min, goal_max]. Goals are only compared through the
// distance weights, so they are not checked for penetration.
SystemState sample_goal_state(const EnvModel& env, Rng& rng);

SystemState start_state(const EnvModel& env);
SystemState task_goal(const EnvModel& env);

}  // namespace manip::sim

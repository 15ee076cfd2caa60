#include "manip/sim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "manip/error.hpp"
#include "manip/sim/geometry.hpp"

namespace manip::sim {
namespace {

// Normal load used for top-down table friction of the box tasks.
constexpr double kTableGravity = 9.81;

using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 16, 1>;

inline Eigen::Vector2d perp(const Eigen::Vector2d& v) { return {-v.y(), v.x()}; }

// Planar pose/twist of the object, whatever its coordinate count.
struct ObjectFrame {
  Pose2 pose;
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  double omega = 0.0;

  Eigen::Vector2d velocity_at(const Eigen::Vector2d& world) const { return v + omega * perp(world - pose.p); }
};

template <typename Vec>
ObjectFrame object_frame(const EnvModel& env, const Vec& x) {
  ObjectFrame f;
  const int o = 2 * env.n_r;
  const int vo = o + env.n_o;
  f.pose.p.x() = x[o];
  f.v.x() = x[vo];
  if (env.n_o >= 2) {
    f.pose.p.y() = x[o + 1];
    f.v.y() = x[vo + 1];
  }
  if (env.n_o >= 3) {
    f.pose.theta = x[o + 2];
    f.omega = x[vo + 2];
  }
  return f;
}

// Finger geometry: joint angles measured from +y, counter-clockwise positive.
inline Eigen::Vector2d link_dir(double phi) { return {-std::sin(phi), std::cos(phi)}; }

struct LinkSegment {
  Eigen::Vector2d a;
  Eigen::Vector2d b;
};

template <typename Vec>
LinkSegment finger_link(const EnvModel& env, const Vec& q, int body) {
  const int finger = body / 2;
  const int link = body % 2;
  const double q1 = q[2 * finger];
  const double q2 = q[2 * finger + 1];
  const Eigen::Vector2d base = env.finger_base[finger];
  const Eigen::Vector2d knee = base + env.link_length * link_dir(q1);
  if (link == 0) return {base, knee};
  return {knee, knee + env.link_length * link_dir(q1 + q2)};
}

// Velocity of a world point rigidly attached to robot body `body`.
template <typename Vec>
Eigen::Vector2d robot_point_velocity(const EnvModel& env, const Vec& q, const Vec& qd, int body,
                                     const Eigen::Vector2d& world) {
  if (env.task != Task::kPlanarHand) {
    return env.n_r == 1 ? Eigen::Vector2d(qd[0], 0.0) : Eigen::Vector2d(qd[0], qd[1]);
  }
  const int finger = body / 2;
  const LinkSegment proximal = finger_link(env, q, 2 * finger);
  Eigen::Vector2d v = qd[2 * finger] * perp(world - proximal.a);
  if (body % 2 == 1) v += qd[2 * finger + 1] * perp(world - proximal.b);
  return v;
}

// Adds J^T f for a force applied at a world point on robot body `body`.
template <typename Vec, typename Out>
void add_robot_force(const EnvModel& env, const Vec& q, int body, const Eigen::Vector2d& world,
                     const Eigen::Vector2d& force, Out& tau) {
  if (env.task != Task::kPlanarHand) {
    tau[0] += force.x();
    if (env.n_r >= 2) tau[1] += force.y();
    return;
  }
  const int finger = body / 2;
  const LinkSegment proximal = finger_link(env, q, 2 * finger);
  tau[2 * finger] += perp(world - proximal.a).dot(force);
  if (body % 2 == 1) tau[2 * finger + 1] += perp(world - proximal.b).dot(force);
}

struct GeomContact {
  int pair = 0;
  bool support = false;
  int body = 0;
  double depth = 0.0;
  Eigen::Vector2d normal;        // from object toward robot, or support toward object
  Eigen::Vector2d robot_point;   // unused for support contacts
  Eigen::Vector2d object_point;
};

template <typename Vec>
int collect_contacts(const EnvModel& env, const Vec& x, GeomContact* out, bool only_active) {
  int count = 0;
  const ObjectFrame obj = object_frame(env, x);
  auto push = [&](const GeomContact& c) {
    if (!only_active || c.depth > 0.0) out[count++] = c;
  };
  switch (env.task) {
    case Task::kBoxPush1D: {
      const double xr = x[0];
      const double delta = xr - obj.pose.p.x();
      GeomContact c;
      c.depth = env.pusher_half.x() + env.object_half.x() - std::abs(delta);
      c.normal = Eigen::Vector2d(delta < 0 ? -1.0 : 1.0, 0.0);
      c.robot_point = Eigen::Vector2d(xr, 0.0);
      c.object_point = obj.pose.p;
      push(c);
      break;
    }
    case Task::kBoxPush2D: {
      const Eigen::Vector2d pr(x[0], x[1]);
      GeomContact c;
      c.depth = aabb_penetration(pr, env.pusher_half, obj.pose.p, env.object_half, &c.normal);
      c.robot_point = pr;
      c.object_point = obj.pose.p;
      push(c);
      break;
    }
    case Task::kPlanarHand: {
      const auto q = x.head(env.n_r);
      for (int body = 0; body < env.n_r; ++body) {
        const LinkSegment seg = finger_link(env, q, body);
        const CapsuleBoxQuery hit = capsule_box(seg.a, seg.b, env.link_radius, obj.pose, env.object_half);
        GeomContact c;
        c.pair = body;
        c.body = body;
        c.depth = hit.depth;
        if (hit.depth > 0.0) {
          c.normal = hit.normal;
          c.robot_point = hit.segment_point;
          c.object_point = hit.surface_point;
        }
        push(c);
      }
      const Eigen::Vector2d& h = env.object_half;
      const Eigen::Vector2d corners[4] = {{h.x(), h.y()}, {-h.x(), h.y()}, {-h.x(), -h.y()}, {h.x(), -h.y()}};
      for (int i = 0; i < 4; ++i) {
        const Eigen::Vector2d w = obj.pose.to_world(corners[i]);
        GeomContact c;
        c.pair = env.n_r + i;
        c.support = true;
        c.depth = -w.y();
        c.normal = Eigen::Vector2d(0.0, 1.0);
        c.object_point = w;
        push(c);
      }
      break;
    }
  }
  return count;
}

// Force on body A from a compliant contact with body B; n points from B to A
// and v_rel is the velocity of A relative to B at the contact.
Eigen::Vector2d pair_force(const ContactParams& p, double depth, const Eigen::Vector2d& n,
                           const Eigen::Vector2d& v_rel, double* fn_out, Eigen::Vector2d* ft_out) {
  const double vn = n.dot(v_rel);
  const double fn = std::max(0.0, p.stiffness * depth - p.damping * vn);
  Eigen::Vector2d ft = Eigen::Vector2d::Zero();
  const Eigen::Vector2d vt = v_rel - vn * n;
  const double speed = vt.norm();
  if (speed > 0.0) ft = -std::min(p.friction * fn, p.tangential_damping * speed) / speed * vt;
  if (fn_out) *fn_out = fn;
  if (ft_out) *ft_out = ft;
  return fn * n + ft;
}

constexpr int kMaxContacts = 16;

// Generalized contact and table forces; robot part into tau, object part
// (fx, fy, torque) into wrench.
template <typename Vec>
void contact_forces(const EnvModel& env, const Vec& x, SmallVec& tau, Eigen::Vector3d& wrench,
                    std::vector<ContactReport>* report) {
  const int nr = env.n_r;
  const auto q = x.head(nr);
  const auto qd = x.segment(nr, nr);
  const ObjectFrame obj = object_frame(env, x);
  tau.setZero(nr);
  wrench.setZero();

  GeomContact contacts[kMaxContacts];
  const int n = collect_contacts(env, x, contacts, true);
  for (int i = 0; i < n; ++i) {
    const GeomContact& c = contacts[i];
    ContactReport rep;
    rep.pair = c.pair;
    rep.support = c.support;
    rep.depth = c.depth;
    rep.normal = c.normal;
    if (c.support) {
      const Eigen::Vector2d v_obj = obj.velocity_at(c.object_point);
      const Eigen::Vector2d f = pair_force(env.support, c.depth, c.normal, v_obj, &rep.normal_force,
                                           &rep.tangential_force);
      wrench.x() += f.x();
      wrench.y() += f.y();
      const Eigen::Vector2d r = c.object_point - obj.pose.p;
      wrench.z() += r.x() * f.y() - r.y() * f.x();
    } else {
      const Eigen::Vector2d v_rob = robot_point_velocity(env, q, qd, c.body, c.robot_point);
      const Eigen::Vector2d v_obj = obj.velocity_at(c.object_point);
      const Eigen::Vector2d f = pair_force(env.contact, c.depth, c.normal, v_rob - v_obj, &rep.normal_force,
                                           &rep.tangential_force);
      add_robot_force(env, q, c.body, c.robot_point, f, tau);
      wrench.x() -= f.x();
      wrench.y() -= f.y();
      const Eigen::Vector2d r = c.object_point - obj.pose.p;
      wrench.z() -= r.x() * f.y() - r.y() * f.x();
    }
    if (report) report->push_back(rep);
  }

  if (env.ground_friction > 0.0 || env.ground_damping > 0.0) {
    const double speed = obj.v.norm();
    if (speed > 0.0) {
      const double mag = std::min(env.ground_friction * env.object_mass * kTableGravity, env.ground_damping * speed);
      wrench.x() -= mag * obj.v.x() / speed;
      wrench.y() -= mag * obj.v.y() / speed;
    }
  }
}

template <typename Vec, typename Ref>
void step_in_place(const EnvModel& env, Vec& x, const Ref& ref) {
  const int nr = env.n_r;
  const int no = env.n_o;
  const double dt = env.dt_c;
  SmallVec tau;
  Eigen::Vector3d wrench;
  contact_forces(env, x, tau, wrench, nullptr);

  for (int j = 0; j < nr; ++j) {
    const double u = -env.kp[j] * (x[j] - ref[j]) - env.kd[j] * x[nr + j];
    x[nr + j] += dt * (u + tau[j]) / env.joint_inertia[j];
  }
  const int o = 2 * nr;
  const int vo = o + no;
  x[vo] += dt * wrench.x() / env.object_mass;
  if (no >= 2) x[vo + 1] += dt * (wrench.y() / env.object_mass - env.gravity);
  if (no >= 3) x[vo + 2] += dt * wrench.z() / env.object_inertia;

  for (int j = 0; j < nr; ++j) x[j] += dt * x[nr + j];
  for (int k = 0; k < no; ++k) x[o + k] += dt * x[vo + k];

  for (int i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) {
      throw SimulationDiverged(env.name + ": non-finite state coordinate " + std::to_string(i) +
                                   " (check PD gains / contact stiffness against dt_c)",
                               i);
    }
  }

  // Position bounds act as walls: clamp and stop that coordinate.
  auto clamp_block = [&](int pos, int vel, int count) {
    for (int k = 0; k < count; ++k) {
      const int ip = pos + k, iv = vel + k;
      if (x[ip] < env.state_min[ip]) {
        x[ip] = env.state_min[ip];
        x[iv] = 0.0;
      } else if (x[ip] > env.state_max[ip]) {
        x[ip] = env.state_max[ip];
        x[iv] = 0.0;
      }
      x[iv] = std::clamp(x[iv], env.state_min[iv], env.state_max[iv]);
    }
  };
  clamp_block(0, nr, nr);
  clamp_block(o, vo, no);
}

}  // namespace

SystemState substep(const EnvModel& env, const SystemState& s, const Eigen::VectorXd& a_ref) {
  if (a_ref.size() != env.n_r) throw std::invalid_argument("substep: reference has wrong dimension");
  Eigen::VectorXd x = s.flat();
  step_in_place(env, x, a_ref);
  return SystemState(env.n_r, env.n_o, std::move(x));
}

Eigen::VectorXd interpolated_reference(const Eigen::VectorXd& prev_cmd, const Eigen::VectorXd& new_cmd, int t,
                                       int n) {
  if (t <= 0) return prev_cmd;
  if (t >= n) return new_cmd;
  const double w = static_cast<double>(t) / static_cast<double>(n);
  return (1.0 - w) * prev_cmd + w * new_cmd;
}

SystemState rollout_segment(const EnvModel& env, const SystemState& s, const Eigen::VectorXd& prev_cmd,
                            const Eigen::VectorXd& new_cmd, double dt_total, RolloutTrace* trace) {
  if (prev_cmd.size() != env.n_r || new_cmd.size() != env.n_r) {
    throw std::invalid_argument("rollout_segment: command has wrong dimension");
  }
  const double ratio = dt_total / env.dt_a;
  const long k = std::lround(ratio);
  if (k < 1 || std::abs(ratio - static_cast<double>(k)) > 1e-9 * ratio) {
    throw std::invalid_argument("rollout_segment: dt_total must be a positive multiple of dt_a");
  }
  const int n = static_cast<int>(k) * env.substeps_per_action();
  if (trace) {
    trace->substates.clear();
    trace->applied_reference.clear();
    trace->substates.reserve(n + 1);
    trace->applied_reference.reserve(n + 1);
    trace->substates.push_back(s);
    trace->applied_reference.push_back(prev_cmd);
  }
  Eigen::VectorXd x = s.flat();
  SmallVec ref(env.n_r);
  for (int t = 1; t <= n; ++t) {
    if (t == n) {
      ref = new_cmd;
    } else {
      const double w = static_cast<double>(t) / static_cast<double>(n);
      ref = (1.0 - w) * prev_cmd + w * new_cmd;
    }
    step_in_place(env, x, ref);
    if (trace) {
      trace->substates.emplace_back(env.n_r, env.n_o, x);
      trace->applied_reference.emplace_back(ref);
    }
  }
  return SystemState(env.n_r, env.n_o, std::move(x));
}

ProximityReading proximity(const EnvModel& env, const SystemState& s) {
  ProximityReading out;
  out.d.resize(static_cast<Eigen::Index>(env.sensors.size()));
  const ObjectFrame obj = object_frame(env, s.flat());
  const auto q = s.q_r();
  for (std::size_t i = 0; i < env.sensors.size(); ++i) {
    const SensorPair& sp = env.sensors[i];
    double d = 0.0;
    if (sp.face_anchored) {
      if (env.task == Task::kBoxPush1D) {
        d = std::max(0.0, std::abs(obj.pose.p.x() - q[0]) - (env.pusher_half.x() + env.object_half.x()));
      } else {
        d = aabb_gap(Eigen::Vector2d(q[0], q[1]), env.pusher_half, obj.pose.p, env.object_half);
      }
    } else {
      Eigen::Vector2d pr;
      if (env.task == Task::kPlanarHand) {
        const LinkSegment seg = finger_link(env, q, sp.robot_body);
        const Eigen::Vector2d axis = (seg.b - seg.a) / env.link_length;
        pr = seg.a + sp.robot_local.x() * axis + sp.robot_local.y() * perp(axis);
      } else {
        pr = Eigen::Vector2d(q[0], env.n_r >= 2 ? q[1] : 0.0) + sp.robot_local;
      }
      d = (pr - obj.pose.to_world(sp.object_local)).norm();
    }
    out.d[static_cast<Eigen::Index>(i)] = d;
  }
  return out;
}

std::vector<ContactReport> contact_report(const EnvModel& env, const SystemState& s) {
  std::vector<ContactReport> out;
  SmallVec tau;
  Eigen::Vector3d wrench;
  contact_forces(env, s.flat(), tau, wrench, &out);
  return out;
}

bool is_penetrating(const EnvModel& env, const SystemState& s) {
  GeomContact contacts[kMaxContacts];
  const int n = collect_contacts(env, s.flat(), contacts, false);
  for (int i = 0; i < n; ++i) {
    if (contacts[i].depth > env.penetration_tol) return true;
  }
  return false;
}

ControlJacobian control_jacobian(const EnvModel& env, const SystemState& s, const Eigen::VectorXd& prev_cmd,
                                 const Eigen::VectorXd& a0, double h) {
  const int nr = env.n_r;
  ControlJacobian out;
  out.full.resize(env.n_s(), nr);
  const Eigen::VectorXd base = s.q_r();
  for (int j = 0; j < nr; ++j) {
    Eigen::VectorXd plus = base + a0;
    Eigen::VectorXd minus = base + a0;
    plus[j] += h;
    minus[j] -= h;
    try {
      const SystemState fp = rollout_segment(env, s, prev_cmd, plus, env.dt_a);
      const SystemState fm = rollout_segment(env, s, prev_cmd, minus, env.dt_a);
      out.full.col(j) = (fp.flat() - fm.flat()) / (2.0 * h);
    } catch (const SimulationDiverged& e) {
      throw SimulationDiverged(std::string("control_jacobian: perturbing action coordinate ") +
                                   std::to_string(j) + ": " + e.what(),
                               e.coordinate());
    }
  }
  out.object = out.full.middleRows(2 * nr, env.n_o);
  return out;
}

SystemState sample_feasible_in(const EnvModel& env, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                               Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SystemState s(env.n_r, env.n_o);
  for (int attempt = 0; attempt < env.feasible_retries; ++attempt) {
    for (int i = 0; i < env.n_s(); ++i) s.flat()[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
    if (!is_penetrating(env, s)) return s;
  }
  throw SamplingExhausted(env.name + ": no penetration-free state after " + std::to_string(env.feasible_retries) +
                          " samples (degenerate bounds?)");
}

SystemState sample_goal_state(const EnvModel& env, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SystemState s(env.n_r, env.n_o);
  for (int i = 0; i < env.n_s(); ++i) s.flat()[i] = env.goal_min[i] + (env.goal_max[i] - env.goal_min[i]) * unit(rng);
  return s;
}

SystemState sample_feasible_state(const EnvModel& env, Rng& rng) {
  return sample_feasible_in(env, env.state_min, env.state_max, rng);
}

SystemState start_state(const EnvModel& env) { return SystemState(env.n_r, env.n_o, env.start_state); }

SystemState task_goal(const EnvModel& env) { return SystemState(env.n_r, env.n_o, env.task_goal); }

}  // namespace manip::sim

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "manip/error.hpp"
#include "manip/sim/dynamics.hpp"
#include "manip/sim/env.hpp"
#include "manip/sim/env_io.hpp"
#include "manip/sim/geometry.hpp"

using namespace manip;
using manip::sim::SystemState;

namespace {

SystemState state_of(const sim::EnvModel& env, std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double d : v) x[i++] = d;
  return SystemState(env.n_r, env.n_o, x);
}

// Environment with the robot parked far from the object.
sim::EnvModel free_env() {
  sim::EnvModel env = sim::make_env("box_push_2d");
  env.gravity = 0.0;
  env.ground_friction = 0.0;
  env.ground_damping = 0.0;
  return env;
}

}  // namespace

TEST(SystemState, Blocks) {
  SystemState s(2, 3);
  EXPECT_EQ(s.size(), 10);
  s.flat().setLinSpaced(10, 0.0, 9.0);
  EXPECT_DOUBLE_EQ(s.q_r()[1], 1.0);
  EXPECT_DOUBLE_EQ(s.qd_r()[0], 2.0);
  EXPECT_DOUBLE_EQ(s.q_o()[2], 6.0);
  EXPECT_DOUBLE_EQ(s.qd_o()[0], 7.0);
  EXPECT_TRUE(s.all_finite());
  s.flat()[4] = std::nan("");
  EXPECT_EQ(s.first_non_finite(), 4);
}

TEST(MakeEnv, Dimensions) {
  const auto e1 = sim::make_env("box_push_1d");
  EXPECT_EQ(e1.n_r, 1);
  EXPECT_EQ(e1.n_o, 1);
  const auto e2 = sim::make_env("box_push_2d");
  EXPECT_EQ(e2.n_r, 2);
  EXPECT_EQ(e2.n_o, 2);
  const auto eh = sim::make_env("planar_hand");
  EXPECT_EQ(eh.n_r, 4);
  EXPECT_EQ(eh.n_o, 3);
  EXPECT_DOUBLE_EQ(e1.dt_a, 0.4);
  EXPECT_DOUBLE_EQ(e1.dt_c, 0.01);
  EXPECT_EQ(e1.substeps_per_action(), 40);
}

TEST(MakeEnv, BoxPush1DGoalIsOneMetre) {
  const auto e = sim::make_env("box_push_1d");
  EXPECT_NEAR(e.task_goal[2] - e.start_state[2], 1.0, 1e-12);
}

TEST(MakeEnv, RejectsBadInput) {
  EXPECT_THROW(sim::make_env("box_push_3d"), ConfigError);
  EXPECT_THROW(sim::make_env("box_push_2d", {{"dt_c", "1.0"}}), ConfigError);
  EXPECT_THROW(sim::make_env("box_push_2d", {{"no_such_key", "1"}}), ConfigError);
  EXPECT_THROW(sim::make_env("box_push_2d", {{"kp", "1,2,3"}}), ConfigError);
  EXPECT_THROW(sim::make_env("box_push_2d", {{"contact_stiffness", "-1"}}), ConfigError);
}

TEST(MakeEnv, OverrideApplied) {
  const auto e = sim::make_env("box_push_1d", {{"object_mass", "2.5"}});
  EXPECT_DOUBLE_EQ(e.object_mass, 2.5);
}

TEST(EnvIo, RoundTrip) {
  for (const char* name : {"box_push_1d", "box_push_2d", "planar_hand"}) {
    const auto env = sim::make_env(name);
    const std::string text = sim::serialize_env(env);
    const auto back = sim::parse_env(text);
    EXPECT_EQ(sim::serialize_env(back), text) << name;
  }
}

TEST(EnvIo, StateRoundTrip) {
  const auto env = sim::make_env("planar_hand");
  const SystemState s = sim::start_state(env);
  const SystemState back = sim::parse_state(env, sim::format_state(s));
  EXPECT_EQ(back, s);
}

TEST(EnvIo, ParseErrorsNameTheKey) {
  try {
    sim::parse_double("abc", "object_mass");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("object_mass"), std::string::npos);
  }
  EXPECT_THROW(sim::parse_bool("maybe", "k"), ConfigError);
  EXPECT_EQ(sim::parse_vector("[1, 2,3]", "k").size(), 3);
}

TEST(Substep, ForceFreeDrift) {
  const auto env = free_env();
  SystemState s = sim::start_state(env);
  s.q_r() << -0.4, 0.4;  // far from the object
  s.qd_o() << 0.3, -0.2;
  const SystemState n = sim::substep(env, s, s.q_r());
  EXPECT_NEAR(n.q_o()[0], s.q_o()[0] + env.dt_c * 0.3, 1e-12);
  EXPECT_NEAR(n.q_o()[1], s.q_o()[1] - env.dt_c * 0.2, 1e-12);
  EXPECT_NEAR(n.qd_o()[0], 0.3, 1e-12);
  EXPECT_NEAR(n.qd_o()[1], -0.2, 1e-12);
}

TEST(Substep, PdEquilibrium) {
  const auto env = sim::make_env("box_push_1d");
  const SystemState s = sim::start_state(env);
  const SystemState n = sim::substep(env, s, s.q_r());
  EXPECT_EQ(n, s);
}

TEST(Substep, ContactIsRepulsive) {
  const auto env = sim::make_env("box_push_1d");
  // Pusher overlapping the left face of the object by 1 cm.
  const SystemState s = state_of(env, {-0.19, 0.0, 0.0, 0.0});
  const SystemState n = sim::substep(env, s, s.q_r());
  EXPECT_GT(n.qd_o()[0], 0.0);
  for (const auto& c : sim::contact_report(env, s)) EXPECT_GE(c.normal_force, 0.0);
}

TEST(Substep, NonAdhesiveWhileSeparating) {
  const auto env = sim::make_env("box_push_1d");
  // Slight overlap but the pusher retreats fast: damping must not pull.
  const SystemState s = state_of(env, {-0.2 + 1e-5, -3.0, 0.0, 0.0});
  for (const auto& c : sim::contact_report(env, s)) EXPECT_GE(c.normal_force, 0.0);
  const SystemState n = sim::substep(env, s, s.q_r());
  EXPECT_GE(n.qd_o()[0], 0.0);
}

TEST(Substep, DivergenceReportsCoordinate) {
  auto env = sim::make_env("box_push_1d");
  SystemState s = sim::start_state(env);
  Eigen::VectorXd ref(1);
  ref << std::nan("");
  EXPECT_THROW(sim::substep(env, s, ref), SimulationDiverged);
}

TEST(Substep, ForceFreeMomentumConserved) {
  auto env = free_env();
  env.kp.setZero();
  env.kd.setZero();
  SystemState s = sim::start_state(env);
  s.q_r() << -0.4, 0.4;
  s.q_o() << 0.6, 0.0;
  s.qd_o() << 0.05, 0.02;
  for (int i = 0; i < 100; ++i) {
    const SystemState n = sim::substep(env, s, s.q_r());
    EXPECT_NEAR((n.qd_o() - s.qd_o()).norm() * env.object_mass, 0.0, 1e-12);
    s = n;
  }
}

TEST(RolloutSegment, StaticStartStays) {
  const auto env = sim::make_env("box_push_1d");
  const SystemState s = sim::start_state(env);
  const SystemState n = sim::rollout_segment(env, s, s.q_r(), s.q_r(), env.dt_a);
  EXPECT_LT((n.flat() - s.flat()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(RolloutSegment, InterpolationEndpointsAndTraceLength) {
  const auto env = sim::make_env("box_push_2d");
  const SystemState s = sim::start_state(env);
  Eigen::VectorXd prev = s.q_r(), next = s.q_r();
  next[0] -= 0.1;
  sim::RolloutTrace tr;
  sim::rollout_segment(env, s, prev, next, 2 * env.dt_a, &tr);
  const int n = 2 * env.substeps_per_action();
  ASSERT_EQ(static_cast<int>(tr.substates.size()), n + 1);
  ASSERT_EQ(static_cast<int>(tr.applied_reference.size()), n + 1);
  EXPECT_EQ(tr.applied_reference.front(), prev);
  EXPECT_EQ(tr.applied_reference.back(), next);
  EXPECT_EQ(sim::interpolated_reference(prev, next, 0, n), prev);
  EXPECT_EQ(sim::interpolated_reference(prev, next, n, n), next);
  EXPECT_NEAR((sim::interpolated_reference(prev, next, n / 2, n) - 0.5 * (prev + next)).norm(), 0.0, 1e-15);
}

TEST(RolloutSegment, ReferenceContinuousAcrossSegments) {
  const auto env = sim::make_env("box_push_2d");
  const SystemState s = sim::start_state(env);
  Eigen::VectorXd c1 = s.q_r(), c2 = s.q_r();
  c1[0] += 0.05;
  c2[1] += 0.05;
  sim::RolloutTrace a, b;
  const SystemState mid = sim::rollout_segment(env, s, s.q_r(), c1, env.dt_a, &a);
  sim::rollout_segment(env, mid, c1, c2, env.dt_a, &b);
  EXPECT_EQ(a.applied_reference.back(), b.applied_reference.front());
  EXPECT_EQ(a.substates.back(), b.substates.front());
}

TEST(RolloutSegment, RejectsNonMultipleDuration) {
  const auto env = sim::make_env("box_push_1d");
  const SystemState s = sim::start_state(env);
  EXPECT_THROW(sim::rollout_segment(env, s, s.q_r(), s.q_r(), 0.5), std::invalid_argument);
}

TEST(RolloutSegment, PushMovesObjectMonotonically) {
  const auto env = sim::make_env("box_push_1d");
  const SystemState s = sim::start_state(env);  // contact gap 0.1 m
  Eigen::VectorXd cmd = s.q_r();
  cmd[0] += 0.2;
  sim::RolloutTrace tr;
  const SystemState n = sim::rollout_segment(env, s, s.q_r(), cmd, env.dt_a, &tr);
  EXPECT_GT(n.q_o()[0], s.q_o()[0]);
  for (std::size_t i = 1; i < tr.substates.size(); ++i) {
    EXPECT_GE(tr.substates[i].q_o()[0], tr.substates[i - 1].q_o()[0] - 1e-12);
  }
}

TEST(RolloutSegment, Deterministic) {
  const auto env = sim::make_env("planar_hand");
  const SystemState s = sim::start_state(env);
  Eigen::VectorXd cmd = s.q_r();
  cmd.array() += 0.1;
  const SystemState a = sim::rollout_segment(env, s, s.q_r(), cmd, env.dt_a);
  const SystemState b = sim::rollout_segment(env, s, s.q_r(), cmd, env.dt_a);
  EXPECT_EQ(a, b);
}

TEST(RolloutSegment, StateBoundsClampPositionsAndZeroVelocity) {
  const auto env = sim::make_env("box_push_1d");
  SystemState s = sim::start_state(env);
  Eigen::VectorXd cmd(1);
  cmd << -5.0;  // far beyond the lower joint bound
  const SystemState n = sim::rollout_segment(env, s, s.q_r(), cmd, env.dt_a);
  EXPECT_GE(n.q_r()[0], env.state_min[0]);
  for (int i = 0; i < n.size(); ++i) {
    EXPECT_GE(n.flat()[i], env.state_min[i]);
    EXPECT_LE(n.flat()[i], env.state_max[i]);
  }
}

TEST(Proximity, BoxPush1DFaceDistance) {
  const auto env = sim::make_env("box_push_1d");
  for (double xr : {-0.45, -0.3, -0.25, -0.2}) {
    const SystemState s = state_of(env, {xr, 0.0, 0.0, 0.0});
    const double expected = std::max(0.0, std::abs(0.0 - xr) - 0.2);
    EXPECT_NEAR(sim::proximity(env, s).d[0], expected, 1e-12);
  }
}

TEST(Proximity, NonNegativeAndTranslationInvariant) {
  const auto env = sim::make_env("box_push_2d");
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    SystemState s = sim::sample_feasible_state(env, rng);
    const Eigen::VectorXd d = sim::proximity(env, s).d;
    EXPECT_GE(d.minCoeff(), 0.0);
    SystemState t = s;
    t.q_r()[0] += 0.05;
    t.q_o()[0] += 0.05;
    t.q_r()[1] -= 0.03;
    t.q_o()[1] -= 0.03;
    EXPECT_NEAR((sim::proximity(env, t).d - d).norm(), 0.0, 1e-12);
  }
}

TEST(Penetration, Conventions) {
  const auto env = sim::make_env("box_push_1d");
  EXPECT_FALSE(sim::is_penetrating(env, state_of(env, {-0.5, 0.0, 0.5, 0.0})));
  EXPECT_TRUE(sim::is_penetrating(env, state_of(env, {0.0, 0.0, 0.0, 0.0})));
  EXPECT_FALSE(sim::is_penetrating(env, state_of(env, {-0.2, 0.0, 0.0, 0.0})));
}

TEST(SampleFeasible, CollapsedBoundsAndExhaustion) {
  auto env = sim::make_env("box_push_1d");
  std::mt19937_64 rng(1);
  const Eigen::VectorXd p = sim::start_state(env).flat();
  const SystemState s = sim::sample_feasible_in(env, p, p, rng);
  EXPECT_EQ(s.flat(), p);
  Eigen::VectorXd bad = p;
  bad[0] = 0.0;  // pusher centred on the object
  bad[2] = 0.0;
  EXPECT_THROW(sim::sample_feasible_in(env, bad, bad, rng), SamplingExhausted);
}

TEST(SampleFeasible, UniformMeanWithinThreeSigma) {
  const auto env = sim::make_env("box_push_2d");
  std::mt19937_64 rng(11);
  const int n = 10000;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(env.n_s());
  for (int i = 0; i < n; ++i) sum += sim::sample_feasible_state(env, rng).flat();
  const Eigen::VectorXd mean = sum / n;
  // Velocities are unaffected by the penetration rejection.
  for (int i : {2, 3, 6, 7}) {
    const double width = env.state_max[i] - env.state_min[i];
    const double sigma = width / std::sqrt(12.0 * n);
    EXPECT_NEAR(mean[i], 0.5 * (env.state_max[i] + env.state_min[i]), 3.0 * sigma) << i;
  }
}

TEST(ControlJacobian, ZeroObjectBlockWithoutContact) {
  const auto env = free_env();
  SystemState s = sim::start_state(env);
  s.q_r() << -0.4, 0.4;
  const auto jac = sim::control_jacobian(env, s, s.q_r(), Eigen::VectorXd::Zero(2));
  EXPECT_NEAR(jac.object.norm(), 0.0, 1e-12);
  // Commanding a joint moves that joint forward.
  for (int j = 0; j < env.n_r; ++j) {
    EXPECT_GT(jac.full(j, j), 0.5);
    EXPECT_GT(jac.full(j, j), std::abs(jac.full(1 - j, j)));
  }
}

TEST(ControlJacobian, RichardsonConvergence) {
  const auto env = sim::make_env("box_push_1d");
  SystemState s = sim::start_state(env);
  Eigen::VectorXd a0(1);
  a0 << 0.05;
  const auto j1 = sim::control_jacobian(env, s, s.q_r(), a0, 1e-3);
  const auto j2 = sim::control_jacobian(env, s, s.q_r(), a0, 5e-4);
  const auto j3 = sim::control_jacobian(env, s, s.q_r(), a0, 2.5e-4);
  const double d12 = (j1.full - j2.full).norm();
  const double d23 = (j2.full - j3.full).norm();
  // Second-order scheme: successive differences shrink by about four.
  EXPECT_LE(d23, 0.5 * d12 + 1e-9);
}

TEST(ControlJacobian, DirectionalDerivativeConsistency) {
  const auto env = free_env();
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  SystemState s = sim::start_state(env);
  s.q_r() << -0.4, 0.4;
  const Eigen::VectorXd a0 = Eigen::VectorXd::Zero(2);
  const auto jac = sim::control_jacobian(env, s, s.q_r(), a0);
  for (int k = 0; k < 10; ++k) {
    Eigen::VectorXd dir(2);
    dir << g(rng), g(rng);
    dir.normalize();
    const double h = 1e-4;
    const auto fp = sim::rollout_segment(env, s, s.q_r(), s.q_r() + a0 + h * dir, env.dt_a).flat();
    const auto fm = sim::rollout_segment(env, s, s.q_r(), s.q_r() + a0 - h * dir, env.dt_a).flat();
    const Eigen::VectorXd fd = (fp - fm) / (2 * h);
    const Eigen::VectorXd lin = jac.full * dir;
    EXPECT_LE((fd - lin).norm(), 5e-2 * lin.norm());
  }
}

TEST(Geometry, BoxSdf) {
  const Eigen::Vector2d half(0.1, 0.2);
  EXPECT_NEAR(sim::box_sdf(Eigen::Vector2d(0.3, 0.0), half), 0.2, 1e-12);
  EXPECT_NEAR(sim::box_sdf(Eigen::Vector2d(0.0, 0.0), half), -0.1, 1e-12);
  EXPECT_NEAR(sim::box_sdf(Eigen::Vector2d(0.4, 0.6), half), 0.5, 1e-12);
}

TEST(Geometry, AabbGapAndPenetration) {
  const Eigen::Vector2d h(0.1, 0.1);
  EXPECT_NEAR(sim::aabb_gap({0, 0}, h, {0.5, 0}, h), 0.3, 1e-12);
  Eigen::Vector2d n;
  EXPECT_NEAR(sim::aabb_penetration({0, 0}, h, {0.15, 0}, h, &n), 0.05, 1e-12);
  EXPECT_NEAR(std::abs(n[0]), 1.0, 1e-12);
}

TEST(Geometry, PoseRoundTrip) {
  sim::Pose2 p{Eigen::Vector2d(0.3, -0.1), 0.7};
  const Eigen::Vector2d x(0.2, 0.5);
  EXPECT_NEAR((p.to_local(p.to_world(x)) - x).norm(), 0.0, 1e-14);
}

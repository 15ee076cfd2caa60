#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "../common/oracles.hpp"
#include "manip/error.hpp"
#include "manip/planner/actions.hpp"
#include "manip/planner/export.hpp"
#include "manip/planner/pareto.hpp"
#include "manip/planner/rewards.hpp"
#include "manip/planner/search.hpp"

using namespace manip;
using namespace manip::planner;
using sim::SystemState;

namespace {

struct Fixture {
  sim::EnvModel env;
  PlannerParams params;
  SystemState start, goal;
  explicit Fixture(const char* task) : env(sim::make_env(task)), params(default_params(env)) {
    start = sim::start_state(env);
    goal = sim::task_goal(env);
  }
};

ActionCommand command(const Eigen::VectorXd& dir, const Eigen::VectorXd& mag, int k, ActionType t) {
  ActionCommand c;
  c.type = t;
  c.direction = dir;
  c.magnitude = mag;
  c.k = k;
  return c;
}

}  // namespace

TEST(Params, Defaults) {
  Fixture f("box_push_1d");
  EXPECT_EQ(f.params.n_g, 30);
  EXPECT_EQ(f.params.n_i, 30);
  EXPECT_DOUBLE_EQ(f.params.b_g, 0.0);
  EXPECT_DOUBLE_EQ(f.params.beta_min, 0.2);
  EXPECT_DOUBLE_EQ(f.params.beta_max, 1.2);
  EXPECT_EQ(f.params.n_e_max, 10);
  EXPECT_EQ(f.params.k_max, 3);
  EXPECT_DOUBLE_EQ(f.params.m_min, 1e-3);
  EXPECT_NO_THROW(f.params.validate(f.env));
}

TEST(Params, ValidationAndActionMix) {
  Fixture f("box_push_2d");
  PlannerParams p = f.params;
  p.b_g = 1.5;
  EXPECT_THROW(p.validate(f.env), ConfigError);
  const auto mix = parse_action_mix("rg");
  EXPECT_GT(mix[static_cast<int>(ActionType::kRandom)], 0.0);
  EXPECT_GT(mix[static_cast<int>(ActionType::kGoalDirected)], 0.0);
  EXPECT_EQ(mix[static_cast<int>(ActionType::kProximity)], 0.0);
  EXPECT_THROW(parse_action_mix("xz"), ConfigError);
}

TEST(Rewards, PerfectStateIsZero) {
  Fixture f("box_push_1d");
  const Rewards r = node_rewards(f.goal, f.goal, Eigen::VectorXd::Zero(1), 1e-4, f.params);
  EXPECT_EQ(r.r_d, 0.0);
  EXPECT_EQ(r.r_p, 0.0);
  EXPECT_EQ(r.r_m, 0.0);
  EXPECT_EQ(r.total, 0.0);
}

TEST(Rewards, LogUnitAndScalarNorm) {
  EXPECT_NEAR(reachability_reward(1e-3 * std::exp(1.0), 1.0, 1e-3), -1.0, 1e-12);
  EXPECT_EQ(reachability_reward(1e-4, 1.0, 1e-3), 0.0);
  Fixture f("box_push_1d");
  SystemState s = f.goal;
  s.q_o()[0] -= 2.0;
  EXPECT_NEAR(distance_reward(s, f.goal, f.params.q_d), -2.0, 1e-12);
  EXPECT_NEAR(proximity_reward(Eigen::Vector2d(3, 4), Eigen::Vector2d(1, 1)), -5.0, 1e-12);
}

TEST(Rewards, TotalIsExactSumOnRandomNodes) {
  Fixture f("box_push_2d");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(1e-5, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const SystemState s = sim::sample_feasible_state(f.env, rng);
    const Eigen::VectorXd d = sim::proximity(f.env, s).d;
    const Rewards r = node_rewards(s, f.goal, d, u(rng), f.params);
    EXPECT_EQ(r.total, r.r_d + r.r_p + r.r_m);
  }
}

TEST(Reachability, ClosedFormCases) {
  const Eigen::Vector2d ds(0.3, -0.4);
  EXPECT_EQ(reachability(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d::Zero(), 1.0), 0.0);
  EXPECT_NEAR(reachability(Eigen::MatrixXd::Zero(2, 3), ds, 1e-4), ds.squaredNorm() / 1e-4, 1e-6);
  EXPECT_NEAR(reachability(Eigen::MatrixXd::Identity(2, 2), ds, 1.0), ds.squaredNorm() / 2.0, 1e-14);
}

TEST(Pareto, PmfProperties) {
  EXPECT_DOUBLE_EQ(pareto_rank_pmf(2, 1.0, 1), 1.0);
  for (auto [n, beta] : {std::pair{10, 0.2}, std::pair{10, 1.2}, std::pair{100, 0.5}}) {
    double sum = 0.0;
    for (int i = 1; i <= n; ++i) {
      const double p = pareto_rank_pmf(n, beta, i);
      EXPECT_NEAR(p, oracle::pareto_closed_form(n, beta, i), 1e-15);
      if (i > 1) {
        EXPECT_LE(p, pareto_rank_pmf(n, beta, i - 1));
      }
      sum += p;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(Pareto, SamplerMatchesPmf) {
  std::mt19937_64 rng(7);
  for (auto [n, beta] : {std::pair{10, 0.2}, std::pair{10, 1.2}, std::pair{100, 0.5}}) {
    const auto freq = oracle::rank_frequencies(n, 100000, [&] { return sample_pareto_rank(n, beta, rng); });
    double l1 = 0.0;
    for (int i = 1; i <= n; ++i) l1 += std::abs(freq[i - 1] - oracle::pareto_closed_form(n, beta, i));
    EXPECT_LE(l1, 0.02) << n << " " << beta;
  }
}

TEST(SelectNode, RootOnlyAndGreedyLimit) {
  Fixture f("box_push_1d");
  SearchTree tree = make_tree(f.env, f.start, f.goal, f.params);
  std::mt19937_64 rng(2);
  EXPECT_EQ(select_node(tree, 1.0, rng), 0);
  Eigen::VectorXd dir(1), mag(1);
  dir << 1.0;
  for (double m : {0.05, 0.1, 0.15}) {
    mag << m;
    extend(tree, tree.size() - 1, command(dir, mag, 1, ActionType::kRandom), f.env, f.params);
  }
  int hits = 0;
  for (int i = 0; i < 1000; ++i) hits += select_node(tree, 60.0, rng) == tree.best_index();
  EXPECT_EQ(hits, 1000);
}

TEST(SelectNode, RankOneFrequency) {
  Fixture f("box_push_1d");
  SearchTree tree = make_tree(f.env, f.start, f.goal, f.params);
  Eigen::VectorXd dir(1), mag(1);
  dir << 1.0;
  std::mt19937_64 rng(3);
  for (int i = 0; i < 9; ++i) {
    mag << 0.02 * (i + 1);
    extend(tree, 0, command(dir, mag, 1, ActionType::kRandom), f.env, f.params);
  }
  ASSERT_EQ(tree.size(), 10);
  int hits = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) hits += select_node(tree, 1.2, rng) == tree.best_index();
  const double expected = (1 - std::pow(2.0, -1.2)) / (1 - std::pow(10.0, -1.2));
  EXPECT_NEAR(hits / double(draws), expected, 0.01);
}

TEST(SampleGoal, Bias) {
  Fixture f("box_push_2d");
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(sample_goal(f.goal, 1.0, f.env, rng), f.goal);
  for (int i = 0; i < 200; ++i) {
    const SystemState g = sample_goal(f.goal, 0.0, f.env, rng);
    EXPECT_FALSE(g == f.goal);
    EXPECT_FALSE(sim::is_penetrating(f.env, g));
  }
  int hits = 0;
  for (int i = 0; i < 10000; ++i) hits += sample_goal(f.goal, 0.5, f.env, rng) == f.goal;
  EXPECT_NEAR(hits / 10000.0, 0.5, 0.02);
}

TEST(ActionType, FrequenciesFollowPa) {
  Fixture f("box_push_2d");
  std::mt19937_64 rng(5);
  const auto p = f.params.action_probabilities();
  std::array<int, kNumActionTypes> counts{};
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<int>(sample_action_type(f.params, rng))];
  for (int i = 0; i < kNumActionTypes; ++i) EXPECT_NEAR(counts[i] / double(n), p[i], 0.01);
}

TEST(SampleAction, Invariants) {
  Fixture f("planar_hand");
  SearchTree tree = make_tree(f.env, f.start, f.goal, f.params);
  std::mt19937_64 rng(6);
  const Eigen::VectorXd amax = f.env.alpha_max();
  for (int type = 0; type < kNumActionTypes; ++type) {
    for (int i = 0; i < 20; ++i) {
      const ActionCommand c = sample_action(tree, 0, static_cast<ActionType>(type), f.env, f.params, rng);
      EXPECT_NEAR(c.direction.norm(), 1.0, 1e-12);
      EXPECT_GE(c.k, 1);
      EXPECT_LE(c.k, f.params.k_max);
      EXPECT_GE(c.magnitude.minCoeff(), 0.0);
      EXPECT_LE(((c.magnitude - amax).array()).maxCoeff(), 1e-15);
      if (c.type == ActionType::kGoalDirected) {
        EXPECT_EQ(c.magnitude, amax);
      }
      // Continuation at the root has no parent direction.
      EXPECT_NE(c.type, ActionType::kContinuation);
    }
  }
}

TEST(SampleAction, ContinuationRepeatsParentDirection) {
  Fixture f("box_push_2d");
  SearchTree tree = make_tree(f.env, f.start, f.goal, f.params);
  Eigen::VectorXd dir(2), mag(2);
  dir << 0.6, 0.8;
  mag << 0.05, 0.05;
  const int child = extend(tree, 0, command(dir, mag, 1, ActionType::kRandom), f.env, f.params);
  std::mt19937_64 rng(7);
  const ActionCommand c = sample_action(tree, child, ActionType::kContinuation, f.env, f.params, rng);
  EXPECT_EQ(c.type, ActionType::kContinuation);
  EXPECT_NEAR((c.direction - dir).norm(), 0.0, 1e-15);
}

TEST(SampleAction, ProximityMovesTowardObject) {
  Fixture f("box_push_1d");
  SearchTree tree = make_tree(f.env, f.start, f.goal, f.params);
  std::mt19937_64 rng(8);
  const ActionCommand c = sample_action(tree, 0, ActionType::kProximity, f.env, f.params, rng);
  EXPECT_EQ(c.type, ActionType::kProximity);
  EXPECT_GT(c.direction[0], 0.0);
}

TEST(GoalDirected, TrivialInstances) {
  const Eigen::MatrixXd I3 = Eigen::MatrixXd::Identity(3, 3);
  const Eigen::Vector3d f0(0.1, -0.2, 0.3), sg(0.4, 0.1, -0.5);
  const Eigen::VectorXd at_goal = goal_directed_delta(I3, I3, 1e-9 * I3, sg, Eigen::Vector3d::Zero(), sg);
  EXPECT_LE(at_goal.norm(), 1e-9);
  const Eigen::VectorXd full = goal_directed_delta(I3, I3, 1e-9 * I3, f0, Eigen::Vector3d::Zero(), sg);
  EXPECT_NEAR((full - (sg - f0)).norm(), 0.0, 1e-8);
  EXPECT_THROW(goal_directed_delta(I3, I3, -I3, f0, Eigen::Vector3d::Zero(), sg), NumericalError);
}

TEST(GoalDirected, MatchesNumericMinimizerAndIsStationary) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const int ns = 6, na = 3;
    Eigen::MatrixXd b(ns, na), q = Eigen::MatrixXd::Zero(ns, ns), r = 0.1 * Eigen::MatrixXd::Identity(na, na);
    for (int i = 0; i < ns; ++i) {
      for (int j = 0; j < na; ++j) b(i, j) = g(rng);
      q(i, i) = std::abs(g(rng));
    }
    Eigen::VectorXd f0(ns), sg(ns), a0(na);
    for (int i = 0; i < ns; ++i) f0[i] = g(rng), sg[i] = g(rng);
    for (int i = 0; i < na; ++i) a0[i] = g(rng);
    const Eigen::VectorXd da = goal_directed_delta(b, q, r, f0, a0, sg);
    const Eigen::VectorXd num = oracle::numeric_minimize(
        [&](const Eigen::VectorXd& x) { return oracle::eq10_objective(b, q, r, f0, a0, sg, x); },
        Eigen::VectorXd::Zero(na));
    EXPECT_LE((num - da).norm(), 1e-6 * std::max(1.0, da.norm()));
    const Eigen::VectorXd grad = b.transpose() * q * (f0 + b * da - sg) + r * (a0 + da);
    const double scale = (b.transpose() * q * b + r).norm() * std::max(1.0, da.norm());
    EXPECT_LE(grad.norm(), 1e-8 * scale);
  }
}

TEST(Extend, ZeroMagnitudeKeepsStaticState) {
  Fixture f("box_push_1d");
  SearchTree tree = make_tree(f.env, f.start, f.goal, f.params);
  Eigen::VectorXd dir(1), mag(1);
  dir << 1.0;
  mag << 0.0;
  const int c = extend(tree, 0, command(dir, mag, 1, ActionType::kRandom), f.env, f.params);
  ASSERT_EQ(c, 1);
  EXPECT_EQ(tree.size(), 2);
  EXPECT_EQ(tree.node(c).parent, 0);
  EXPECT_LT((tree.node(c).state.flat() - f.start.flat()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Extend, StepMultipleExpandsIntoBaseSteps) {
  Fixture f("box_push_2d");
  SearchTree tree = make_tree(f.env, f.start, f.goal, f.params);
  Eigen::VectorXd dir(2), mag(2);
  dir << -1.0, 0.0;
  mag << 0.1, 0.1;
  const int c = extend(tree, 0, command(dir, mag, 3, ActionType::kRandom), f.env, f.params);
  EXPECT_EQ(tree.node(c).base_commands.size(), 3u);
  EXPECT_EQ(tree.node(c).waypoints.size(), 2u);
  const Trajectory t = path_to(tree, c);
  EXPECT_EQ(t.steps(), 3);
  EXPECT_LE(oracle::replay_error(f.env, t.initial_command, t.states, t.commands), 1e-10);
}

TEST(SearchParams, Alg2Updates) {
  PlannerParams p;
  SearchParamsState st{0.5, 10.0};
  const auto better = update_search_params(st, true, 1, p);
  EXPECT_DOUBLE_EQ(better.beta, p.beta_max);
  EXPECT_NEAR(better.n_e, 9.6, 1e-12);
  const auto floor = update_search_params(SearchParamsState{p.beta_min, 3.0}, false, 0, p);
  EXPECT_DOUBLE_EQ(floor.beta, p.beta_min);
  SearchParamsState cur{p.beta_max, 1.0};
  double prev_ne = cur.n_e;
  for (int i = 0; i < 1000; ++i) {
    cur = update_search_params(cur, false, 0, p);
    EXPECT_GE(cur.n_e, prev_ne);
    prev_ne = cur.n_e;
  }
  EXPECT_NEAR(cur.beta, p.beta_min, 1e-6);
  EXPECT_NEAR(cur.n_e, p.n_e_max, 0.01);
  EXPECT_EQ((SearchParamsState{1.0, 2.4}.horizon()), 2);
  EXPECT_EQ((SearchParamsState{1.0, 0.2}.horizon()), 1);
}

TEST(Plan, RootOnlyWithoutIterations) {
  Fixture f("box_push_1d");
  f.params.n_g = 1;
  f.params.n_i = 0;
  std::mt19937_64 rng(1);
  const SearchTree tree = plan(f.env, f.start, f.goal, f.params, rng);
  EXPECT_EQ(tree.size(), 1);
  EXPECT_EQ(best_trajectory(tree, f.goal, f.params).steps(), 0);
  EXPECT_EQ(search_progress(tree, f.start, f.goal, f.params.q_d), 0.0);
}

class PlanProperties : public ::testing::TestWithParam<const char*> {};

TEST_P(PlanProperties, TreeInvariants) {
  Fixture f(GetParam());
  f.params.n_g = 5;
  f.params.n_i = 20;
  std::mt19937_64 rng(12);
  const SearchTree tree = plan(f.env, f.start, f.goal, f.params, rng);
  EXPECT_GE(tree.size(), 1 + f.params.n_g * f.params.n_i - static_cast<int>(tree.failed_extensions));
  double best_seen = -std::numeric_limits<double>::infinity();
  for (int i = 1; i < tree.size(); ++i) {
    const TreeNode& n = tree.node(i);
    EXPECT_LT(n.parent, i);
    EXPECT_NEAR(n.action.direction.norm(), 1.0, 1e-12);
    EXPECT_GE(n.action.k, 1);
    EXPECT_LE(n.action.k, f.params.k_max);
    EXPECT_EQ(n.rewards.total, n.rewards.r_d + n.rewards.r_p + n.rewards.r_m);
  }
  for (int i = 0; i < tree.size(); ++i) best_seen = std::max(best_seen, tree.node(i).rewards.total);
  EXPECT_EQ(tree.node(tree.best_index()).rewards.total, best_seen);
  for (double p : tree.progress) {
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
  }
  for (std::size_t i = 1; i < tree.progress.size(); ++i) EXPECT_GE(tree.progress[i], tree.progress[i - 1]);
  const Trajectory t = best_trajectory(tree, f.goal, f.params);
  EXPECT_LE(oracle::replay_error(f.env, t.initial_command, t.states, t.commands), 1e-10);
  EXPECT_EQ(t.node, closest_node(tree, f.goal, f.params.q_d));
}

TEST_P(PlanProperties, Deterministic) {
  Fixture f(GetParam());
  f.params.n_g = 3;
  f.params.n_i = 10;
  std::mt19937_64 r1(5), r2(5);
  const SearchTree a = plan(f.env, f.start, f.goal, f.params, r1);
  const SearchTree b = plan(f.env, f.start, f.goal, f.params, r2);
  std::ostringstream sa, sb;
  write_tree(sa, a);
  write_tree(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
}

INSTANTIATE_TEST_SUITE_P(Tasks, PlanProperties, ::testing::Values("box_push_1d", "box_push_2d", "planar_hand"));

TEST(RecomputeRewards, IdempotentAndBestIsMax) {
  Fixture f("box_push_2d");
  f.params.n_g = 4;
  f.params.n_i = 25;
  std::mt19937_64 rng(13);
  SearchTree tree = plan(f.env, f.start, f.goal, f.params, rng);
  recompute_rewards(tree, f.goal, f.params);
  std::vector<double> before;
  for (const auto& n : tree.nodes()) before.push_back(n.rewards.total);
  recompute_rewards(tree, f.goal, f.params);
  for (int i = 0; i < tree.size(); ++i) EXPECT_EQ(tree.node(i).rewards.total, before[static_cast<std::size_t>(i)]);
  const SystemState other = sim::sample_feasible_state(f.env, rng);
  recompute_rewards(tree, other, f.params);
  int best = 0;
  for (int i = 0; i < tree.size(); ++i) {
    const auto& r = tree.node(i).rewards;
    EXPECT_EQ(r.total, r.r_d + r.r_p + r.r_m);
    if (r.total > tree.node(best).rewards.total) best = i;
  }
  EXPECT_EQ(tree.best_index(), best);
}

TEST(SearchProgress, Arithmetic) {
  Fixture f("box_push_1d");
  const SearchTree tree = make_tree(f.env, f.start, f.goal, f.params);
  EXPECT_EQ(search_progress(tree, f.start, f.goal, f.params.q_d), 0.0);
  // Root at r_d = -0.5 seen from a start at r_d = -2.
  SystemState s0 = f.start;
  SystemState near = f.goal;
  near.q_o()[0] -= 0.5;
  s0.q_o()[0] = f.goal.q_o()[0] - 2.0;
  SearchTree t2 = make_tree(f.env, near, f.goal, f.params);
  EXPECT_NEAR(search_progress(t2, s0, f.goal, f.params.q_d), 0.75, 1e-12);
  SearchTree at_goal = make_tree(f.env, f.goal, f.goal, f.params);
  EXPECT_EQ(search_progress(at_goal, f.start, f.goal, f.params.q_d), 1.0);
  EXPECT_EQ(search_progress(at_goal, f.goal, f.goal, f.params.q_d), 1.0);
}

TEST(Export, TreeAndTrajectoryLayouts) {
  Fixture f("box_push_1d");
  f.params.n_g = 2;
  f.params.n_i = 5;
  std::mt19937_64 rng(1);
  const SearchTree tree = plan(f.env, f.start, f.goal, f.params, rng);
  std::ostringstream out;
  write_tree(out, tree);
  std::istringstream in(out.str());
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, tree.size() + 1);
  const Trajectory t = best_trajectory(tree, f.goal, f.params);
  std::ostringstream tout;
  write_trajectory(tout, t);
  std::istringstream tin(tout.str());
  lines = 0;
  while (std::getline(tin, line)) ++lines;
  EXPECT_EQ(lines, t.steps() + 2);
}

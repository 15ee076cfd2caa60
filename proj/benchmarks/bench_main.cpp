#include <benchmark/benchmark.h>

#include "manip/learner/agent.hpp"
#include "manip/learner/replay_buffer.hpp"
#include "manip/nn/mlp.hpp"
#include "manip/planner/search.hpp"
#include "manip/sim/dynamics.hpp"

using namespace manip;

namespace {

const char* kTasks[] = {"box_push_1d", "box_push_2d", "planar_hand"};

void BM_Substep(benchmark::State& state) {
  const sim::EnvModel env = sim::make_env(kTasks[state.range(0)]);
  sim::SystemState s = sim::start_state(env);
  const Eigen::VectorXd ref = s.q_r();
  for (auto _ : state) {
    s = sim::substep(env, s, ref);
    benchmark::DoNotOptimize(s.flat().data());
  }
  state.SetLabel(env.name);
}
BENCHMARK(BM_Substep)->DenseRange(0, 2);

void BM_Plan(benchmark::State& state) {
  const sim::EnvModel env = sim::make_env(kTasks[state.range(0)]);
  planner::PlannerParams p = planner::default_params(env);
  p.max_nodes = 300;
  for (auto _ : state) {
    planner::Rng rng(1);
    const planner::SearchTree t = planner::plan(env, sim::start_state(env), sim::task_goal(env), p, rng);
    benchmark::DoNotOptimize(t.size());
  }
  state.SetLabel(env.name);
  state.counters["nodes_per_s"] = benchmark::Counter(300.0 * static_cast<double>(state.iterations()),
                                                     benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Plan)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_MlpForwardBackward(benchmark::State& state) {
  const int width = static_cast<int>(state.range(0));
  nn::Rng rng(2);
  const nn::Mlp net(nn::make_layer_sizes(28, width, 4, 1), nn::Activation::kIdentity, rng);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(28, 256);
  const Eigen::MatrixXd up = Eigen::MatrixXd::Ones(1, 256);
  for (auto _ : state) {
    nn::Mlp::Cache c;
    net.forward(x, c);
    const nn::Gradients g = net.backward(c, up);
    benchmark::DoNotOptimize(g.weights.front().data());
  }
}
BENCHMARK(BM_MlpForwardBackward)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_DdpgUpdate(benchmark::State& state) {
  const sim::EnvModel env = sim::make_env("box_push_2d");
  learner::TrainConfig cfg = learner::default_train_config(env, planner::default_params(env));
  cfg.hidden_width = static_cast<int>(state.range(0));
  learner::Rng rng(3);
  learner::NetworkBundle nets = learner::make_networks(env, cfg, rng);
  learner::ReplayBuffer buf(100);
  for (int i = 0; i < 10; ++i) {
    const auto [s0, g] = learner::sample_start_goal(env, rng);
    buf.add(learner::rollout_policy(env, nets, cfg, s0, g, true, rng).episode);
  }
  for (auto _ : state) benchmark::DoNotOptimize(learner::ddpg_update(buf, nets, cfg, env, rng).critic_loss);
}
BENCHMARK(BM_DdpgUpdate)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

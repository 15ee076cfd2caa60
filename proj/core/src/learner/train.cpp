#include "manip/learner/train.hpp"

#include <sstream>
#include <stdexcept>

#include "manip/learner/pretrain.hpp"
#include "manip/sim/dynamics.hpp"

namespace manip::learner {

double demo_probability(const TrainConfig& cfg, int epoch, double success_rate) {
  switch (cfg.demo_mode) {
    case DemoMode::kFixedRatio: return cfg.b_p;
    case DemoMode::kDecaying: return cfg.b_p * (1.0 - success_rate);
    case DemoMode::kInitialOnly: return epoch == 1 ? cfg.b_p : 0.0;
    case DemoMode::kNone: return 0.0;
  }
  return 0.0;
}

namespace {

void update_normalizer(NetworkBundle& nets, const Episode& ep, const TrainConfig& cfg, Rng& rng) {
  const int n = ep.steps();
  const int ns = static_cast<int>(ep.start.size());
  Eigen::MatrixXd obs(2 * ns, n);
  Eigen::VectorXd g;
  for (int t = 0; t < n; ++t) {
    g = ep.goal;
    her_goal(ep, t, cfg.her_ratio, rng, &g);
    obs.col(t) << ep.states[static_cast<std::size_t>(t)], g;
  }
  nets.normalizer.update(obs);
}

}  // namespace

CycleStats collect_rollout(const sim::EnvModel& env, NetworkBundle& nets, const DemoSet* demos, const TrainConfig& cfg,
                           int epoch, double success_rate, ReplayBuffer& buffer, Rng& rng) {
  CycleStats st;
  const double p_demo = (demos && !demos->empty()) ? demo_probability(cfg, epoch, success_rate) : 0.0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Episode ep;
  if (unit(rng) < p_demo) {
    const sim::SystemState goal = sim::sample_goal_state(env, rng);
    ep = demo_episode(*demos, goal, cfg.n_steps);
    ++st.demo_episodes;
  } else {
    const auto [s0, goal] = sample_start_goal(env, rng);
    RolloutResult r = rollout_policy(env, nets, cfg, s0, goal, true, rng);
    st.reward_sum += r.total_reward;
    st.il_choices += r.il_choices;
    st.rl_choices += r.rl_choices;
    ep = std::move(r.episode);
    ++st.policy_episodes;
  }
  update_normalizer(nets, ep, cfg, rng);
  buffer.add(std::move(ep));
  return st;
}

CycleStats collect_cycle(const sim::EnvModel& env, NetworkBundle& nets, const DemoSet* demos, const TrainConfig& cfg,
                         int epoch, double success_rate, ReplayBuffer& buffer, Rng& rng) {
  CycleStats st;
  for (int i = 0; i < cfg.n_rollouts; ++i) {
    const CycleStats r = collect_rollout(env, nets, demos, cfg, epoch, success_rate, buffer, rng);
    st.demo_episodes += r.demo_episodes;
    st.policy_episodes += r.policy_episodes;
    st.reward_sum += r.reward_sum;
    st.il_choices += r.il_choices;
    st.rl_choices += r.rl_choices;
  }
  return st;
}

TrainResult train(const sim::EnvModel& env, const DemoSet* demos, const TrainConfig& cfg, unsigned long seed) {
  cfg.validate(env);
  Rng rng(seed);
  TrainResult out{make_networks(env, cfg, rng), {}, false};
  NetworkBundle& nets = out.nets;
  if (cfg.pretrain != PretrainMode::kNone && cfg.n_epochs > 0) {
    if (!demos || demos->empty()) throw std::invalid_argument("train: pre-training requires demonstrations");
    const std::vector<Episode> good = collect_pretrain_demos(*demos, env, cfg, rng);
    pretrain(good, nets, cfg, env, rng);
  }
  ReplayBuffer buffer(static_cast<std::size_t>(cfg.buffer_episodes));
  double success = 0.0;
  long steps = 0;
  for (int epoch = 1; epoch <= cfg.n_epochs; ++epoch) {
    EpochMetrics m;
    m.epoch = epoch;
    double loss_sum = 0.0, obj_sum = 0.0;
    long updates = 0;
    for (int c = 0; c < cfg.n_cycles; ++c) {
      for (int ro = 0; ro < cfg.n_rollouts; ++ro) {
        try {
          const CycleStats cs = collect_rollout(env, nets, demos, cfg, epoch, success, buffer, rng);
          steps += static_cast<long>(cs.demo_episodes + cs.policy_episodes) * cfg.n_steps;
          m.il_choices += cs.il_choices;
          m.rl_choices += cs.rl_choices;
          if (buffer.transitions() < cfg.n_batch) continue;
          for (int u = 0; u < cfg.n_episode; ++u) {
            const UpdateStats us = ddpg_update(buffer, nets, cfg, env, rng);
            loss_sum += us.critic_loss;
            obj_sum += us.actor_objective;
            ++updates;
          }
          update_targets(nets, cfg.tau);
        } catch (const std::exception& e) {
          std::ostringstream msg;
          msg << "train: epoch " << epoch << ", cycle " << c + 1 << ", rollout " << ro + 1 << ": " << e.what();
          throw std::runtime_error(msg.str());
        }
      }
    }
    const EvalResult ev = evaluate(nets, env, cfg, rng);
    success = ev.success_rate;
    m.env_steps = steps;
    m.success_rate = ev.success_rate;
    m.mean_episode_reward = ev.mean_reward;
    m.demo_fraction = buffer.demo_fraction();
    if (updates > 0) {
      m.critic_loss = loss_sum / updates;
      m.actor_objective = obj_sum / updates;
    }
    out.metrics.push_back(m);
    const bool solved = cfg.stop_on_success && success >= 1.0;
    const bool capped = cfg.max_env_steps > 0 && steps >= cfg.max_env_steps;
    if (solved || capped) {
      out.stopped_early = epoch < cfg.n_epochs;
      break;
    }
  }
  return out;
}

}  // namespace manip::learner

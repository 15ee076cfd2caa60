#include "manip/learner/pretrain.hpp"

#include <stdexcept>

#include "manip/error.hpp"
#include "manip/sim/dynamics.hpp"

namespace manip::learner {

std::vector<double> monte_carlo_values(const Episode& ep, double gamma, double epsilon, const Eigen::VectorXd& q_d) {
  const std::vector<Transition> trs = episode_transitions(ep, epsilon, q_d);
  std::vector<double> v(trs.size(), 0.0);
  double next = 0.0;
  for (std::size_t i = trs.size(); i-- > 0;) {
    // A success transition is absorbing.
    v[i] = trs[i].r == 0.0 ? 0.0 : trs[i].r + gamma * next;
    next = v[i];
  }
  return v;
}

namespace {

bool reaches_goal(const Episode& ep, double epsilon, const Eigen::VectorXd& q_d) {
  for (const Transition& tr : episode_transitions(ep, epsilon, q_d)) {
    if (tr.r == 0.0) return true;
  }
  return false;
}

}  // namespace

std::vector<Episode> collect_pretrain_demos(const DemoSet& demos, const sim::EnvModel& env, const TrainConfig& cfg,
                                            Rng& rng, int* rejected) {
  std::vector<Episode> out;
  int bad = 0;
  for (int i = 0; i < cfg.pretrain_demos; ++i) {
    const sim::SystemState goal = sim::sample_goal_state(env, rng);
    Episode ep = demo_episode(demos, goal, cfg.n_steps);
    if (reaches_goal(ep, cfg.epsilon, cfg.q_d)) {
      out.push_back(std::move(ep));
    } else {
      ++bad;
    }
  }
  if (rejected) *rejected = bad;
  return out;
}

PretrainStats pretrain(const std::vector<Episode>& demos, NetworkBundle& nets, const TrainConfig& cfg,
                       const sim::EnvModel& env, Rng& rng) {
  if (demos.empty()) throw std::invalid_argument("pretrain: no goal-reaching demonstrations");
  PretrainStats st;
  st.demos_used = static_cast<int>(demos.size());

  struct Sample {
    Eigen::VectorXd s, g, a;
    double v;
  };
  std::vector<Sample> data;
  for (const Episode& ep : demos) {
    const std::vector<double> v = monte_carlo_values(ep, cfg.gamma, cfg.epsilon, cfg.q_d);
    for (int t = 0; t < ep.steps(); ++t) {
      const auto i = static_cast<std::size_t>(t);
      data.push_back({ep.states[i], ep.goal, ep.actions[i], v[i]});
    }
    Eigen::MatrixXd obs(2 * env.n_s(), ep.steps());
    for (int t = 0; t < ep.steps(); ++t) {
      obs.col(t) << ep.states[static_cast<std::size_t>(t)], ep.goal;
    }
    nets.normalizer.update(obs);
  }

  const int ns = env.n_s();
  const int na = env.n_r;
  const int bsz = cfg.n_batch;
  nn::Mlp policy = nets.actor;
  nn::Adam policy_opt(policy, nn::AdamConfig{cfg.lr_actor});
  const bool fit_value = cfg.pretrain == PretrainMode::kPolicyValue;
  std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
  Eigen::MatrixXd s(ns, bsz), g(ns, bsz), a(na, bsz);
  Eigen::RowVectorXd v(bsz);
  for (int it = 0; it < cfg.pretrain_updates; ++it) {
    for (int j = 0; j < bsz; ++j) {
      const Sample& d = data[pick(rng)];
      s.col(j) = d.s;
      g.col(j) = d.g;
      a.col(j) = d.a;
      v[j] = d.v;
    }
    const Eigen::MatrixXd obs = observation_batch(nets, s, g);
    nn::Mlp::Cache pc;
    const Eigen::MatrixXd err = policy.forward(obs, pc) - a;
    st.policy_loss = err.squaredNorm() / bsz;
    policy_opt.step(policy, policy.backward(pc, (2.0 / bsz) * err));
    if (fit_value) {
      Eigen::MatrixXd x(obs.rows() + na, bsz);
      x.topRows(obs.rows()) = obs;
      x.bottomRows(na) = a;
      nn::Mlp::Cache cc;
      const Eigen::MatrixXd verr = nets.critic.forward(x, cc) - v;
      st.value_loss = verr.squaredNorm() / bsz;
      nets.critic_opt.step(nets.critic, nets.critic.backward(cc, (2.0 / bsz) * verr));
    }
  }
  nets.il_actor = policy;
  nets.actor = policy;
  nets.actor_target = policy;
  nets.actor_opt = nn::Adam(nets.actor, nn::AdamConfig{cfg.lr_actor});
  if (fit_value) nets.critic_target = nets.critic;
  return st;
}

}  // namespace manip::learner

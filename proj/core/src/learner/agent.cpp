#include "manip/learner/agent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "manip/error.hpp"
#include "manip/learner/reward.hpp"
#include "manip/sim/dynamics.hpp"

namespace manip::learner {

NetworkBundle make_networks(const sim::EnvModel& env, const TrainConfig& cfg, Rng& rng) {
  const int ns = env.n_s();
  const int na = env.n_r;
  const int obs = 2 * ns;
  NetworkBundle b{
      nn::Mlp(nn::make_layer_sizes(obs, cfg.hidden_width, cfg.hidden_layers, na), nn::Activation::kTanh, rng, 1e-2),
      nn::Mlp(nn::make_layer_sizes(obs + na, cfg.hidden_width, cfg.hidden_layers, 1), nn::Activation::kIdentity, rng,
              1e-2),
      {}, {}, {}, {}, nn::Normalizer(obs), std::nullopt, ns, na};
  b.actor_target = b.actor;
  b.critic_target = b.critic;
  b.actor_opt = nn::Adam(b.actor, nn::AdamConfig{cfg.lr_actor});
  b.critic_opt = nn::Adam(b.critic, nn::AdamConfig{cfg.lr_critic});
  return b;
}

Eigen::MatrixXd observation_batch(const NetworkBundle& nets, const Eigen::MatrixXd& s, const Eigen::MatrixXd& g) {
  Eigen::MatrixXd x(s.rows() + g.rows(), s.cols());
  x.topRows(s.rows()) = s;
  x.bottomRows(g.rows()) = g;
  return nets.normalizer.normalize(x);
}

namespace {

Eigen::VectorXd observation(const NetworkBundle& nets, const Eigen::VectorXd& s, const Eigen::VectorXd& g) {
  Eigen::VectorXd x(s.size() + g.size());
  x << s, g;
  return nets.normalizer.normalize_one(x);
}

Eigen::MatrixXd stack(const Eigen::MatrixXd& top, const Eigen::MatrixXd& bottom) {
  Eigen::MatrixXd x(top.rows() + bottom.rows(), top.cols());
  x.topRows(top.rows()) = top;
  x.bottomRows(bottom.rows()) = bottom;
  return x;
}

double critic_value(const NetworkBundle& nets, const Eigen::VectorXd& obs, const Eigen::VectorXd& u) {
  Eigen::VectorXd x(obs.size() + u.size());
  x << obs, u;
  return nets.critic.forward_one(x)[0];
}

Eigen::VectorXd select_on_obs(const NetworkBundle& nets, const Eigen::VectorXd& obs, bool* chose_il) {
  Eigen::VectorXd u_rl = nets.actor.forward_one(obs);
  if (chose_il) *chose_il = false;
  if (!nets.il_actor) return u_rl;
  Eigen::VectorXd u_il = nets.il_actor->forward_one(obs);
  if (critic_value(nets, obs, u_il) > critic_value(nets, obs, u_rl)) {
    if (chose_il) *chose_il = true;
    return u_il;
  }
  return u_rl;
}

}  // namespace

Eigen::VectorXd to_policy_action(const sim::EnvModel& env, const Eigen::VectorXd& s, const Eigen::VectorXd& command) {
  const Eigen::VectorXd alpha = env.alpha_max();
  return ((command - s.head(env.n_r)).array() / alpha.array()).cwiseMax(-1.0).cwiseMin(1.0).matrix();
}

Eigen::VectorXd to_command(const sim::EnvModel& env, const Eigen::VectorXd& s, const Eigen::VectorXd& u) {
  const Eigen::VectorXd target = s.head(env.n_r) + u.cwiseProduct(env.alpha_max());
  return target.cwiseMax(env.joint_min()).cwiseMin(env.joint_max());
}

Eigen::VectorXd deterministic_action(const NetworkBundle& nets, const Eigen::VectorXd& s, const Eigen::VectorXd& g,
                                     bool* chose_il) {
  return select_on_obs(nets, observation(nets, s, g), chose_il);
}

Eigen::VectorXd dual_policy_select(const NetworkBundle& nets, const Eigen::VectorXd& s, const Eigen::VectorXd& g,
                                   bool* chose_il) {
  return select_on_obs(nets, observation(nets, s, g), chose_il);
}

Eigen::VectorXd policy_action(const NetworkBundle& nets, const Eigen::VectorXd& s, const Eigen::VectorXd& g,
                              bool explore, double eta, double sigma, Rng& rng, bool* chose_il) {
  if (chose_il) *chose_il = false;
  if (!explore) return deterministic_action(nets, s, g, chose_il);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) < eta) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXd a(nets.action_dim);
    for (Eigen::Index i = 0; i < a.size(); ++i) a[i] = u(rng);
    return a;
  }
  Eigen::VectorXd a = deterministic_action(nets, s, g, chose_il);
  std::normal_distribution<double> noise(0.0, sigma);
  for (Eigen::Index i = 0; i < a.size(); ++i) a[i] += noise(rng);
  return a.cwiseMax(-1.0).cwiseMin(1.0);
}

Eigen::RowVectorXd critic_targets(const NetworkBundle& nets, const Eigen::MatrixXd& obs_next,
                                  const Eigen::RowVectorXd& rewards, double gamma) {
  Eigen::MatrixXd u_next = nets.actor_target.forward(obs_next);
  Eigen::RowVectorXd q_next = nets.critic_target.forward(stack(obs_next, u_next)).row(0);
  if (nets.il_actor) {
    const Eigen::MatrixXd u_il = nets.il_actor->forward(obs_next);
    const Eigen::RowVectorXd q_il = nets.critic_target.forward(stack(obs_next, u_il)).row(0);
    q_next = q_next.cwiseMax(q_il);
  }
  const double lo = -1.0 / (1.0 - gamma);
  return (rewards + gamma * q_next).cwiseMax(lo).cwiseMin(0.0);
}

UpdateStats ddpg_update(const ReplayBuffer& buffer, NetworkBundle& nets, const TrainConfig& cfg,
                        const sim::EnvModel& env, Rng& rng) {
  if (buffer.transitions() < cfg.n_batch) throw std::logic_error("ddpg_update: not enough transitions");
  const int ns = env.n_s();
  const int na = env.n_r;
  const int bsz = cfg.n_batch;
  Eigen::MatrixXd s(ns, bsz), g(ns, bsz), s_next(ns, bsz), a(na, bsz);
  Eigen::RowVectorXd r(bsz);
  Eigen::VectorXd goal;
  for (int j = 0; j < bsz; ++j) {
    const auto [e, t] = buffer.sample_index(rng);
    const Episode& ep = buffer.episode(e);
    goal = ep.goal;
    her_goal(ep, t, cfg.her_ratio, rng, &goal);
    const Transition tr = make_transition(ep, t, goal, cfg.epsilon, cfg.q_d);
    s.col(j) = tr.s;
    g.col(j) = tr.s_g;
    s_next.col(j) = tr.s_next;
    a.col(j) = tr.a;
    r[j] = tr.r;
  }
  const Eigen::MatrixXd obs = observation_batch(nets, s, g);
  const Eigen::MatrixXd obs_next = observation_batch(nets, s_next, g);
  const Eigen::RowVectorXd y = critic_targets(nets, obs_next, r, cfg.gamma);

  UpdateStats st;
  st.target_min = y.minCoeff();
  st.target_max = y.maxCoeff();

  // Critic regression.
  nn::Mlp::Cache cc;
  const Eigen::MatrixXd q = nets.critic.forward(stack(obs, a), cc);
  const Eigen::MatrixXd err = q - y;
  st.critic_loss = err.squaredNorm() / bsz;
  if (!std::isfinite(st.critic_loss)) {
    std::ostringstream msg;
    msg << "ddpg_update: non-finite critic loss (targets in [" << st.target_min << ", " << st.target_max << "])";
    throw NumericalError(msg.str());
  }
  nets.critic_opt.step(nets.critic, nets.critic.backward(cc, (2.0 / bsz) * err));

  // Actor ascent on Q(s, pi(s)).
  nn::Mlp::Cache ac;
  const Eigen::MatrixXd u = nets.actor.forward(obs, ac);
  nn::Mlp::Cache qc;
  const Eigen::MatrixXd qu = nets.critic.forward(stack(obs, u), qc);
  st.actor_objective = qu.mean();
  Eigen::MatrixXd dx;
  nets.critic.backward(qc, Eigen::MatrixXd::Constant(1, bsz, -1.0 / bsz), &dx);
  Eigen::MatrixXd du = dx.bottomRows(na);
  if (cfg.action_l2 > 0.0) du += (2.0 * cfg.action_l2 / bsz) * u;
  nets.actor_opt.step(nets.actor, nets.actor.backward(ac, du));
  return st;
}

void update_targets(NetworkBundle& nets, double tau) {
  nn::polyak_blend(nets.actor_target, nets.actor, tau);
  nn::polyak_blend(nets.critic_target, nets.critic, tau);
}

std::pair<sim::SystemState, sim::SystemState> sample_start_goal(const sim::EnvModel& env, Rng& rng) {
  const sim::SystemState s0 =
      sim::sample_feasible_in(env, env.start_state - env.start_jitter, env.start_state + env.start_jitter, rng);
  const sim::SystemState goal = sim::sample_goal_state(env, rng);
  return {s0, goal};
}

namespace {

RolloutResult rollout_once(const sim::EnvModel& env, const NetworkBundle& nets, const TrainConfig& cfg,
                           const sim::SystemState& s0, const sim::SystemState& goal, bool explore, Rng& rng) {
  RolloutResult res;
  Episode& ep = res.episode;
  ep.start = s0.flat();
  ep.goal = goal.flat();
  ep.initial_command = s0.q_r();
  ep.states.reserve(static_cast<std::size_t>(cfg.n_steps) + 1);
  ep.states.push_back(s0.flat());
  sim::SystemState s = s0;
  Eigen::VectorXd prev = ep.initial_command;
  for (int t = 0; t < cfg.n_steps; ++t) {
    bool il = false;
    const Eigen::VectorXd u = policy_action(nets, s.flat(), ep.goal, explore, cfg.eta, cfg.sigma, rng, &il);
    il ? ++res.il_choices : ++res.rl_choices;
    const Eigen::VectorXd cmd = to_command(env, s.flat(), u);
    ep.actions.push_back(to_policy_action(env, s.flat(), cmd));
    s = sim::rollout_segment(env, s, prev, cmd, env.dt_a);
    prev = cmd;
    ep.commands.push_back(cmd);
    ep.states.push_back(s.flat());
    const double r = sparse_reward(s.flat(), ep.start, ep.goal, cfg.epsilon, cfg.q_d);
    res.total_reward += r;
    if (r == 0.0) res.success = true;
  }
  return res;
}

}  // namespace

RolloutResult rollout_policy(const sim::EnvModel& env, const NetworkBundle& nets, const TrainConfig& cfg,
                             const sim::SystemState& s0, const sim::SystemState& goal, bool explore, Rng& rng) {
  try {
    return rollout_once(env, nets, cfg, s0, goal, explore, rng);
  } catch (const SimulationDiverged&) {
    return rollout_once(env, nets, cfg, s0, goal, explore, rng);
  }
}

EvalResult evaluate(const NetworkBundle& nets, const sim::EnvModel& env, const TrainConfig& cfg, Rng& rng) {
  EvalResult out;
  int successes = 0;
  for (int i = 0; i < cfg.eval_runs; ++i) {
    const auto [s0, goal] = sample_start_goal(env, rng);
    const RolloutResult r = rollout_policy(env, nets, cfg, s0, goal, false, rng);
    successes += r.success ? 1 : 0;
    out.mean_reward += r.total_reward;
  }
  out.success_rate = static_cast<double>(successes) / cfg.eval_runs;
  out.mean_reward /= cfg.eval_runs;
  return out;
}

}  // namespace manip::learner

#include "manip/learner/replay_buffer.hpp"

#include <stdexcept>

#include "manip/learner/reward.hpp"

namespace manip::learner {

Transition make_transition(const Episode& ep, int t, const Eigen::VectorXd& goal, double epsilon,
                           const Eigen::VectorXd& q_d) {
  if (t < 0 || t >= ep.steps()) throw std::out_of_range("make_transition: step out of range");
  Transition tr;
  tr.s = ep.states[static_cast<std::size_t>(t)];
  tr.a = ep.actions[static_cast<std::size_t>(t)];
  tr.s_g = goal;
  tr.s_next = ep.states[static_cast<std::size_t>(t) + 1];
  tr.s_0 = ep.start;
  tr.r = sparse_reward(tr.s_next, tr.s_0, goal, epsilon, q_d);
  tr.is_demo = ep.is_demo;
  return tr;
}

std::vector<Transition> episode_transitions(const Episode& ep, double epsilon, const Eigen::VectorXd& q_d) {
  std::vector<Transition> out;
  out.reserve(static_cast<std::size_t>(ep.steps()));
  for (int t = 0; t < ep.steps(); ++t) out.push_back(make_transition(ep, t, ep.goal, epsilon, q_d));
  return out;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity_episodes) : capacity_(capacity_episodes) {
  if (capacity_ == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
}

void ReplayBuffer::add(Episode ep) {
  if (ep.steps() == 0 || ep.states.size() != ep.commands.size() + 1 || ep.actions.size() != ep.commands.size()) {
    throw std::invalid_argument("ReplayBuffer::add: malformed episode");
  }
  if (!episodes_.empty() && ep.steps() != episodes_.front().steps()) {
    throw std::invalid_argument("ReplayBuffer::add: episode length differs from stored episodes");
  }
  if (episodes_.size() == capacity_) {
    if (episodes_.front().is_demo) --demo_count_;
    episodes_.pop_front();
  }
  if (ep.is_demo) ++demo_count_;
  episodes_.push_back(std::move(ep));
  ++total_added_;
}

long ReplayBuffer::transitions() const {
  if (episodes_.empty()) return 0;
  return static_cast<long>(episodes_.size()) * episodes_.front().steps();
}

double ReplayBuffer::demo_fraction() const {
  if (episodes_.empty()) return 0.0;
  return static_cast<double>(demo_count_) / static_cast<double>(episodes_.size());
}

std::pair<std::size_t, int> ReplayBuffer::sample_index(Rng& rng) const {
  if (episodes_.empty()) throw std::logic_error("ReplayBuffer::sample_index: buffer is empty");
  std::uniform_int_distribution<std::size_t> pick_ep(0, episodes_.size() - 1);
  const std::size_t e = pick_ep(rng);
  std::uniform_int_distribution<int> pick_t(0, episodes_[e].steps() - 1);
  return {e, pick_t(rng)};
}

bool her_goal(const Episode& ep, int t, double p_her, Rng& rng, Eigen::VectorXd* goal) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (!(u(rng) < p_her)) return false;
  // Future states s_{t+1} .. s_T, the successor included.
  std::uniform_int_distribution<int> pick(t + 1, ep.steps());
  *goal = ep.states[static_cast<std::size_t>(pick(rng))];
  return true;
}

std::vector<Transition> her_relabel(const Episode& ep, double p_her, double epsilon, const Eigen::VectorXd& q_d,
                                    Rng& rng) {
  std::vector<Transition> out;
  Eigen::VectorXd g;
  for (int t = 0; t < ep.steps(); ++t) {
    if (her_goal(ep, t, p_her, rng, &g)) out.push_back(make_transition(ep, t, g, epsilon, q_d));
  }
  return out;
}

}  // namespace manip::learner

#pragma once

#include <deque>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace manip::learner {

using Rng = std::mt19937_64;

// One stored episode. commands[t] is the absolute joint command tracked from
// states[t]; the first step starts from initial_command.
struct Episode {
  Eigen::VectorXd start;  // s_0 used by the reward ratio
  Eigen::VectorXd goal;
  Eigen::VectorXd initial_command;
  std::vector<Eigen::VectorXd> states;  // n_steps + 1
  std::vector<Eigen::VectorXd> commands;  // n_steps
  std::vector<Eigen::VectorXd> actions;   // n_steps, policy space [-1, 1]
  bool is_demo = false;

  int steps() const { return static_cast<int>(commands.size()); }
};

struct Transition {
  Eigen::VectorXd s;
  Eigen::VectorXd a;  // policy space, within [-1, 1]
  Eigen::VectorXd s_g;
  double r = -1.0;
  Eigen::VectorXd s_next;
  Eigen::VectorXd s_0;
  bool is_demo = false;
};

// Transition t of an episode with the reward recomputed under `goal`.
Transition make_transition(const Episode& ep, int t, const Eigen::VectorXd& goal, double epsilon,
                           const Eigen::VectorXd& q_d);

std::vector<Transition> episode_transitions(const Episode& ep, double epsilon, const Eigen::VectorXd& q_d);

// FIFO ring of whole episodes.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity_episodes);

  void add(Episode ep);
  std::size_t size() const { return episodes_.size(); }
  std::size_t capacity() const { return capacity_; }
  long transitions() const;
  long demo_episodes() const { return demo_count_; }
  double demo_fraction() const;
  const Episode& episode(std::size_t i) const { return episodes_[i]; }
  long total_added() const { return total_added_; }

  // Uniform over stored transitions (episode uniform, then step uniform).
  std::pair<std::size_t, int> sample_index(Rng& rng) const;

 private:
  std::size_t capacity_;
  std::deque<Episode> episodes_;
  long demo_count_ = 0;
  long total_added_ = 0;
};

// Hindsight relabeling with the "future" strategy: with probability p_her,
// the goal of step t becomes the state reached at a uniformly drawn later
// step of the same episode. Returns whether the goal was replaced.
bool her_goal(const Episode& ep, int t, double p_her, Rng& rng, Eigen::VectorXd* goal);

// Relabeled copies of the episode's transitions, each produced with
// probability p_her.
std::vector<Transition> her_relabel(const Episode& ep, double p_her, double epsilon, const Eigen::VectorXd& q_d,
                                    Rng& rng);

}  // namespace manip::learner

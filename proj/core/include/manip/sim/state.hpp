#pragma once

#include <Eigen/Core>

namespace manip::sim {

// Full system state, stored flat in the order [q_r | qd_r | q_o | qd_o].
// Planar tasks carry no quaternions, so configuration and velocity blocks of
// each body group have the same dimension.
class SystemState {
 public:
  SystemState() = default;
  SystemState(int n_r, int n_o);
  SystemState(int n_r, int n_o, Eigen::VectorXd flat);

  int n_r() const { return n_r_; }
  int n_o() const { return n_o_; }
  int size() const { return static_cast<int>(x_.size()); }

  auto q_r() { return x_.segment(0, n_r_); }
  auto qd_r() { return x_.segment(n_r_, n_r_); }
  auto q_o() { return x_.segment(2 * n_r_, n_o_); }
  auto qd_o() { return x_.segment(2 * n_r_ + n_o_, n_o_); }
  auto q_r() const { return x_.segment(0, n_r_); }
  auto qd_r() const { return x_.segment(n_r_, n_r_); }
  auto q_o() const { return x_.segment(2 * n_r_, n_o_); }
  auto qd_o() const { return x_.segment(2 * n_r_ + n_o_, n_o_); }

  const Eigen::VectorXd& flat() const { return x_; }
  Eigen::VectorXd& flat() { return x_; }

  bool all_finite() const;
  // Index of the first non-finite coordinate, or -1.
  int first_non_finite() const;

  friend bool operator==(const SystemState& a, const SystemState& b) {
    return a.n_r_ == b.n_r_ && a.n_o_ == b.n_o_ && a.x_ == b.x_;
  }

 private:
  int n_r_ = 0;
  int n_o_ = 0;
  Eigen::VectorXd x_;
};

}  // namespace manip::sim

#include "manip/sim/state.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace manip::sim {

SystemState::SystemState(int n_r, int n_o)
    : n_r_(n_r), n_o_(n_o), x_(Eigen::VectorXd::Zero(2 * (n_r + n_o))) {}

SystemState::SystemState(int n_r, int n_o, Eigen::VectorXd flat)
    : n_r_(n_r), n_o_(n_o), x_(std::move(flat)) {
  if (x_.size() != 2 * (n_r + n_o)) {
    throw std::invalid_argument("state vector has " + std::to_string(x_.size()) +
                                " entries, expected " + std::to_string(2 * (n_r + n_o)));
  }
}

bool SystemState::all_finite() const { return first_non_finite() < 0; }

int SystemState::first_non_finite() const {
  for (Eigen::Index i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i])) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace manip::sim

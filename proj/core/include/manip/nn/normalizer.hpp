#pragma once

#include <Eigen/Core>

namespace manip::nn {

// Running per-coordinate mean and variance; identity until the first update.
class Normalizer {
 public:
  Normalizer() = default;
  explicit Normalizer(int dim, double clip = 5.0, double min_std = 1e-2);

  int dim() const { return static_cast<int>(mean_.size()); }
  double count() const { return count_; }
  double clip() const { return clip_; }
  double min_std() const { return min_std_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::VectorXd& m2() const { return m2_; }
  Eigen::VectorXd variance() const;
  Eigen::VectorXd stddev() const;

  // Samples are columns.
  void update(const Eigen::MatrixXd& batch);
  void merge(const Normalizer& other);

  Eigen::MatrixXd normalize(const Eigen::MatrixXd& x) const;
  Eigen::VectorXd normalize_one(const Eigen::VectorXd& x) const;

  void set_state(double count, Eigen::VectorXd mean, Eigen::VectorXd m2);

 private:
  double count_ = 0.0;
  Eigen::VectorXd mean_;
  Eigen::VectorXd m2_;
  double clip_ = 5.0;
  double min_std_ = 1e-2;
};

}  // namespace manip::nn

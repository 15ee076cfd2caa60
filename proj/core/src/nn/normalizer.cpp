#include "manip/nn/normalizer.hpp"

#include <stdexcept>

namespace manip::nn {

Normalizer::Normalizer(int dim, double clip, double min_std)
    : mean_(Eigen::VectorXd::Zero(dim)), m2_(Eigen::VectorXd::Zero(dim)), clip_(clip), min_std_(min_std) {}

Eigen::VectorXd Normalizer::variance() const {
  if (count_ <= 0.0) return Eigen::VectorXd::Ones(dim());
  return m2_ / count_;
}

Eigen::VectorXd Normalizer::stddev() const { return variance().cwiseSqrt().cwiseMax(min_std_); }

void Normalizer::update(const Eigen::MatrixXd& batch) {
  if (batch.cols() == 0) return;
  if (batch.rows() != dim()) throw std::invalid_argument("Normalizer::update: dimension mismatch");
  Normalizer other(dim(), clip_, min_std_);
  other.count_ = static_cast<double>(batch.cols());
  other.mean_ = batch.rowwise().mean();
  other.m2_ = (batch.colwise() - other.mean_).rowwise().squaredNorm().transpose();
  merge(other);
}

void Normalizer::merge(const Normalizer& other) {
  if (other.dim() != dim()) throw std::invalid_argument("Normalizer::merge: dimension mismatch");
  if (other.count_ <= 0.0) return;
  if (count_ <= 0.0) {
    count_ = other.count_;
    mean_ = other.mean_;
    m2_ = other.m2_;
    return;
  }
  const double n = count_ + other.count_;
  const Eigen::VectorXd delta = other.mean_ - mean_;
  mean_ += delta * (other.count_ / n);
  m2_ += other.m2_ + delta.cwiseProduct(delta) * (count_ * other.count_ / n);
  count_ = n;
}

Eigen::MatrixXd Normalizer::normalize(const Eigen::MatrixXd& x) const {
  if (x.rows() != dim()) throw std::invalid_argument("Normalizer::normalize: dimension mismatch");
  if (count_ <= 0.0) return x;
  const Eigen::VectorXd inv = stddev().cwiseInverse();
  Eigen::MatrixXd out = (x.colwise() - mean_).array().colwise() * inv.array();
  return out.cwiseMax(-clip_).cwiseMin(clip_);
}

Eigen::VectorXd Normalizer::normalize_one(const Eigen::VectorXd& x) const {
  return normalize(Eigen::MatrixXd(x)).col(0);
}

void Normalizer::set_state(double count, Eigen::VectorXd mean, Eigen::VectorXd m2) {
  if (mean.size() != m2.size()) throw std::invalid_argument("Normalizer::set_state: size mismatch");
  count_ = count;
  mean_ = std::move(mean);
  m2_ = std::move(m2);
}

}  // namespace manip::nn

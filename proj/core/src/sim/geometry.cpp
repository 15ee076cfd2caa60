#include "manip/sim/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace manip::sim {

Eigen::Vector2d Pose2::rotate(const Eigen::Vector2d& v) const {
  const double c = std::cos(theta), s = std::sin(theta);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

Eigen::Vector2d Pose2::unrotate(const Eigen::Vector2d& v) const {
  const double c = std::cos(theta), s = std::sin(theta);
  return {c * v.x() + s * v.y(), -s * v.x() + c * v.y()};
}

Eigen::Vector2d Pose2::to_world(const Eigen::Vector2d& local) const { return p + rotate(local); }

Eigen::Vector2d Pose2::to_local(const Eigen::Vector2d& world) const { return unrotate(world - p); }

double box_sdf(const Eigen::Vector2d& p, const Eigen::Vector2d& half, Eigen::Vector2d* grad) {
  const double qx = std::abs(p.x()) - half.x();
  const double qy = std::abs(p.y()) - half.y();
  const double sx = p.x() < 0 ? -1.0 : 1.0;
  const double sy = p.y() < 0 ? -1.0 : 1.0;
  if (qx > 0 || qy > 0) {
    const double ox = std::max(qx, 0.0), oy = std::max(qy, 0.0);
    const double d = std::hypot(ox, oy);
    if (grad) *grad = Eigen::Vector2d(sx * ox / d, sy * oy / d);
    return d;
  }
  if (qx > qy) {
    if (grad) *grad = Eigen::Vector2d(sx, 0.0);
    return qx;
  }
  if (grad) *grad = Eigen::Vector2d(0.0, sy);
  return qy;
}

CapsuleBoxQuery capsule_box(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double radius,
                            const Pose2& box, const Eigen::Vector2d& half) {
  CapsuleBoxQuery out;
  const Eigen::Vector2d la = box.to_local(a);
  const Eigen::Vector2d lb = box.to_local(b);
  const Eigen::Vector2d mid = 0.5 * (la + lb);
  const double reach = half.norm() + 0.5 * (lb - la).norm() + radius;
  if (mid.norm() > reach) {
    out.depth = -(mid.norm() - reach);
    return out;
  }

  // The box SDF is convex, so its restriction to the segment is unimodal.
  auto f = [&](double t) { return box_sdf(la + t * (lb - la), half); };
  constexpr double kInvPhi = 0.6180339887498949;
  double lo = 0.0, hi = 1.0;
  double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 48; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    }
  }
  double t = 0.5 * (lo + hi);
  double best = f(t);
  if (const double f0 = f(0.0); f0 < best) best = f0, t = 0.0;
  if (const double f1e = f(1.0); f1e < best) best = f1e, t = 1.0;

  const Eigen::Vector2d lp = la + t * (lb - la);
  Eigen::Vector2d grad;
  const double sdf = box_sdf(lp, half, &grad);
  out.depth = radius - sdf;
  out.normal = box.rotate(grad);
  out.segment_point = box.to_world(lp);
  out.surface_point = box.to_world(lp - sdf * grad);
  return out;
}

double aabb_gap(const Eigen::Vector2d& center_a, const Eigen::Vector2d& half_a,
                const Eigen::Vector2d& center_b, const Eigen::Vector2d& half_b) {
  const Eigen::Vector2d d = (center_a - center_b).cwiseAbs() - (half_a + half_b);
  return std::hypot(std::max(d.x(), 0.0), std::max(d.y(), 0.0));
}

double aabb_penetration(const Eigen::Vector2d& center_a, const Eigen::Vector2d& half_a,
                        const Eigen::Vector2d& center_b, const Eigen::Vector2d& half_b,
                        Eigen::Vector2d* normal) {
  const Eigen::Vector2d delta = center_a - center_b;
  const Eigen::Vector2d overlap = (half_a + half_b) - delta.cwiseAbs();
  if (normal) {
    if (overlap.x() < overlap.y()) {
      *normal = Eigen::Vector2d(delta.x() < 0 ? -1.0 : 1.0, 0.0);
    } else {
      *normal = Eigen::Vector2d(0.0, delta.y() < 0 ? -1.0 : 1.0);
    }
  }
  return std::min(overlap.x(), overlap.y());
}

}  // namespace manip::sim

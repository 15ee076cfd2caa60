#pragma once

#include <Eigen/Core>

namespace manip::sim {

struct Pose2 {
  Eigen::Vector2d p = Eigen::Vector2d::Zero();
  double theta = 0.0;

  Eigen::Vector2d to_world(const Eigen::Vector2d& local) const;
  Eigen::Vector2d to_local(const Eigen::Vector2d& world) const;
  Eigen::Vector2d rotate(const Eigen::Vector2d& v) const;
  Eigen::Vector2d unrotate(const Eigen::Vector2d& v) const;
};

// Signed distance from a point (box frame) to a centered box with the given
// half extents; negative inside. `grad` receives the outward unit gradient.
double box_sdf(const Eigen::Vector2d& p, const Eigen::Vector2d& half, Eigen::Vector2d* grad = nullptr);

// Deepest point of a capsule against an oriented box.
struct CapsuleBoxQuery {
  double depth = 0.0;              // capsule radius minus segment/box signed distance
  Eigen::Vector2d normal;          // world, outward from the box
  Eigen::Vector2d segment_point;   // world, on the capsule axis
  Eigen::Vector2d surface_point;   // world, on the box boundary
};

CapsuleBoxQuery capsule_box(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double radius,
                            const Pose2& box, const Eigen::Vector2d& half);

// Gap between two axis-aligned boxes (0 when touching or overlapping).
double aabb_gap(const Eigen::Vector2d& center_a, const Eigen::Vector2d& half_a,
                const Eigen::Vector2d& center_b, const Eigen::Vector2d& half_b);

// Penetration of two axis-aligned boxes along the axis of least overlap.
// Returns depth (<= 0 when separated) and the unit normal pointing from b to a.
double aabb_penetration(const Eigen::Vector2d& center_a, const Eigen::Vector2d& half_a,
                        const Eigen::Vector2d& center_b, const Eigen::Vector2d& half_b,
                        Eigen::Vector2d* normal);

}  // namespace manip::sim

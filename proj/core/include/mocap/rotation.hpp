#pragma once

#include <Eigen/Core>

#include <span>

namespace mocap {

/// Swing/twist split of a rotation about a bone axis: rotation = swing * twist.
/// The twist axis is parallel to `axis`, the swing axis perpendicular to it.
struct SwingTwist {
  Eigen::Matrix3d swing = Eigen::Matrix3d::Identity();
  double twist_angle = 0.0; // radians in (-pi, pi]
  Eigen::Vector3d axis = Eigen::Vector3d::UnitY();
  bool singular = false; // swing was a half-turn; twist forced to 0

  Eigen::Matrix3d compose() const;
};

Eigen::Matrix3d skew(const Eigen::Vector3d& v);

Eigen::Matrix3d rotation_about_axis(const Eigen::Vector3d& unit_axis, double angle);

/// Shortest-arc rotation taking template_dir onto estimated_dir, built from
/// the Rodrigues formula on their normalized cross product. Anti-parallel
/// inputs (cross norm < 1e-7 with negative dot) fall back to a half-turn
/// about a deterministic axis perpendicular to template_dir, constructed from
/// its smallest-index nonzero component. Throws on (near-)zero input vectors.
Eigen::Matrix3d swing_from_vectors(const Eigen::Vector3d& estimated_dir,
                                   const Eigen::Vector3d& template_dir);

/// Splits `rotation` into swing * twist about `axis` (unit length). At the
/// half-turn singularity the twist is set to 0 and the result flagged.
SwingTwist swing_twist_decompose(const Eigen::Matrix3d& rotation,
                                 const Eigen::Vector3d& axis);

/// Proper rotation (det +1) minimizing the squared distance between the
/// rotated, centered source points and the centered target points. Throws
/// "rank deficient" on collinear or coincident configurations.
Eigen::Matrix3d kabsch_rotation(std::span<const Eigen::Vector3d> source,
                                std::span<const Eigen::Vector3d> target);

/// Angle in [0, pi] of the relative rotation a^T b.
double geodesic_angle(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b);

bool is_rotation(const Eigen::Matrix3d& m, double tol = 1e-6);

} // namespace mocap

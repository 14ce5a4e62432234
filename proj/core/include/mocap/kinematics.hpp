#pragma once

#include "mocap/types.hpp"

#include <Eigen/Core>

#include <vector>

namespace mocap {

struct FkPose {
  std::vector<Eigen::Vector3d> positions; // global joint positions
  std::vector<Eigen::Matrix3d> rotations; // global joint rotations
};

/// Composes local rotations down the tree. The root's global rotation is its
/// local rotation and its global position the frame's root translation.
FkPose forward_kinematics(const Skeleton& skeleton, const MotionFrame& frame);

} // namespace mocap

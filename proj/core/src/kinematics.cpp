#include "mocap/kinematics.hpp"

#include <stdexcept>

namespace mocap {

FkPose forward_kinematics(const Skeleton& skeleton, const MotionFrame& frame) {
  const int joint_count = skeleton.joint_count();
  if (static_cast<int>(frame.local_rotations.size()) != joint_count) {
    throw std::invalid_argument("frame rotation count does not match skeleton");
  }

  FkPose pose;
  pose.positions.resize(joint_count);
  pose.rotations.resize(joint_count);
  pose.positions[0] = frame.root_translation;
  pose.rotations[0] = frame.local_rotations[0];
  for (int i = 1; i < joint_count; ++i) {
    const int parent = skeleton.joints[i].parent;
    pose.rotations[i] = pose.rotations[parent] * frame.local_rotations[i];
    pose.positions[i] = pose.positions[parent] + pose.rotations[parent] * skeleton.joints[i].offset;
  }
  return pose;
}

} // namespace mocap

#include "mocap/types.hpp"

#include "mocap/error.hpp"

#include <Eigen/LU>

#include <cmath>
#include <unordered_set>

namespace mocap {

std::string to_string(Part part) {
  switch (part) {
  case Part::kBody:
    return "body";
  case Part::kLeftHand:
    return "left_hand";
  case Part::kRightHand:
    return "right_hand";
  case Part::kUnknown:
    return "unknown";
  }
  return "unknown";
}

Part part_from_string(const std::string& name) {
  if (name == "body") {
    return Part::kBody;
  }
  if (name == "left_hand") {
    return Part::kLeftHand;
  }
  if (name == "right_hand") {
    return Part::kRightHand;
  }
  if (name == "unknown") {
    return Part::kUnknown;
  }
  throw DataError("unknown part name: " + name);
}

std::vector<std::vector<int>> Skeleton::children() const {
  std::vector<std::vector<int>> result(joints.size());
  for (int i = 1; i < joint_count(); ++i) {
    result[joints[i].parent].push_back(i);
  }
  return result;
}

bool Skeleton::is_leaf(int joint) const {
  for (int i = joint + 1; i < joint_count(); ++i) {
    if (joints[i].parent == joint) {
      return false;
    }
  }
  return true;
}

int Skeleton::find_joint(const std::string& name) const {
  for (int i = 0; i < joint_count(); ++i) {
    if (joints[i].name == name) {
      return i;
    }
  }
  return -1;
}

void validate(const Skeleton& skeleton) {
  if (skeleton.joints.empty()) {
    throw DataError("skeleton has no joints");
  }
  if (skeleton.joints[0].parent != -1) {
    throw DataError("joint 0 must be the root");
  }
  for (int i = 1; i < skeleton.joint_count(); ++i) {
    const int parent = skeleton.joints[i].parent;
    if (parent < 0) {
      throw DataError("skeleton has more than one root");
    }
    if (parent >= i) {
      throw DataError("parents must precede children (joint " + skeleton.joints[i].name + ")");
    }
    if (!skeleton.joints[i].offset.allFinite()) {
      throw DataError("non-finite joint offset");
    }
  }
}

int MarkerLayout::find_marker(const std::string& label) const {
  for (int i = 0; i < marker_count(); ++i) {
    if (markers[i].label == label) {
      return i;
    }
  }
  return -1;
}

void validate(const MarkerLayout& layout, const Skeleton& skeleton) {
  std::unordered_set<std::string> seen;
  for (const Marker& marker : layout.markers) {
    if (marker.label == "null") {
      throw DataError("\"null\" is a reserved label");
    }
    if (!seen.insert(marker.label).second) {
      throw DataError("duplicate marker label: " + marker.label);
    }
    if (marker.joint < 0 || marker.joint >= skeleton.joint_count()) {
      throw DataError("marker " + marker.label + " references an invalid joint");
    }
    if (!marker.local_offset.allFinite()) {
      throw DataError("non-finite marker offset: " + marker.label);
    }
  }
}

void validate(const Motion& motion, int joint_count) {
  if (motion.frame_rate <= 0.0) {
    throw DataError("frame rate must be positive");
  }
  for (const MotionFrame& frame : motion.frames) {
    if (static_cast<int>(frame.local_rotations.size()) != joint_count) {
      throw DataError("frame rotation count does not match skeleton");
    }
    if (!frame.root_translation.allFinite()) {
      throw DataError("non-finite root translation");
    }
    for (const Eigen::Matrix3d& rot : frame.local_rotations) {
      const double ortho =
          (rot.transpose() * rot - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
      if (!rot.allFinite() || ortho > 1e-6 || std::abs(rot.determinant() - 1.0) > 1e-6) {
        throw DataError("local rotation is not a proper rotation matrix");
      }
    }
  }
}

void validate(const FramePointCloud& frame) {
  for (const Eigen::Vector3d& p : frame.points) {
    if (!p.allFinite()) {
      throw DataError("non-finite point coordinates");
    }
  }
  if (!frame.part_tags.empty() && frame.part_tags.size() != frame.points.size()) {
    throw DataError("part tag count does not match point count");
  }
}

void validate(const LabeledMarkers& markers) {
  if (markers.positions.size() != markers.visibility.size()) {
    throw DataError("positions/visibility frame counts differ");
  }
  for (int t = 0; t < markers.frame_count(); ++t) {
    if (markers.positions[t].size() != markers.visibility[t].size()) {
      throw DataError("positions/visibility marker counts differ");
    }
    for (std::size_t n = 0; n < markers.positions[t].size(); ++n) {
      if (markers.visibility[t][n] && !markers.positions[t][n].allFinite()) {
        throw DataError("non-finite visible marker position");
      }
    }
  }
}

} // namespace mocap

#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace mocap {

enum class Part { kBody, kLeftHand, kRightHand, kUnknown };

std::string to_string(Part part);
Part part_from_string(const std::string& name);

struct Joint {
  std::string name;
  int parent = -1; // -1 for the root
  Eigen::Vector3d offset = Eigen::Vector3d::Zero(); // meters, relative to parent
};

/// Kinematic tree stored in topological order: the root is index 0 and every
/// parent index is smaller than its child's.
struct Skeleton {
  std::vector<Joint> joints;

  int joint_count() const { return static_cast<int>(joints.size()); }
  std::vector<std::vector<int>> children() const;
  bool is_leaf(int joint) const;
  int find_joint(const std::string& name) const; // -1 if absent
};

/// Throws DataError unless there is exactly one root at index 0 and parents
/// precede children.
void validate(const Skeleton& skeleton);

struct Marker {
  std::string label;
  int joint = 0;
  Eigen::Vector3d local_offset = Eigen::Vector3d::Zero(); // meters, joint frame
  Part part = Part::kBody;
};

struct MarkerLayout {
  std::vector<Marker> markers;

  int marker_count() const { return static_cast<int>(markers.size()); }
  int find_marker(const std::string& label) const; // -1 if absent
};

/// Labels must be unique, never the reserved "null", and reference valid joints.
void validate(const MarkerLayout& layout, const Skeleton& skeleton);

struct MotionFrame {
  Eigen::Vector3d root_translation = Eigen::Vector3d::Zero(); // meters
  std::vector<Eigen::Matrix3d> local_rotations;               // one per joint
};

struct Motion {
  double frame_rate = 0.0; // Hz
  std::vector<MotionFrame> frames;

  int frame_count() const { return static_cast<int>(frames.size()); }
};

/// Every frame must carry joint_count rotations, each orthonormal with
/// determinant +1 within 1e-6.
void validate(const Motion& motion, int joint_count);

/// Sparse unordered capture at one time index. Cardinality varies per frame.
struct FramePointCloud {
  int time_index = 0;
  std::vector<Eigen::Vector3d> points;
  std::vector<Part> part_tags; // optional: empty, or one tag per point
};

/// Points must be finite; part_tags, when present, match the point count.
void validate(const FramePointCloud& frame);

/// Ordered marker positions over time. positions[t][n] is meaningful only
/// where visibility[t][n] is true.
struct LabeledMarkers {
  std::vector<std::vector<Eigen::Vector3d>> positions; // T x N
  std::vector<std::vector<bool>> visibility;           // T x N

  int frame_count() const { return static_cast<int>(positions.size()); }
  int marker_count() const {
    return positions.empty() ? 0 : static_cast<int>(positions.front().size());
  }
};

void validate(const LabeledMarkers& markers);

} // namespace mocap

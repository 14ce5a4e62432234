#include "mocap/providers.hpp"

#include "mocap/kinematics.hpp"
#include "mocap/rng.hpp"
#include "mocap/rotation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mocap {
namespace {

double wrap_angle(double angle) {
  angle = std::remainder(angle, 2.0 * std::numbers::pi);
  if (angle <= -std::numbers::pi) {
    angle = std::numbers::pi;
  }
  return angle;
}

void check_frame_index(int frame_index, std::size_t count) {
  if (frame_index < 0 || static_cast<std::size_t>(frame_index) >= count) {
    throw std::out_of_range("frame index " + std::to_string(frame_index) + " outside provider");
  }
}

} // namespace

OracleConfidenceProvider::OracleConfidenceProvider(
    std::span<const std::vector<int>> correspondence, int label_count,
    const OracleConfidenceParams& params) {
  if (label_count < 0) {
    throw std::invalid_argument("negative label count");
  }
  if (!(params.temperature > 0.0)) {
    throw std::invalid_argument("temperature must be positive");
  }
  if (params.noise_sigma < 0.0) {
    throw std::invalid_argument("noise sigma must be non-negative");
  }
  Rng rng(params.seed);
  frames_.reserve(correspondence.size());
  for (const std::vector<int>& origins : correspondence) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(origins.size()), label_count);
    for (Eigen::Index p = 0; p < m.rows(); ++p) {
      const int truth = origins[static_cast<std::size_t>(p)];
      for (Eigen::Index label = 0; label < label_count; ++label) {
        const double base = truth == static_cast<int>(label) ? params.margin : 0.0;
        m(p, label) = (base + rng.gaussian(params.noise_sigma)) / params.temperature;
      }
    }
    frames_.push_back(std::move(m));
  }
}

const Eigen::MatrixXd& OracleConfidenceProvider::log_scores(int frame_index) const {
  check_frame_index(frame_index, frames_.size());
  return frames_[static_cast<std::size_t>(frame_index)];
}

const Eigen::MatrixXd& FileConfidenceProvider::log_scores(int frame_index) const {
  check_frame_index(frame_index, frames_.size());
  return frames_[static_cast<std::size_t>(frame_index)];
}

FeatureSet BaselineFeatureProvider::features(std::span<const FramePointCloud> frames) const {
  return baseline_features(frames);
}

OracleFeatureProvider::OracleFeatureProvider(std::span<const std::vector<int>> correspondence,
                                             int label_count, double noise_sigma,
                                             std::uint64_t seed) {
  if (label_count <= 0) {
    throw std::invalid_argument("label count must be positive");
  }
  if (noise_sigma < 0.0) {
    throw std::invalid_argument("noise sigma must be non-negative");
  }
  Rng rng(seed);
  all_.dimension = label_count;
  all_.per_frame.reserve(correspondence.size());
  for (const std::vector<int>& origins : correspondence) {
    Eigen::MatrixXd m =
        Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(origins.size()), label_count);
    for (Eigen::Index p = 0; p < m.rows(); ++p) {
      const int truth = origins[static_cast<std::size_t>(p)];
      if (truth >= 0 && truth < label_count) {
        m(p, truth) = 1.0;
      }
      for (Eigen::Index d = 0; d < label_count; ++d) {
        m(p, d) += rng.gaussian(noise_sigma);
      }
    }
    all_.per_frame.push_back(std::move(m));
  }
}

namespace {

// Slices a whole-sequence feature set down to a window by matching frame
// point counts against time_index.
FeatureSet slice_features(const FeatureSet& all, std::span<const FramePointCloud> frames) {
  FeatureSet out;
  out.dimension = all.dimension;
  out.per_frame.reserve(frames.size());
  for (const FramePointCloud& frame : frames) {
    if (frame.time_index < 0 ||
        static_cast<std::size_t>(frame.time_index) >= all.per_frame.size()) {
      throw std::invalid_argument("frame time_index outside provided features");
    }
    const Eigen::MatrixXd& rows = all.per_frame[static_cast<std::size_t>(frame.time_index)];
    if (rows.rows() != static_cast<Eigen::Index>(frame.points.size())) {
      throw std::invalid_argument("feature rows disagree with frame point count");
    }
    out.per_frame.push_back(rows);
  }
  return out;
}

} // namespace

FeatureSet OracleFeatureProvider::features(std::span<const FramePointCloud> frames) const {
  return slice_features(all_, frames);
}

FeatureSet FileFeatureProvider::features(std::span<const FramePointCloud> frames) const {
  return slice_features(all_, frames);
}

std::vector<double> true_twists(const Skeleton& skeleton, const MotionFrame& frame) {
  const std::vector<std::vector<int>> children = skeleton.children();
  std::vector<double> twists(static_cast<std::size_t>(skeleton.joint_count()), 0.0);
  for (int i = 1; i < skeleton.joint_count(); ++i) {
    const std::vector<int>& kids = children[static_cast<std::size_t>(i)];
    const Eigen::Vector3d axis_source =
        kids.empty() ? skeleton.joints[static_cast<std::size_t>(i)].offset
                     : skeleton.joints[static_cast<std::size_t>(kids.front())].offset;
    if (axis_source.norm() <= 0.0) {
      continue;
    }
    twists[static_cast<std::size_t>(i)] =
        swing_twist_decompose(frame.local_rotations[static_cast<std::size_t>(i)],
                              axis_source.normalized())
            .twist_angle;
  }
  return twists;
}

OraclePoseProvider::OraclePoseProvider(const Skeleton& skeleton, const Motion& motion,
                                       const OraclePoseParams& params) {
  validate(motion, skeleton.joint_count());
  if (params.position_sigma < 0.0 || params.twist_sigma < 0.0 || params.offset_sigma < 0.0) {
    throw std::invalid_argument("noise sigmas must be non-negative");
  }
  Rng rng(params.seed);
  const std::size_t joint_count = static_cast<std::size_t>(skeleton.joint_count());
  estimates_.reserve(motion.frames.size());
  for (const MotionFrame& frame : motion.frames) {
    const FkPose pose = forward_kinematics(skeleton, frame);
    PoseEstimate e;
    e.joint_positions.resize(joint_count);
    e.frame_offsets.resize(joint_count);
    for (std::size_t j = 0; j < joint_count; ++j) {
      e.joint_positions[j] = pose.positions[j] + rng.gaussian_vec3(params.position_sigma);
    }
    e.twist_angles = true_twists(skeleton, frame);
    for (std::size_t j = 0; j < joint_count; ++j) {
      e.twist_angles[j] = wrap_angle(e.twist_angles[j] + rng.gaussian(params.twist_sigma));
    }
    for (std::size_t j = 0; j < joint_count; ++j) {
      e.frame_offsets[j] = skeleton.joints[j].offset + rng.gaussian_vec3(params.offset_sigma);
    }
    estimates_.push_back(std::move(e));
  }
}

PoseEstimate OraclePoseProvider::estimate(int frame_index) const {
  check_frame_index(frame_index, estimates_.size());
  return estimates_[static_cast<std::size_t>(frame_index)];
}

MarkerDerivedPoseProvider::MarkerDerivedPoseProvider(const Skeleton& skeleton,
                                                     const MarkerLayout& layout,
                                                     const Motion& motion,
                                                     double uniform_halfwidth,
                                                     double gaussian_sigma, std::uint64_t seed) {
  validate(layout, skeleton);
  validate(motion, skeleton.joint_count());
  if (uniform_halfwidth < 0.0 || gaussian_sigma < 0.0) {
    throw std::invalid_argument("jitter magnitudes must be non-negative");
  }
  Rng rng(seed);
  const std::size_t joint_count = static_cast<std::size_t>(skeleton.joint_count());
  estimates_.reserve(motion.frames.size());
  for (const MotionFrame& frame : motion.frames) {
    const FkPose pose = forward_kinematics(skeleton, frame);
    std::vector<Eigen::Vector3d> votes(joint_count, Eigen::Vector3d::Zero());
    std::vector<int> vote_count(joint_count, 0);
    for (const Marker& marker : layout.markers) {
      const std::size_t j = static_cast<std::size_t>(marker.joint);
      const Eigen::Vector3d clean = pose.positions[j] + pose.rotations[j] * marker.local_offset;
      const Eigen::Vector3d jittered =
          clean + rng.gaussian_vec3(gaussian_sigma) + rng.uniform_box(uniform_halfwidth);
      votes[j] += jittered - pose.rotations[j] * marker.local_offset;
      vote_count[j] += 1;
    }
    PoseEstimate e;
    e.joint_positions.resize(joint_count);
    e.frame_offsets.resize(joint_count);
    for (std::size_t j = 0; j < joint_count; ++j) {
      e.joint_positions[j] =
          vote_count[j] > 0 ? (votes[j] / static_cast<double>(vote_count[j])).eval()
                            : pose.positions[j];
      e.frame_offsets[j] = skeleton.joints[j].offset;
    }
    e.twist_angles = true_twists(skeleton, frame);
    estimates_.push_back(std::move(e));
  }
}

PoseEstimate MarkerDerivedPoseProvider::estimate(int frame_index) const {
  check_frame_index(frame_index, estimates_.size());
  return estimates_[static_cast<std::size_t>(frame_index)];
}

PoseEstimate FilePoseProvider::estimate(int frame_index) const {
  check_frame_index(frame_index, estimates_.size());
  return estimates_[static_cast<std::size_t>(frame_index)];
}

} // namespace mocap

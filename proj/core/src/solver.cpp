#include "mocap/solver.hpp"

#include "mocap/rotation.hpp"

#include <stdexcept>
#include <utility>

namespace mocap {
namespace {

// Rest-pose joint positions with identity rotations, root at the origin.
std::vector<Eigen::Vector3d> rest_positions(const Skeleton& skeleton) {
  std::vector<Eigen::Vector3d> rest(static_cast<std::size_t>(skeleton.joint_count()));
  for (int i = 0; i < skeleton.joint_count(); ++i) {
    const Joint& joint = skeleton.joints[static_cast<std::size_t>(i)];
    rest[static_cast<std::size_t>(i)] =
        joint.parent < 0 ? Eigen::Vector3d::Zero().eval()
                         : (rest[static_cast<std::size_t>(joint.parent)] + joint.offset).eval();
  }
  return rest;
}

void check_estimate(const PoseEstimate& estimate, int joint_count) {
  const std::size_t k = static_cast<std::size_t>(joint_count);
  if (estimate.joint_positions.size() != k || estimate.twist_angles.size() != k ||
      estimate.frame_offsets.size() != k) {
    throw std::invalid_argument("pose estimate size disagrees with skeleton");
  }
}

} // namespace

std::string to_string(SolverMode mode) {
  return mode == SolverMode::kCorrected ? "corrected" : "naive";
}

SolverMode solver_mode_from_string(const std::string& text) {
  if (text == "corrected") {
    return SolverMode::kCorrected;
  }
  if (text == "naive") {
    return SolverMode::kNaive;
  }
  throw std::invalid_argument("unknown solver mode: " + text);
}

std::vector<Eigen::Vector3d> average_skeleton(std::span<const PoseEstimate> estimates) {
  if (estimates.empty()) {
    throw std::invalid_argument("cannot average an empty estimate span");
  }
  const std::size_t k = estimates.front().frame_offsets.size();
  std::vector<Eigen::Vector3d> mean(k, Eigen::Vector3d::Zero());
  for (const PoseEstimate& e : estimates) {
    if (e.frame_offsets.size() != k) {
      throw std::invalid_argument("estimates disagree on joint count");
    }
    for (std::size_t i = 0; i < k; ++i) {
      mean[i] += e.frame_offsets[i];
    }
  }
  for (Eigen::Vector3d& v : mean) {
    v /= static_cast<double>(estimates.size());
  }
  return mean;
}

RootSolve solve_root(std::span<const Eigen::Vector3d> estimated_positions,
                     const Skeleton& skeleton, std::span<const int> subset) {
  const int joint_count = skeleton.joint_count();
  if (static_cast<int>(estimated_positions.size()) != joint_count) {
    throw std::invalid_argument("estimated positions size disagrees with skeleton");
  }

  std::vector<int> indices(subset.begin(), subset.end());
  if (indices.empty()) {
    indices.push_back(0);
    for (int i = 1; i < joint_count; ++i) {
      if (skeleton.joints[static_cast<std::size_t>(i)].parent == 0) {
        indices.push_back(i);
      }
    }
  }
  for (int idx : indices) {
    if (idx < 0 || idx >= joint_count) {
      throw std::invalid_argument("root subset index out of range");
    }
  }

  const std::vector<Eigen::Vector3d> rest = rest_positions(skeleton);
  std::vector<Eigen::Vector3d> source;
  std::vector<Eigen::Vector3d> target;
  source.reserve(indices.size());
  target.reserve(indices.size());
  const Eigen::Vector3d root_estimate = estimated_positions[0];
  for (int idx : indices) {
    source.push_back(rest[static_cast<std::size_t>(idx)]);
    target.push_back(estimated_positions[static_cast<std::size_t>(idx)] - root_estimate);
  }

  RootSolve result;
  try {
    result.rotation = kabsch_rotation(source, target);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("rank deficient root");
  }
  result.translation = root_estimate;
  return result;
}

MotionFrame solve_frame(const PoseEstimate& estimate, const Skeleton& skeleton, SolverMode mode,
                        std::span<const int> root_subset) {
  const int joint_count = skeleton.joint_count();
  check_estimate(estimate, joint_count);
  const std::vector<std::vector<int>> children = skeleton.children();

  const RootSolve root = solve_root(estimate.joint_positions, skeleton, root_subset);

  MotionFrame frame;
  frame.root_translation = root.translation;
  frame.local_rotations.assign(static_cast<std::size_t>(joint_count), Eigen::Matrix3d::Identity());
  frame.local_rotations[0] = root.rotation;

  std::vector<Eigen::Vector3d> global_pos(static_cast<std::size_t>(joint_count));
  std::vector<Eigen::Matrix3d> global_rot(static_cast<std::size_t>(joint_count));
  global_pos[0] = root.translation;
  global_rot[0] = root.rotation;

  for (int i = 1; i < joint_count; ++i) {
    const Joint& joint = skeleton.joints[static_cast<std::size_t>(i)];
    const int parent = joint.parent;
    const Eigen::Matrix3d& parent_rot = global_rot[static_cast<std::size_t>(parent)];
    global_pos[static_cast<std::size_t>(i)] =
        global_pos[static_cast<std::size_t>(parent)] + parent_rot * joint.offset;

    Eigen::Matrix3d local = Eigen::Matrix3d::Identity();
    const std::vector<int>& kids = children[static_cast<std::size_t>(i)];
    if (kids.empty()) {
      // No bone to aim; apply the twist about the joint's own offset if any.
      if (joint.offset.norm() > 0.0) {
        local = rotation_about_axis(joint.offset.normalized(),
                                    estimate.twist_angles[static_cast<std::size_t>(i)]);
      }
    } else {
      const int child = kids.front(); // primary bone = first declared child
      const Eigen::Vector3d& bone = skeleton.joints[static_cast<std::size_t>(child)].offset;
      const Eigen::Vector3d estimated_dir =
          mode == SolverMode::kCorrected
              ? estimate.joint_positions[static_cast<std::size_t>(child)] -
                    global_pos[static_cast<std::size_t>(i)]
              : estimate.joint_positions[static_cast<std::size_t>(child)] -
                    estimate.joint_positions[static_cast<std::size_t>(i)];
      const Eigen::Matrix3d swing_world = swing_from_vectors(estimated_dir, parent_rot * bone);
      const Eigen::Matrix3d swing_local = parent_rot.transpose() * swing_world * parent_rot;
      local = swing_local * rotation_about_axis(bone.normalized(),
                                                estimate.twist_angles[static_cast<std::size_t>(i)]);
    }
    frame.local_rotations[static_cast<std::size_t>(i)] = local;
    global_rot[static_cast<std::size_t>(i)] = parent_rot * local;
  }
  return frame;
}

SolveResult solve_sequence(const PoseProvider& provider, const Skeleton& skeleton,
                           int frame_begin, int frame_end, SolverMode mode, double frame_rate,
                           std::span<const int> root_subset) {
  if (frame_begin < 0 || frame_end < frame_begin) {
    throw std::invalid_argument("invalid frame range");
  }
  if (frame_end > provider.frame_count()) {
    throw std::invalid_argument("frame range exceeds provider");
  }

  SolveResult result;
  result.skeleton = skeleton;
  result.motion.frame_rate = frame_rate;
  if (frame_begin == frame_end) {
    return result;
  }

  std::vector<PoseEstimate> estimates;
  estimates.reserve(static_cast<std::size_t>(frame_end - frame_begin));
  for (int f = frame_begin; f < frame_end; ++f) {
    estimates.push_back(provider.estimate(f));
  }

  const std::vector<Eigen::Vector3d> offsets = average_skeleton(estimates);
  if (offsets.size() != static_cast<std::size_t>(skeleton.joint_count())) {
    throw std::invalid_argument("provider joint count disagrees with skeleton");
  }
  for (int i = 0; i < skeleton.joint_count(); ++i) {
    result.skeleton.joints[static_cast<std::size_t>(i)].offset = offsets[static_cast<std::size_t>(i)];
  }

  result.motion.frames.reserve(estimates.size());
  for (std::size_t idx = 0; idx < estimates.size(); ++idx) {
    try {
      result.motion.frames.push_back(
          solve_frame(estimates[idx], result.skeleton, mode, root_subset));
    } catch (const std::exception& err) {
      throw std::runtime_error("frame " + std::to_string(frame_begin + static_cast<int>(idx)) +
                               ": " + err.what());
    }
  }
  return result;
}

} // namespace mocap

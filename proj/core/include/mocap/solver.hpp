#pragma once

#include "mocap/kinematics.hpp"
#include "mocap/types.hpp"

#include <Eigen/Core>

#include <span>
#include <string>
#include <vector>

namespace mocap {

/// Per-frame joint-space estimate the solver consumes: world positions, a
/// twist angle about each joint's primary bone axis, and that frame's view of
/// the skeleton offsets (averaged over a sequence before solving).
struct PoseEstimate {
  std::vector<Eigen::Vector3d> joint_positions;
  std::vector<double> twist_angles; // radians, (-pi, pi]
  std::vector<Eigen::Vector3d> frame_offsets;
};

class PoseProvider {
public:
  virtual ~PoseProvider() = default;

  virtual int frame_count() const = 0;
  virtual PoseEstimate estimate(int frame_index) const = 0;
};

/// kCorrected re-aims every bone from the solver's own running joint
/// positions, so upstream angular error cannot compound down a chain; kNaive
/// aims between estimated positions directly and accumulates it.
enum class SolverMode {
  kCorrected,
  kNaive,
};

std::string to_string(SolverMode mode);
SolverMode solver_mode_from_string(const std::string& text);

/// Component-wise mean of the per-frame offset estimates.
std::vector<Eigen::Vector3d> average_skeleton(std::span<const PoseEstimate> estimates);

struct RootSolve {
  Eigen::Matrix3d rotation;
  Eigen::Vector3d translation;
};

/// Rigid registration of the template rest positions of `subset` onto the
/// estimated positions. An empty subset defaults to the root plus its direct
/// children. Throws std::invalid_argument("rank deficient root") when the
/// subset cannot pin down a rotation.
RootSolve solve_root(std::span<const Eigen::Vector3d> estimated_positions,
                     const Skeleton& skeleton, std::span<const int> subset = {});

/// One frame of hybrid IK: root via rigid registration, then per joint a
/// shortest-arc swing taking the template bone onto the estimated bone
/// direction, composed with the provided twist about the bone axis. Leaf
/// joints get identity swing and twist about their own offset axis.
MotionFrame solve_frame(const PoseEstimate& estimate, const Skeleton& skeleton, SolverMode mode,
                        std::span<const int> root_subset = {});

struct SolveResult {
  Motion motion;
  Skeleton skeleton; // template with offsets replaced by the sequence average
};

/// Solves frames [frame_begin, frame_end) from the provider against a
/// skeleton whose offsets are averaged across the range first. Errors from
/// individual frames are rethrown with the frame index prepended.
SolveResult solve_sequence(const PoseProvider& provider, const Skeleton& skeleton,
                           int frame_begin, int frame_end, SolverMode mode, double frame_rate,
                           std::span<const int> root_subset = {});

} // namespace mocap

#pragma once

#include "mocap/assignment.hpp"
#include "mocap/simulate.hpp"
#include "mocap/solver.hpp"
#include "mocap/tracklet.hpp"
#include "mocap/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <vector>

namespace mocap {

/// Source of raw (pre-augmentation) point-to-label log-scores per frame.
class ConfidenceProvider {
public:
  virtual ~ConfidenceProvider() = default;

  virtual int frame_count() const = 0;
  virtual const Eigen::MatrixXd& log_scores(int frame_index) const = 0;
};

struct OracleConfidenceParams {
  double margin = 6.0;      // logit bump on the true label
  double noise_sigma = 0.0; // gaussian noise on every logit
  double temperature = 1.0; // divides all logits; > 1 flattens the scores
  std::uint64_t seed = 0;
};

/// Scores built from the simulation correspondence: the true label of each
/// point gets `margin`, everything gets gaussian noise, and the whole logit
/// is divided by the temperature. Ghost rows carry noise only. All frames
/// are drawn once at construction, so repeated reads are stable.
class OracleConfidenceProvider final : public ConfidenceProvider {
public:
  OracleConfidenceProvider(std::span<const std::vector<int>> correspondence, int label_count,
                           const OracleConfidenceParams& params);

  int frame_count() const override { return static_cast<int>(frames_.size()); }
  const Eigen::MatrixXd& log_scores(int frame_index) const override;

private:
  std::vector<Eigen::MatrixXd> frames_;
};

class FileConfidenceProvider final : public ConfidenceProvider {
public:
  explicit FileConfidenceProvider(std::vector<Eigen::MatrixXd> frames)
      : frames_(std::move(frames)) {}

  int frame_count() const override { return static_cast<int>(frames_.size()); }
  const Eigen::MatrixXd& log_scores(int frame_index) const override;

private:
  std::vector<Eigen::MatrixXd> frames_;
};

class FeatureProvider {
public:
  virtual ~FeatureProvider() = default;

  virtual FeatureSet features(std::span<const FramePointCloud> frames) const = 0;
};

class BaselineFeatureProvider final : public FeatureProvider {
public:
  FeatureSet features(std::span<const FramePointCloud> frames) const override;
};

/// One-hot descriptor of the true label (zero vector for ghosts) plus
/// gaussian noise; stands in for a learned per-point embedding.
class OracleFeatureProvider final : public FeatureProvider {
public:
  OracleFeatureProvider(std::span<const std::vector<int>> correspondence, int label_count,
                        double noise_sigma, std::uint64_t seed);

  FeatureSet features(std::span<const FramePointCloud> frames) const override;

private:
  FeatureSet all_;
};

class FileFeatureProvider final : public FeatureProvider {
public:
  explicit FileFeatureProvider(FeatureSet features) : all_(std::move(features)) {}

  FeatureSet features(std::span<const FramePointCloud> frames) const override;

private:
  FeatureSet all_;
};

struct OraclePoseParams {
  double position_sigma = 0.0; // meters, on joint positions
  double twist_sigma = 0.0;    // radians, on twist angles
  double offset_sigma = 0.0;   // meters, on per-frame offsets
  std::uint64_t seed = 0;
};

/// Ground-truth joint positions, twists and offsets from a known motion,
/// optionally corrupted by gaussian noise. Twists come from the swing/twist
/// decomposition of each true local rotation about its primary bone axis.
class OraclePoseProvider final : public PoseProvider {
public:
  OraclePoseProvider(const Skeleton& skeleton, const Motion& motion,
                     const OraclePoseParams& params);

  int frame_count() const override { return static_cast<int>(estimates_.size()); }
  PoseEstimate estimate(int frame_index) const override;

private:
  std::vector<PoseEstimate> estimates_;
};

/// Joint positions re-derived from jittered marker positions: every marker
/// votes for its joint with its local offset subtracted (using the true
/// orientation), votes are averaged. Mirrors feeding the solver positions
/// that inherit marker-level jitter. Twists and offsets stay exact. The
/// jitter fields only scale draws made either way, so sweeping them keeps
/// the random stream aligned.
class MarkerDerivedPoseProvider final : public PoseProvider {
public:
  MarkerDerivedPoseProvider(const Skeleton& skeleton, const MarkerLayout& layout,
                            const Motion& motion, double uniform_halfwidth,
                            double gaussian_sigma, std::uint64_t seed);

  int frame_count() const override { return static_cast<int>(estimates_.size()); }
  PoseEstimate estimate(int frame_index) const override;

private:
  std::vector<PoseEstimate> estimates_;
};

class FilePoseProvider final : public PoseProvider {
public:
  explicit FilePoseProvider(std::vector<PoseEstimate> estimates)
      : estimates_(std::move(estimates)) {}

  int frame_count() const override { return static_cast<int>(estimates_.size()); }
  PoseEstimate estimate(int frame_index) const override;

private:
  std::vector<PoseEstimate> estimates_;
};

/// Twist angle of each joint's true local rotation about its primary bone
/// axis (first child's offset; a leaf uses its own offset). Joints with no
/// usable axis, including the root, report zero.
std::vector<double> true_twists(const Skeleton& skeleton, const MotionFrame& frame);

} // namespace mocap

#pragma once

#include "mocap/assignment.hpp"
#include "mocap/metrics.hpp"
#include "mocap/solver.hpp"
#include "mocap/tracklet.hpp"
#include "mocap/types.hpp"

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace mocap {

/// File formats. Documents (.json) hold one pretty-printed object; sequence
/// files (.jsonl) hold one compact object per line carrying its frame index
/// "t". Loaders throw IoError for unreadable/unparseable files and DataError
/// for schema or invariant violations.

void save_skeleton(const std::filesystem::path& path, const Skeleton& skeleton);
Skeleton load_skeleton(const std::filesystem::path& path);

void save_layout(const std::filesystem::path& path, const MarkerLayout& layout);
MarkerLayout load_layout(const std::filesystem::path& path);

void save_motion(const std::filesystem::path& path, const Motion& motion);
Motion load_motion(const std::filesystem::path& path);

// {"t", "points": [[x,y,z]...], "parts": [...]}
void save_point_clouds(const std::filesystem::path& path, std::span<const FramePointCloud> frames);
std::vector<FramePointCloud> load_point_clouds(const std::filesystem::path& path);

// {"t", "positions": [[x,y,z]...], "visible": [...]}
void save_markers(const std::filesystem::path& path, const LabeledMarkers& markers);
LabeledMarkers load_markers(const std::filesystem::path& path);

// {"t", "origin": [...]}; -1 marks a ghost point
void save_correspondence(const std::filesystem::path& path,
                         std::span<const std::vector<int>> correspondence);
std::vector<std::vector<int>> load_correspondence(const std::filesystem::path& path);

// {"t", "scores": [[...]...]}; injection point for externally computed scores
void save_score_frames(const std::filesystem::path& path,
                       std::span<const Eigen::MatrixXd> frames);
std::vector<Eigen::MatrixXd> load_score_frames(const std::filesystem::path& path);

// {"t", "features": [[...]...]}
void save_features(const std::filesystem::path& path, const FeatureSet& features);
FeatureSet load_features(const std::filesystem::path& path);

// {"t", "positions", "twist_cos_sin", "offsets"}; twists cross the file
// boundary as (cos, sin) pairs and are converted to angles on load.
void save_pose_estimates(const std::filesystem::path& path,
                         std::span<const PoseEstimate> estimates);
std::vector<PoseEstimate> load_pose_estimates(const std::filesystem::path& path);

// {"t", "labels": [...], "confidences": [...]}; -1 marks null
void save_labelings(const std::filesystem::path& path, std::span<const FrameLabeling> labelings);
std::vector<FrameLabeling> load_labelings(const std::filesystem::path& path);

/// Debug dump of one tracklet: members carry global (frame, point) pairs.
struct TrackletRecord {
  int id = 0;
  std::vector<std::array<int, 2>> members;
  int label = -1;
  double confidence = 0.0;
};

void save_tracklets(const std::filesystem::path& path, std::span<const TrackletRecord> records);
std::vector<TrackletRecord> load_tracklets(const std::filesystem::path& path);

void save_report(const std::filesystem::path& path, const LabelingReport& report);
void save_report(const std::filesystem::path& path, const SolvingReport& report,
                 const Skeleton& skeleton);

void save_text(const std::filesystem::path& path, const std::string& text);

} // namespace mocap

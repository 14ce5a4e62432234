#pragma once

#include "mocap/assignment.hpp"
#include "mocap/types.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mocap {

/// Outcome tallies over every scored point. A point is a hit when its
/// predicted label equals its origin marker, a swap when it got some other
/// label, a false null when a real marker was labeled null. Ghost points are
/// counted by whether they were (wrongly) given a label or (rightly) nulled.
struct ConfusionCounts {
  std::int64_t hits = 0;
  std::int64_t swaps = 0;
  std::int64_t false_nulls = 0;
  std::int64_t ghosts_accepted = 0;
  std::int64_t ghosts_rejected = 0;

  std::int64_t total() const {
    return hits + swaps + false_nulls + ghosts_accepted + ghosts_rejected;
  }
};

struct PartScores {
  ConfusionCounts counts;
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double accuracy = 0.0; // hits / real points of the part
};

struct LabelingReport {
  ConfusionCounts counts;
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double accuracy = 0.0;                  // correct outcomes / all points, ghosts included
  double accuracy_excluding_ghosts = 0.0; // hits / real points
  std::vector<std::pair<Part, PartScores>> per_part; // body / left hand / right hand
};

/// Scores predictions against per-point origins (marker index or -1 for a
/// ghost). F1 is micro-averaged: true positives are hits, false positives
/// wrong or ghost-applied labels, false negatives missed real markers.
LabelingReport labeling_metrics(std::span<const FrameLabeling> predicted,
                                std::span<const std::vector<int>> correspondence,
                                const MarkerLayout& layout);

struct SolvingReport {
  double mpjpe_cm = 0.0;
  double mpjre_deg = 0.0;
  std::vector<double> per_joint_mpjpe_cm;
  std::vector<double> per_joint_mpjre_deg;
  bool leaves_excluded = true; // whether mpjre_deg skipped leaf joints
};

/// Compares solved motion against ground truth over matching topologies:
/// mean per-joint position error (via forward kinematics, centimeters) and
/// mean per-joint geodesic rotation error of local rotations (degrees). Leaf
/// rotations steer nothing observable, so the rotation aggregate skips
/// leaves by default; the root is always scored.
SolvingReport solving_metrics(const Motion& solved, const Skeleton& solved_skeleton,
                              const Motion& truth, const Skeleton& truth_skeleton,
                              bool exclude_leaf_rotations = true);

/// Fixed-width human-readable tables.
std::string format_report(const LabelingReport& report);
std::string format_report(const SolvingReport& report, const Skeleton& skeleton);

} // namespace mocap

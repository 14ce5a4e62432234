#include "mocap/metrics.hpp"

#include "mocap/error.hpp"
#include "mocap/kinematics.hpp"
#include "mocap/rotation.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace mocap {
namespace {

double ratio(std::int64_t num, std::int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double f1_from(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
  const std::int64_t den = 2 * tp + fp + fn;
  return den == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(den);
}

} // namespace

LabelingReport labeling_metrics(std::span<const FrameLabeling> predicted,
                                std::span<const std::vector<int>> correspondence,
                                const MarkerLayout& layout) {
  if (predicted.size() != correspondence.size()) {
    throw DataError("prediction and correspondence frame counts differ");
  }
  const int marker_count = static_cast<int>(layout.markers.size());

  LabelingReport report;
  struct PartTally {
    ConfusionCounts counts; // tallied by the point's true part
    std::int64_t predicted_wrong = 0; // predictions OF this part's labels that were wrong
  };
  PartTally tally[3]; // body, left hand, right hand
  auto slot = [](Part p) -> int {
    switch (p) {
    case Part::kBody:
      return 0;
    case Part::kLeftHand:
      return 1;
    case Part::kRightHand:
      return 2;
    case Part::kUnknown:
      break;
    }
    return -1;
  };

  for (std::size_t f = 0; f < predicted.size(); ++f) {
    const FrameLabeling& frame = predicted[f];
    const std::vector<int>& truth = correspondence[f];
    if (frame.labels.size() != truth.size()) {
      throw DataError("frame " + std::to_string(f) + ": point counts differ");
    }
    for (std::size_t p = 0; p < truth.size(); ++p) {
      const int want = truth[p];
      const int got = frame.labels[p];
      if (want >= marker_count || got >= marker_count) {
        throw DataError("label index outside layout");
      }
      const int true_slot = want >= 0 ? slot(layout.markers[static_cast<std::size_t>(want)].part) : -1;
      if (want < 0) {
        if (got < 0) {
          report.counts.ghosts_rejected += 1;
        } else {
          report.counts.ghosts_accepted += 1;
        }
      } else if (got == want) {
        report.counts.hits += 1;
        if (true_slot >= 0) {
          tally[true_slot].counts.hits += 1;
        }
      } else if (got < 0) {
        report.counts.false_nulls += 1;
        if (true_slot >= 0) {
          tally[true_slot].counts.false_nulls += 1;
        }
      } else {
        report.counts.swaps += 1;
        if (true_slot >= 0) {
          tally[true_slot].counts.swaps += 1;
        }
      }
      if (got >= 0 && got != want) {
        const int got_slot = slot(layout.markers[static_cast<std::size_t>(got)].part);
        if (got_slot >= 0) {
          tally[got_slot].predicted_wrong += 1;
        }
      }
    }
  }

  const ConfusionCounts& c = report.counts;
  const std::int64_t fp = c.swaps + c.ghosts_accepted;
  const std::int64_t fn = c.swaps + c.false_nulls;
  report.precision = ratio(c.hits, c.hits + fp);
  report.recall = ratio(c.hits, c.hits + fn);
  report.f1 = f1_from(c.hits, fp, fn);
  report.accuracy = ratio(c.hits + c.ghosts_rejected, c.total());
  report.accuracy_excluding_ghosts = ratio(c.hits, c.hits + c.swaps + c.false_nulls);

  const Part parts[3] = {Part::kBody, Part::kLeftHand, Part::kRightHand};
  for (int s = 0; s < 3; ++s) {
    const ConfusionCounts& pc = tally[s].counts;
    if (pc.total() == 0 && tally[s].predicted_wrong == 0) {
      continue;
    }
    PartScores scores;
    scores.counts = pc;
    const std::int64_t part_fp = tally[s].predicted_wrong;
    const std::int64_t part_fn = pc.swaps + pc.false_nulls;
    scores.precision = ratio(pc.hits, pc.hits + part_fp);
    scores.recall = ratio(pc.hits, pc.hits + part_fn);
    scores.f1 = f1_from(pc.hits, part_fp, part_fn);
    scores.accuracy = ratio(pc.hits, pc.total());
    report.per_part.emplace_back(parts[s], scores);
  }
  return report;
}

SolvingReport solving_metrics(const Motion& solved, const Skeleton& solved_skeleton,
                              const Motion& truth, const Skeleton& truth_skeleton,
                              bool exclude_leaf_rotations) {
  const int joint_count = truth_skeleton.joint_count();
  if (solved_skeleton.joint_count() != joint_count) {
    throw DataError("skeleton joint counts differ");
  }
  for (int j = 0; j < joint_count; ++j) {
    if (solved_skeleton.joints[static_cast<std::size_t>(j)].parent !=
        truth_skeleton.joints[static_cast<std::size_t>(j)].parent) {
      throw DataError("skeleton topologies differ");
    }
  }
  if (solved.frames.size() != truth.frames.size()) {
    throw DataError("motion frame counts differ");
  }
  if (solved.frames.empty()) {
    throw DataError("cannot score an empty motion");
  }

  SolvingReport report;
  report.leaves_excluded = exclude_leaf_rotations;
  report.per_joint_mpjpe_cm.assign(static_cast<std::size_t>(joint_count), 0.0);
  report.per_joint_mpjre_deg.assign(static_cast<std::size_t>(joint_count), 0.0);

  for (std::size_t f = 0; f < truth.frames.size(); ++f) {
    const FkPose solved_pose = forward_kinematics(solved_skeleton, solved.frames[f]);
    const FkPose truth_pose = forward_kinematics(truth_skeleton, truth.frames[f]);
    for (int j = 0; j < joint_count; ++j) {
      const std::size_t js = static_cast<std::size_t>(j);
      report.per_joint_mpjpe_cm[js] +=
          (solved_pose.positions[js] - truth_pose.positions[js]).norm();
      report.per_joint_mpjre_deg[js] +=
          geodesic_angle(solved.frames[f].local_rotations[js], truth.frames[f].local_rotations[js]);
    }
  }

  const double frames = static_cast<double>(truth.frames.size());
  double position_sum = 0.0;
  double rotation_sum = 0.0;
  int rotation_joints = 0;
  for (int j = 0; j < joint_count; ++j) {
    const std::size_t js = static_cast<std::size_t>(j);
    report.per_joint_mpjpe_cm[js] = report.per_joint_mpjpe_cm[js] / frames * 100.0;
    report.per_joint_mpjre_deg[js] =
        report.per_joint_mpjre_deg[js] / frames * 180.0 / std::numbers::pi;
    position_sum += report.per_joint_mpjpe_cm[js];
    // The root is always scored: even when it has no child bone its
    // orientation is pinned by the registration stage.
    if (j == 0 || !exclude_leaf_rotations || !truth_skeleton.is_leaf(j)) {
      rotation_sum += report.per_joint_mpjre_deg[js];
      rotation_joints += 1;
    }
  }
  report.mpjpe_cm = position_sum / static_cast<double>(joint_count);
  report.mpjre_deg = rotation_sum / static_cast<double>(rotation_joints);
  return report;
}

std::string format_report(const LabelingReport& report) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << std::left << std::setw(12) << "section" << std::right << std::setw(10) << "f1"
      << std::setw(10) << "prec" << std::setw(10) << "recall" << std::setw(10) << "acc"
      << std::setw(10) << "points" << '\n';
  auto row = [&out](const std::string& name, double f1, double precision, double recall,
                    double accuracy, std::int64_t points) {
    out << std::left << std::setw(12) << name << std::right << std::setw(10) << f1
        << std::setw(10) << precision << std::setw(10) << recall << std::setw(10) << accuracy
        << std::setw(10) << points << '\n';
  };
  row("overall", report.f1, report.precision, report.recall, report.accuracy,
      report.counts.total());
  for (const auto& [part, scores] : report.per_part) {
    row(to_string(part), scores.f1, scores.precision, scores.recall, scores.accuracy,
        scores.counts.total());
  }
  out << "hits " << report.counts.hits << "  swaps " << report.counts.swaps << "  false_nulls "
      << report.counts.false_nulls << "  ghosts_accepted " << report.counts.ghosts_accepted
      << "  ghosts_rejected " << report.counts.ghosts_rejected << '\n';
  out << "accuracy_excluding_ghosts " << report.accuracy_excluding_ghosts << '\n';
  return out.str();
}

std::string format_report(const SolvingReport& report, const Skeleton& skeleton) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6);
  out << "mpjpe_cm " << report.mpjpe_cm << "  mpjre_deg " << report.mpjre_deg
      << (report.leaves_excluded ? "  (leaf rotations excluded)" : "") << '\n';
  out << std::left << std::setw(16) << "joint" << std::right << std::setw(14) << "mpjpe_cm"
      << std::setw(14) << "mpjre_deg" << '\n';
  for (std::size_t j = 0; j < report.per_joint_mpjpe_cm.size(); ++j) {
    const std::string& name = j < skeleton.joints.size() ? skeleton.joints[j].name : "?";
    out << std::left << std::setw(16) << name << std::right << std::setw(14)
        << report.per_joint_mpjpe_cm[j] << std::setw(14) << report.per_joint_mpjre_deg[j] << '\n';
  }
  return out.str();
}

} // namespace mocap

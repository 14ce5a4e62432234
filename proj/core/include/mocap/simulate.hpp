#pragma once

#include "mocap/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mocap {

/// Corruption applied to rendered markers, in simulation order: occlusion,
/// jitter, ghosts, optional within-frame shuffle. All randomness derives from
/// `seed` alone, so equal configs reproduce byte-identical output, and the
/// jitter fields only scale draws that are made either way — sweeping them
/// leaves occlusion patterns and ghost placement untouched.
struct NoiseConfig {
  double occlusion_body = 0.0;       // per marker-frame drop probability
  double occlusion_left_hand = 0.0;
  double occlusion_right_hand = 0.0;
  double ghost_rate = 0.0;           // expected ghosts per frame (Poisson)
  double jitter_sigma = 0.0;         // isotropic gaussian, meters
  double jitter_uniform_halfwidth = 0.0; // per-axis uniform, meters
  bool shuffle = false;
  std::uint64_t seed = 0;

  double occlusion_for(Part part) const;
};

void validate(const NoiseConfig& config);

enum class SkeletonPreset {
  kBody22,
  kHand16,
  kFullBody54,
};

std::string to_string(SkeletonPreset preset);
SkeletonPreset preset_from_string(const std::string& text);

Skeleton synth_skeleton(SkeletonPreset preset);

/// Marker placement for a preset skeleton: two markers per body joint,
/// nineteen per hand (palm, wrist and one per phalanx).
MarkerLayout synth_layout(SkeletonPreset preset, const Skeleton& skeleton);

/// Band-limited random motion: each rotation channel sums three sinusoids
/// with bounded total amplitude (60 deg for body joints, 45 deg for hand
/// joints, identified by the lh_/rh_ name prefix or a wrist root), the root
/// translation drifts on two slow sinusoids per axis. Deterministic in seed.
Motion synth_motion(const Skeleton& skeleton, double duration_s, double frame_rate,
                    std::uint64_t seed);

/// Forward-kinematic marker positions for every frame; everything visible.
LabeledMarkers render_markers(const Skeleton& skeleton, const MarkerLayout& layout,
                              const Motion& motion);

/// Unlabeled point clouds plus, per output point, the index of the marker it
/// came from (-1 for ghosts).
struct CorruptResult {
  std::vector<FramePointCloud> frames;
  std::vector<std::vector<int>> correspondence;
};

/// Ghosts fall uniformly inside the frame's marker bounding box inflated by
/// 5% of its extent per side (at least 0.1 m per axis).
CorruptResult corrupt(const LabeledMarkers& markers, const MarkerLayout& layout,
                      const NoiseConfig& config);

/// Everything the evaluation side needs to score a run.
struct GroundTruthBundle {
  Skeleton skeleton;
  MarkerLayout layout;
  Motion motion;
  LabeledMarkers markers; // clean, pre-corruption
  std::vector<std::vector<int>> correspondence;
};

struct SimulationResult {
  GroundTruthBundle truth;
  std::vector<FramePointCloud> frames;
};

/// synth_skeleton + synth_layout + synth_motion + render_markers + corrupt in
/// one call. Motion uses motion_seed; corruption uses noise.seed.
SimulationResult simulate_sequence(SkeletonPreset preset, double duration_s, double frame_rate,
                                   std::uint64_t motion_seed, const NoiseConfig& noise);

} // namespace mocap

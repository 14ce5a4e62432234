#include "mocap/simulate.hpp"

#include "mocap/error.hpp"
#include "mocap/kinematics.hpp"
#include "mocap/rng.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace mocap {
namespace {

constexpr double kBodyAmplitudeDeg = 60.0;
constexpr double kHandAmplitudeDeg = 45.0;
constexpr double kGhostBoxInflation = 0.05; // fraction of extent added per side
constexpr double kGhostBoxMinExtent = 0.1;  // meters

int add_joint(Skeleton& s, std::string name, int parent, const Eigen::Vector3d& offset) {
  s.joints.push_back({std::move(name), parent, offset});
  return static_cast<int>(s.joints.size()) - 1;
}

Skeleton body22() {
  Skeleton s;
  const int hips = add_joint(s, "hips", -1, {0, 0, 0});
  const int spine = add_joint(s, "spine", hips, {0, 0.10, 0});
  const int spine1 = add_joint(s, "spine1", spine, {0, 0.12, 0});
  const int spine2 = add_joint(s, "spine2", spine1, {0, 0.12, 0});
  const int neck = add_joint(s, "neck", spine2, {0, 0.12, 0});
  add_joint(s, "head", neck, {0, 0.10, 0});
  const int lsho = add_joint(s, "l_shoulder", spine2, {0.06, 0.09, 0});
  const int larm = add_joint(s, "l_arm", lsho, {0.12, 0, 0});
  const int lfore = add_joint(s, "l_forearm", larm, {0.26, 0, 0});
  add_joint(s, "l_hand", lfore, {0.25, 0, 0});
  const int rsho = add_joint(s, "r_shoulder", spine2, {-0.06, 0.09, 0});
  const int rarm = add_joint(s, "r_arm", rsho, {-0.12, 0, 0});
  const int rfore = add_joint(s, "r_forearm", rarm, {-0.26, 0, 0});
  add_joint(s, "r_hand", rfore, {-0.25, 0, 0});
  const int lup = add_joint(s, "l_upleg", hips, {0.09, -0.06, 0});
  const int lleg = add_joint(s, "l_leg", lup, {0, -0.42, 0});
  const int lfoot = add_joint(s, "l_foot", lleg, {0, -0.40, 0});
  add_joint(s, "l_toe", lfoot, {0, -0.07, 0.12});
  const int rup = add_joint(s, "r_upleg", hips, {-0.09, -0.06, 0});
  const int rleg = add_joint(s, "r_leg", rup, {0, -0.42, 0});
  const int rfoot = add_joint(s, "r_foot", rleg, {0, -0.40, 0});
  add_joint(s, "r_toe", rfoot, {0, -0.07, 0.12});
  return s;
}

// One hand, fingers along +x for side = +1 (right mirrors to -x).
void append_hand(Skeleton& s, const std::string& prefix, int parent, double side,
                 const Eigen::Vector3d& root_offset) {
  auto v = [side](double x, double y, double z) { return Eigen::Vector3d(side * x, y, z); };
  const int wrist = add_joint(s, prefix + "wrist", parent, root_offset);
  const int t1 = add_joint(s, prefix + "thumb_1", wrist, v(0.025, -0.010, 0.030));
  const int t2 = add_joint(s, prefix + "thumb_2", t1, v(0.035, 0, 0.015));
  add_joint(s, prefix + "thumb_3", t2, v(0.030, 0, 0.010));
  const int i1 = add_joint(s, prefix + "index_1", wrist, v(0.090, 0, 0.025));
  const int i2 = add_joint(s, prefix + "index_2", i1, v(0.040, 0, 0));
  add_joint(s, prefix + "index_3", i2, v(0.025, 0, 0));
  const int m1 = add_joint(s, prefix + "middle_1", wrist, v(0.095, 0, 0.005));
  const int m2 = add_joint(s, prefix + "middle_2", m1, v(0.045, 0, 0));
  add_joint(s, prefix + "middle_3", m2, v(0.028, 0, 0));
  const int r1 = add_joint(s, prefix + "ring_1", wrist, v(0.090, 0, -0.015));
  const int r2 = add_joint(s, prefix + "ring_2", r1, v(0.040, 0, 0));
  add_joint(s, prefix + "ring_3", r2, v(0.025, 0, 0));
  const int p1 = add_joint(s, prefix + "pinky_1", wrist, v(0.080, 0, -0.035));
  const int p2 = add_joint(s, prefix + "pinky_2", p1, v(0.030, 0, 0));
  add_joint(s, prefix + "pinky_3", p2, v(0.022, 0, 0));
}

Skeleton hand16() {
  Skeleton s;
  append_hand(s, "", -1, 1.0, {0, 0, 0});
  return s;
}

Skeleton fullbody54() {
  Skeleton s = body22();
  const int l_hand = s.find_joint("l_hand");
  const int r_hand = s.find_joint("r_hand");
  append_hand(s, "lh_", l_hand, 1.0, {0.02, 0, 0});
  append_hand(s, "rh_", r_hand, -1.0, {-0.02, 0, 0});
  return s;
}

bool is_hand_joint(const Skeleton& skeleton, const std::string& name) {
  return name.rfind("lh_", 0) == 0 || name.rfind("rh_", 0) == 0 ||
         skeleton.joints.front().name == "wrist";
}

Part hand_part(const std::string& joint_name, Part standalone) {
  if (joint_name.rfind("lh_", 0) == 0) {
    return Part::kLeftHand;
  }
  if (joint_name.rfind("rh_", 0) == 0) {
    return Part::kRightHand;
  }
  return standalone;
}

void add_body_markers(MarkerLayout& layout, const Skeleton& skeleton, int joint) {
  // Two markers per joint on roughly opposite sides, direction varied per
  // joint so paired markers do not line up across the skeleton.
  const double angle = 0.7 * static_cast<double>(joint);
  const Eigen::Vector3d radial(std::cos(angle), 0.25, std::sin(angle));
  const Eigen::Vector3d first = 0.05 * radial;
  const Eigen::Vector3d second = -first + Eigen::Vector3d(0, 0.03, 0);
  const std::string& name = skeleton.joints[static_cast<std::size_t>(joint)].name;
  layout.markers.push_back({name + "_m1", joint, first, Part::kBody});
  layout.markers.push_back({name + "_m2", joint, second, Part::kBody});
}

void add_hand_markers(MarkerLayout& layout, const Skeleton& skeleton, const std::string& prefix,
                      Part standalone) {
  const int wrist = skeleton.find_joint(prefix + "wrist");
  const Part part = hand_part(prefix + "wrist", standalone);
  const std::string& wrist_name = skeleton.joints[static_cast<std::size_t>(wrist)].name;
  const double side = skeleton.joints[static_cast<std::size_t>(
                                  skeleton.find_joint(prefix + "middle_1"))]
                              .offset.x() >= 0
                          ? 1.0
                          : -1.0;
  auto v = [side](double x, double y, double z) { return Eigen::Vector3d(side * x, y, z); };
  layout.markers.push_back({wrist_name + "_in", wrist, v(0.030, 0.012, 0.013), part});
  layout.markers.push_back({wrist_name + "_out", wrist, v(0.030, 0.012, -0.013), part});
  layout.markers.push_back({wrist_name + "_palm", wrist, v(0.055, 0.012, 0.0), part});
  layout.markers.push_back({wrist_name + "_base", wrist, v(0.012, 0.012, 0.0), part});
  for (const char* finger : {"thumb", "index", "middle", "ring", "pinky"}) {
    for (int seg = 1; seg <= 3; ++seg) {
      const std::string joint_name = prefix + finger + "_" + std::to_string(seg);
      const int joint = skeleton.find_joint(joint_name);
      layout.markers.push_back({joint_name + "_mk", joint, v(0.012, 0.008, 0.002), part});
    }
  }
}

} // namespace

double NoiseConfig::occlusion_for(Part part) const {
  switch (part) {
  case Part::kBody:
    return occlusion_body;
  case Part::kLeftHand:
    return occlusion_left_hand;
  case Part::kRightHand:
    return occlusion_right_hand;
  case Part::kUnknown:
    break;
  }
  return 0.0;
}

void validate(const NoiseConfig& config) {
  auto probability = [](double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw DataError(std::string(what) + " must be a probability in [0, 1]");
    }
  };
  probability(config.occlusion_body, "occlusion_body");
  probability(config.occlusion_left_hand, "occlusion_left_hand");
  probability(config.occlusion_right_hand, "occlusion_right_hand");
  if (!(config.ghost_rate >= 0.0)) {
    throw DataError("ghost_rate must be non-negative");
  }
  if (!(config.jitter_sigma >= 0.0) || !(config.jitter_uniform_halfwidth >= 0.0)) {
    throw DataError("jitter magnitudes must be non-negative");
  }
}

std::string to_string(SkeletonPreset preset) {
  switch (preset) {
  case SkeletonPreset::kBody22:
    return "body22";
  case SkeletonPreset::kHand16:
    return "hand16";
  case SkeletonPreset::kFullBody54:
    return "fullbody54";
  }
  throw std::invalid_argument("unknown preset");
}

SkeletonPreset preset_from_string(const std::string& text) {
  if (text == "body22") {
    return SkeletonPreset::kBody22;
  }
  if (text == "hand16") {
    return SkeletonPreset::kHand16;
  }
  if (text == "fullbody54") {
    return SkeletonPreset::kFullBody54;
  }
  throw std::invalid_argument("unknown skeleton preset: " + text);
}

Skeleton synth_skeleton(SkeletonPreset preset) {
  Skeleton s;
  switch (preset) {
  case SkeletonPreset::kBody22:
    s = body22();
    break;
  case SkeletonPreset::kHand16:
    s = hand16();
    break;
  case SkeletonPreset::kFullBody54:
    s = fullbody54();
    break;
  }
  validate(s);
  return s;
}

MarkerLayout synth_layout(SkeletonPreset preset, const Skeleton& skeleton) {
  MarkerLayout layout;
  switch (preset) {
  case SkeletonPreset::kBody22:
    for (int j = 0; j < skeleton.joint_count(); ++j) {
      add_body_markers(layout, skeleton, j);
    }
    break;
  case SkeletonPreset::kHand16:
    add_hand_markers(layout, skeleton, "", Part::kRightHand);
    break;
  case SkeletonPreset::kFullBody54:
    for (int j = 0; j < skeleton.joint_count(); ++j) {
      const std::string& name = skeleton.joints[static_cast<std::size_t>(j)].name;
      if (name.rfind("lh_", 0) == 0 || name.rfind("rh_", 0) == 0) {
        continue; // hand joints get the dedicated hand set below
      }
      add_body_markers(layout, skeleton, j);
    }
    add_hand_markers(layout, skeleton, "lh_", Part::kLeftHand);
    add_hand_markers(layout, skeleton, "rh_", Part::kRightHand);
    break;
  }
  validate(layout, skeleton);
  return layout;
}

Motion synth_motion(const Skeleton& skeleton, double duration_s, double frame_rate,
                    std::uint64_t seed) {
  if (!(duration_s > 0.0) || !(frame_rate > 0.0)) {
    throw std::invalid_argument("duration and frame rate must be positive");
  }
  const int frame_count = std::max(1, static_cast<int>(std::lround(duration_s * frame_rate)));
  const int joint_count = skeleton.joint_count();

  Rng rng(seed);
  constexpr int kSinusoids = 3;
  struct Channel {
    double amp[kSinusoids];
    double freq[kSinusoids];
    double phase[kSinusoids];
  };
  // Parameter draw order is fixed (joint, then channel, then sinusoid) so the
  // same seed always produces the same motion.
  std::vector<Channel> channels(static_cast<std::size_t>(joint_count) * 3);
  for (int j = 0; j < joint_count; ++j) {
    const bool hand = is_hand_joint(skeleton, skeleton.joints[static_cast<std::size_t>(j)].name);
    const double cap = (hand ? kHandAmplitudeDeg : kBodyAmplitudeDeg) * std::numbers::pi / 180.0;
    for (int c = 0; c < 3; ++c) {
      Channel& ch = channels[static_cast<std::size_t>(j * 3 + c)];
      double raw[kSinusoids];
      double total = 0.0;
      for (double& r : raw) {
        r = rng.uniform();
        total += r;
      }
      const double activity = 0.2 + 0.8 * rng.uniform();
      for (int k = 0; k < kSinusoids; ++k) {
        ch.amp[k] = total > 0.0 ? cap * activity * raw[k] / total : 0.0;
        ch.freq[k] = 0.1 + 1.9 * rng.uniform();
        ch.phase[k] = 2.0 * std::numbers::pi * rng.uniform();
      }
    }
  }
  struct Drift {
    double amp[2];
    double freq[2];
    double phase[2];
  };
  Drift drift[3];
  for (Drift& d : drift) {
    for (int k = 0; k < 2; ++k) {
      d.amp[k] = 0.05 + 0.25 * rng.uniform();
      d.freq[k] = 0.05 + 0.45 * rng.uniform();
      d.phase[k] = 2.0 * std::numbers::pi * rng.uniform();
    }
  }

  auto eval = [](const double* amp, const double* freq, const double* phase, int n, double t) {
    double value = 0.0;
    for (int k = 0; k < n; ++k) {
      value += amp[k] * std::sin(2.0 * std::numbers::pi * freq[k] * t + phase[k]);
    }
    return value;
  };

  Motion motion;
  motion.frame_rate = frame_rate;
  motion.frames.resize(static_cast<std::size_t>(frame_count));
  for (int f = 0; f < frame_count; ++f) {
    const double t = static_cast<double>(f) / frame_rate;
    MotionFrame& frame = motion.frames[static_cast<std::size_t>(f)];
    for (int a = 0; a < 3; ++a) {
      frame.root_translation(a) = eval(drift[a].amp, drift[a].freq, drift[a].phase, 2, t);
    }
    frame.local_rotations.resize(static_cast<std::size_t>(joint_count));
    for (int j = 0; j < joint_count; ++j) {
      double angle[3];
      for (int c = 0; c < 3; ++c) {
        const Channel& ch = channels[static_cast<std::size_t>(j * 3 + c)];
        angle[c] = eval(ch.amp, ch.freq, ch.phase, kSinusoids, t);
      }
      frame.local_rotations[static_cast<std::size_t>(j)] =
          (Eigen::AngleAxisd(angle[0], Eigen::Vector3d::UnitX()) *
           Eigen::AngleAxisd(angle[1], Eigen::Vector3d::UnitY()) *
           Eigen::AngleAxisd(angle[2], Eigen::Vector3d::UnitZ()))
              .toRotationMatrix();
    }
  }
  return motion;
}

LabeledMarkers render_markers(const Skeleton& skeleton, const MarkerLayout& layout,
                              const Motion& motion) {
  validate(layout, skeleton);
  validate(motion, skeleton.joint_count());
  LabeledMarkers out;
  const std::size_t marker_count = layout.markers.size();
  out.positions.resize(motion.frames.size());
  out.visibility.resize(motion.frames.size());
  for (std::size_t f = 0; f < motion.frames.size(); ++f) {
    const FkPose pose = forward_kinematics(skeleton, motion.frames[f]);
    out.positions[f].resize(marker_count);
    out.visibility[f].assign(marker_count, true);
    for (std::size_t m = 0; m < marker_count; ++m) {
      const Marker& marker = layout.markers[m];
      const std::size_t j = static_cast<std::size_t>(marker.joint);
      out.positions[f][m] = pose.positions[j] + pose.rotations[j] * marker.local_offset;
    }
  }
  return out;
}

CorruptResult corrupt(const LabeledMarkers& markers, const MarkerLayout& layout,
                      const NoiseConfig& config) {
  validate(config);
  const std::size_t marker_count = layout.markers.size();
  for (const auto& frame : markers.positions) {
    if (frame.size() != marker_count) {
      throw DataError("marker frame width disagrees with layout");
    }
  }

  Rng rng(config.seed);
  CorruptResult result;
  result.frames.resize(markers.positions.size());
  result.correspondence.resize(markers.positions.size());

  std::vector<char> visible(marker_count);
  std::vector<Eigen::Vector3d> displaced(marker_count);
  for (std::size_t f = 0; f < markers.positions.size(); ++f) {
    const std::vector<Eigen::Vector3d>& clean = markers.positions[f];

    for (std::size_t m = 0; m < marker_count; ++m) {
      const double drop = config.occlusion_for(layout.markers[m].part);
      const bool was_visible = markers.visibility.empty() ? true : markers.visibility[f][m];
      visible[m] = was_visible && rng.uniform() >= drop;
    }
    // Jitter draws happen for every marker regardless of visibility so the
    // random stream stays aligned across occlusion and jitter settings.
    for (std::size_t m = 0; m < marker_count; ++m) {
      Eigen::Vector3d gauss;
      for (int a = 0; a < 3; ++a) {
        gauss(a) = rng.gaussian(config.jitter_sigma);
      }
      displaced[m] = clean[m] + gauss + rng.uniform_box(config.jitter_uniform_halfwidth);
    }

    FramePointCloud& cloud = result.frames[f];
    cloud.time_index = static_cast<int>(f);
    std::vector<int>& origin = result.correspondence[f];
    for (std::size_t m = 0; m < marker_count; ++m) {
      if (visible[m]) {
        cloud.points.push_back(displaced[m]);
        cloud.part_tags.push_back(layout.markers[m].part);
        origin.push_back(static_cast<int>(m));
      }
    }

    const int ghost_count = config.ghost_rate > 0.0 ? rng.poisson(config.ghost_rate) : 0;
    if (ghost_count > 0) {
      Eigen::Vector3d lo = clean.front();
      Eigen::Vector3d hi = clean.front();
      for (const Eigen::Vector3d& p : clean) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
      }
      Eigen::Vector3d center = 0.5 * (lo + hi);
      Eigen::Vector3d half = 0.5 * (hi - lo);
      for (int a = 0; a < 3; ++a) {
        half(a) = std::max(half(a) * (1.0 + 2.0 * kGhostBoxInflation), 0.5 * kGhostBoxMinExtent);
      }
      for (int g = 0; g < ghost_count; ++g) {
        Eigen::Vector3d p;
        for (int a = 0; a < 3; ++a) {
          p(a) = center(a) + (2.0 * rng.uniform() - 1.0) * half(a);
        }
        cloud.points.push_back(p);
        cloud.part_tags.push_back(Part::kUnknown);
        origin.push_back(-1);
      }
    }

    if (config.shuffle && cloud.points.size() > 1) {
      std::vector<int> perm(cloud.points.size());
      for (std::size_t i = 0; i < perm.size(); ++i) {
        perm[i] = static_cast<int>(i);
      }
      rng.shuffle(perm);
      std::vector<Eigen::Vector3d> points(cloud.points.size());
      std::vector<Part> parts(cloud.points.size());
      std::vector<int> origins(cloud.points.size());
      for (std::size_t i = 0; i < perm.size(); ++i) {
        points[i] = cloud.points[static_cast<std::size_t>(perm[i])];
        parts[i] = cloud.part_tags[static_cast<std::size_t>(perm[i])];
        origins[i] = origin[static_cast<std::size_t>(perm[i])];
      }
      cloud.points = std::move(points);
      cloud.part_tags = std::move(parts);
      origin = std::move(origins);
    }
  }
  return result;
}

SimulationResult simulate_sequence(SkeletonPreset preset, double duration_s, double frame_rate,
                                   std::uint64_t motion_seed, const NoiseConfig& noise) {
  SimulationResult result;
  result.truth.skeleton = synth_skeleton(preset);
  result.truth.layout = synth_layout(preset, result.truth.skeleton);
  result.truth.motion = synth_motion(result.truth.skeleton, duration_s, frame_rate, motion_seed);
  result.truth.markers = render_markers(result.truth.skeleton, result.truth.layout, result.truth.motion);
  CorruptResult corrupted = corrupt(result.truth.markers, result.truth.layout, noise);
  result.frames = std::move(corrupted.frames);
  result.truth.correspondence = std::move(corrupted.correspondence);
  return result;
}

} // namespace mocap

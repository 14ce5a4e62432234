#include "commands.hpp"

#include "mocap/assignment.hpp"
#include "mocap/error.hpp"
#include "mocap/io.hpp"
#include "mocap/metrics.hpp"
#include "mocap/providers.hpp"
#include "mocap/simulate.hpp"
#include "mocap/solver.hpp"
#include "mocap/tracklet.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>
#include <vector>

namespace mocap::cli {
namespace {

namespace fs = std::filesystem;

void ensure_out_dir(const PipelineConfig& config) {
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + config.out_dir + "': " + ec.message());
  }
}

NoiseConfig noise_from(const PipelineConfig& config) {
  NoiseConfig noise;
  noise.occlusion_body = config.occlusion_body;
  noise.occlusion_left_hand = config.occlusion_left_hand;
  noise.occlusion_right_hand = config.occlusion_right_hand;
  noise.ghost_rate = config.ghost_rate;
  noise.jitter_sigma = config.jitter_sigma_m;
  noise.jitter_uniform_halfwidth = config.jitter_uniform_halfwidth_m;
  noise.shuffle = config.shuffle;
  noise.seed = corrupt_seed(config);
  return noise;
}

std::unique_ptr<ConfidenceProvider> make_confidence_provider(
    const PipelineConfig& config, std::span<const std::vector<int>> correspondence,
    int label_count) {
  if (config.confidence_provider == "file") {
    if (config.confidence_file.empty()) {
      throw ConfigError("confidence_provider 'file' needs confidence_file");
    }
    return std::make_unique<FileConfidenceProvider>(load_score_frames(config.confidence_file));
  }
  OracleConfidenceParams params;
  params.margin = config.oracle_margin;
  params.noise_sigma = config.oracle_noise;
  params.temperature = config.oracle_temperature;
  params.seed = confidence_seed(config);
  return std::make_unique<OracleConfidenceProvider>(correspondence, label_count, params);
}

std::unique_ptr<FeatureProvider> make_feature_provider(
    const PipelineConfig& config, std::span<const std::vector<int>> correspondence,
    int label_count) {
  if (config.feature_provider == "file") {
    if (config.feature_file.empty()) {
      throw ConfigError("feature_provider 'file' needs feature_file");
    }
    return std::make_unique<FileFeatureProvider>(load_features(config.feature_file));
  }
  if (config.feature_provider == "oracle") {
    return std::make_unique<OracleFeatureProvider>(correspondence, label_count,
                                                   config.feature_noise, feature_seed(config));
  }
  return std::make_unique<BaselineFeatureProvider>();
}

std::vector<ConfidenceMatrix> normalized_confidences(const PipelineConfig& config,
                                                     const ConfidenceProvider& provider,
                                                     std::span<const FramePointCloud> frames) {
  std::vector<ConfidenceMatrix> out;
  out.reserve(frames.size());
  if (provider.frame_count() < static_cast<int>(frames.size())) {
    throw DataError("confidence provider covers fewer frames than the point clouds");
  }
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const Eigen::MatrixXd& raw = provider.log_scores(static_cast<int>(f));
    if (raw.rows() != static_cast<Eigen::Index>(frames[f].points.size())) {
      throw DataError("frame " + std::to_string(f) + ": score rows disagree with point count");
    }
    out.push_back(sinkhorn_normalize(augment_scores(raw, config.dustbin_score),
                                     config.sinkhorn_iterations));
  }
  return out;
}

struct LabelRun {
  std::vector<FrameLabeling> labelings;
  std::vector<TrackletRecord> tracklets;
};

LabelRun run_labeling(const PipelineConfig& config, std::span<const FramePointCloud> frames,
                      std::span<const ConfidenceMatrix> confidences,
                      const FeatureProvider& feature_provider) {
  LabelRun run;
  if (!config.use_tracklets) {
    run.labelings.reserve(frames.size());
    for (const ConfidenceMatrix& c : confidences) {
      run.labelings.push_back(extract_labels(c, config.accept_threshold));
    }
    return run;
  }

  GraphParams params;
  params.lambda_fet = config.lambda_fet;
  params.th_pos = config.th_pos_m;
  params.th_fet = config.th_fet;
  params.max_frame_gap = config.max_frame_gap;

  run.labelings.resize(frames.size());
  const FeatureSet features = feature_provider.features(frames);
  int next_id = 0;
  for (std::size_t begin = 0; begin < frames.size(); begin += static_cast<std::size_t>(config.window)) {
    const std::size_t end = std::min(frames.size(), begin + static_cast<std::size_t>(config.window));
    const std::span<const FramePointCloud> window_frames = frames.subspan(begin, end - begin);
    const std::span<const Eigen::MatrixXd> window_features(features.per_frame.data() + begin,
                                                           end - begin);
    const std::span<const ConfidenceMatrix> window_conf = confidences.subspan(begin, end - begin);

    const MarkerGraph graph = build_graph(window_frames, window_features, params);
    const std::vector<Tracklet> tracklets = greedy_cluster(graph);
    std::vector<FrameLabeling> window_labels =
        assign_tracklet_labels(tracklets, window_conf, config.q);
    for (std::size_t f = 0; f < window_labels.size(); ++f) {
      run.labelings[begin + f] = std::move(window_labels[f]);
    }

    for (const Tracklet& t : tracklets) {
      TrackletRecord record;
      record.id = next_id++;
      for (const GraphNode& m : t.members) {
        record.members.push_back(
            {static_cast<int>(begin) + m.frame, m.point});
      }
      // The assigned label is whatever the per-point output says for any
      // member (all members share it by construction).
      const GraphNode& head = t.members.front();
      record.label = run.labelings[begin + static_cast<std::size_t>(head.frame)]
                         .labels[static_cast<std::size_t>(head.point)];
      record.confidence = tracklet_label_confidence(
          t, window_conf, record.label >= 0 ? record.label : window_conf.front().label_count,
          config.q);
      run.tracklets.push_back(std::move(record));
    }
  }
  return run;
}

SkeletonPreset preset_of(const PipelineConfig& config) {
  return preset_from_string(config.preset);
}

bool file_exists(const fs::path& path) {
  std::error_code ec;
  return fs::exists(path, ec);
}

std::unique_ptr<PoseProvider> make_pose_provider(const PipelineConfig& config,
                                                 const Skeleton& skeleton) {
  if (config.pose_provider == "file") {
    if (config.pose_file.empty()) {
      throw ConfigError("pose_provider 'file' needs pose_file");
    }
    return std::make_unique<FilePoseProvider>(load_pose_estimates(config.pose_file));
  }
  const Motion motion = load_motion(config.out("motion.json"));
  if (config.pose_provider == "markers") {
    const MarkerLayout layout = load_layout(config.out("layout.json"));
    return std::make_unique<MarkerDerivedPoseProvider>(
        skeleton, layout, motion, config.jitter_uniform_halfwidth_m, config.jitter_sigma_m,
        pose_seed(config));
  }
  OraclePoseParams params;
  params.position_sigma = config.pose_position_noise_m;
  params.twist_sigma = config.pose_twist_noise_rad;
  params.offset_sigma = config.pose_offset_noise_m;
  params.seed = pose_seed(config);
  return std::make_unique<OraclePoseProvider>(skeleton, motion, params);
}

int run_jitter_sweep(const PipelineConfig& config, const Skeleton& skeleton) {
  const Motion truth = load_motion(config.out("motion.json"));
  const MarkerLayout layout = load_layout(config.out("layout.json"));
  const std::vector<double> levels_cm = {0.0, 0.2, 0.5, 1.0};

  std::ostringstream table;
  table << "jitter_cm   corrected_mpjpe_cm   naive_mpjpe_cm\n";
  std::ostringstream jsonl;
  for (double level_cm : levels_cm) {
    const double halfwidth_m = level_cm / 100.0;
    double mpjpe[2] = {0.0, 0.0};
    const SolverMode modes[2] = {SolverMode::kCorrected, SolverMode::kNaive};
    for (int m = 0; m < 2; ++m) {
      const MarkerDerivedPoseProvider provider(skeleton, layout, truth, halfwidth_m, 0.0,
                                               pose_seed(config));
      const SolveResult solved = solve_sequence(provider, skeleton, 0, provider.frame_count(),
                                                modes[m], truth.frame_rate);
      mpjpe[m] = solving_metrics(solved.motion, solved.skeleton, truth, skeleton).mpjpe_cm;
    }
    char row[96];
    std::snprintf(row, sizeof(row), "%9.1f   %18.6f   %14.6f\n", level_cm, mpjpe[0], mpjpe[1]);
    table << row;
    jsonl << "{\"jitter_cm\":" << level_cm << ",\"corrected_mpjpe_cm\":" << mpjpe[0]
          << ",\"naive_mpjpe_cm\":" << mpjpe[1] << "}\n";
  }
  save_text(config.out("jitter_sweep.txt"), table.str());
  save_text(config.out("jitter_sweep.jsonl"), jsonl.str());
  std::cout << table.str();
  return 0;
}

} // namespace

int cmd_simulate(const PipelineConfig& config) {
  ensure_out_dir(config);
  const SimulationResult sim = simulate_sequence(preset_of(config), config.duration_s,
                                                 config.frame_rate, motion_seed(config),
                                                 noise_from(config));
  save_skeleton(config.out("skeleton.json"), sim.truth.skeleton);
  save_layout(config.out("layout.json"), sim.truth.layout);
  save_motion(config.out("motion.json"), sim.truth.motion);
  save_markers(config.out("markers.jsonl"), sim.truth.markers);
  save_point_clouds(config.out("points.jsonl"), sim.frames);
  save_correspondence(config.out("correspondence.jsonl"), sim.truth.correspondence);

  const std::size_t frames = sim.frames.size();
  const std::size_t markers = sim.truth.layout.markers.size();
  std::size_t real_points = 0;
  for (const std::vector<int>& origins : sim.truth.correspondence) {
    real_points += static_cast<std::size_t>(
        std::count_if(origins.begin(), origins.end(), [](int o) { return o >= 0; }));
  }
  const double realized_occlusion =
      frames * markers == 0
          ? 0.0
          : 1.0 - static_cast<double>(real_points) / static_cast<double>(frames * markers);
  std::cout << "frames " << frames << "  markers " << markers << "  realized_occlusion "
            << realized_occlusion << '\n';
  return 0;
}

int cmd_label(const PipelineConfig& config) {
  ensure_out_dir(config);
  const std::vector<FramePointCloud> frames = load_point_clouds(config.out("points.jsonl"));
  const MarkerLayout layout = load_layout(config.out("layout.json"));
  const int label_count = static_cast<int>(layout.markers.size());

  std::vector<std::vector<int>> correspondence;
  const bool have_truth = file_exists(config.out("correspondence.jsonl"));
  if (have_truth) {
    correspondence = load_correspondence(config.out("correspondence.jsonl"));
  } else if (config.confidence_provider == "oracle") {
    throw IoError("oracle confidence provider needs correspondence.jsonl");
  }

  const std::unique_ptr<ConfidenceProvider> confidence =
      make_confidence_provider(config, correspondence, label_count);
  const std::vector<ConfidenceMatrix> confidences =
      normalized_confidences(config, *confidence, frames);
  const std::unique_ptr<FeatureProvider> features =
      make_feature_provider(config, correspondence, label_count);

  const LabelRun run = run_labeling(config, frames, confidences, *features);
  save_labelings(config.out("labels.jsonl"), run.labelings);
  if (config.use_tracklets) {
    save_tracklets(config.out("tracklets.jsonl"), run.tracklets);
  }

  if (have_truth) {
    const LabelingReport report = labeling_metrics(run.labelings, correspondence, layout);
    save_report(config.out("labeling_report.json"), report);
    const std::string table = format_report(report);
    save_text(config.out("labeling_report.txt"), table);
    std::cout << table;
  } else {
    std::cout << "labeled " << frames.size() << " frames (no ground truth available)\n";
  }
  return 0;
}

int cmd_solve(const PipelineConfig& config) {
  ensure_out_dir(config);
  const Skeleton skeleton = load_skeleton(config.out("skeleton.json"));
  if (config.jitter_sweep) {
    return run_jitter_sweep(config, skeleton);
  }

  const std::unique_ptr<PoseProvider> provider = make_pose_provider(config, skeleton);
  const SolveResult solved =
      solve_sequence(*provider, skeleton, 0, provider->frame_count(),
                     solver_mode_from_string(config.solver_mode), config.frame_rate);
  save_motion(config.out("solved_motion.json"), solved.motion);
  save_skeleton(config.out("solved_skeleton.json"), solved.skeleton);

  if (file_exists(config.out("motion.json"))) {
    const Motion truth = load_motion(config.out("motion.json"));
    const SolvingReport report = solving_metrics(solved.motion, solved.skeleton, truth, skeleton);
    save_report(config.out("solving_report.json"), report, skeleton);
    const std::string table = format_report(report, skeleton);
    save_text(config.out("solving_report.txt"), table);
    std::cout << table;
  } else {
    std::cout << "solved " << solved.motion.frames.size() << " frames (no ground truth available)\n";
  }
  return 0;
}

int cmd_eval(const PipelineConfig& config) {
  ensure_out_dir(config);
  bool scored = false;
  if (file_exists(config.out("labels.jsonl")) && file_exists(config.out("correspondence.jsonl"))) {
    const std::vector<FrameLabeling> labelings = load_labelings(config.out("labels.jsonl"));
    const std::vector<std::vector<int>> correspondence =
        load_correspondence(config.out("correspondence.jsonl"));
    const MarkerLayout layout = load_layout(config.out("layout.json"));
    const LabelingReport report = labeling_metrics(labelings, correspondence, layout);
    save_report(config.out("eval_labeling_report.json"), report);
    std::cout << format_report(report);
    scored = true;
  }
  if (file_exists(config.out("solved_motion.json")) && file_exists(config.out("motion.json"))) {
    const Skeleton truth_skeleton = load_skeleton(config.out("skeleton.json"));
    const Skeleton solved_skeleton = load_skeleton(config.out("solved_skeleton.json"));
    const Motion truth = load_motion(config.out("motion.json"));
    const Motion solved = load_motion(config.out("solved_motion.json"));
    const SolvingReport report = solving_metrics(solved, solved_skeleton, truth, truth_skeleton);
    save_report(config.out("eval_solving_report.json"), report, truth_skeleton);
    std::cout << format_report(report, truth_skeleton);
    scored = true;
  }
  if (!scored) {
    throw IoError("nothing to evaluate: need labels.jsonl+correspondence.jsonl or "
                  "solved_motion.json+motion.json under " +
                  config.out_dir);
  }
  return 0;
}

int cmd_pipeline(const PipelineConfig& config) {
  if (const int rc = cmd_simulate(config); rc != 0) {
    return rc;
  }
  if (const int rc = cmd_label(config); rc != 0) {
    return rc;
  }
  if (const int rc = cmd_solve(config); rc != 0) {
    return rc;
  }
  return cmd_eval(config);
}

} // namespace mocap::cli

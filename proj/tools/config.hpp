#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace mocap::cli {

/// One flat bag of tunables shared by every subcommand. Values come from
/// built-in defaults, then an optional JSON config file (flat object, every
/// key must be known), then command-line flags, in that order of precedence.
struct PipelineConfig {
  // simulation
  std::string preset = "fullbody54";
  double duration_s = 10.0;
  double frame_rate = 60.0;
  std::uint64_t seed = 1;
  double occlusion_body = 0.005;
  double occlusion_left_hand = 0.06;
  double occlusion_right_hand = 0.06;
  double ghost_rate = 0.5;
  double jitter_sigma_m = 0.0;
  double jitter_uniform_halfwidth_m = 0.0;
  bool shuffle = true;

  // assignment
  int sinkhorn_iterations = 20;
  double dustbin_score = 0.0;
  double accept_threshold = 0.3;
  std::string confidence_provider = "oracle"; // oracle | file
  double oracle_margin = 6.0;
  double oracle_noise = 0.0;
  double oracle_temperature = 1.0;
  std::string confidence_file;

  // tracklets
  bool use_tracklets = true;
  int window = 30;
  int max_frame_gap = 3;
  double th_pos_m = 0.05;
  double th_fet = 0.5;
  double lambda_fet = 0.1;
  double q = 1.0;
  std::string feature_provider = "baseline"; // baseline | oracle | file
  double feature_noise = 0.0;
  std::string feature_file;

  // solver
  std::string solver_mode = "corrected"; // corrected | naive
  std::string pose_provider = "oracle";  // oracle | markers | file
  double pose_position_noise_m = 0.0;
  double pose_twist_noise_rad = 0.0;
  double pose_offset_noise_m = 0.0;
  std::string pose_file;
  bool jitter_sweep = false;

  std::string out_dir = "out";

  std::filesystem::path out(const std::string& name) const {
    return std::filesystem::path(out_dir) / name;
  }
};

/// Seeds for the independent random streams, derived from config.seed so one
/// knob steers the whole pipeline while stages stay decoupled.
std::uint64_t motion_seed(const PipelineConfig& c);
std::uint64_t corrupt_seed(const PipelineConfig& c);
std::uint64_t confidence_seed(const PipelineConfig& c);
std::uint64_t feature_seed(const PipelineConfig& c);
std::uint64_t pose_seed(const PipelineConfig& c);

/// Merges the file over the defaults. Unknown keys, type mismatches and
/// out-of-range values raise ConfigError; an unreadable file raises IoError.
PipelineConfig load_config(const std::filesystem::path& path);

/// Range/enum checks shared by load_config and flag overrides.
void validate_config(const PipelineConfig& config);

} // namespace mocap::cli

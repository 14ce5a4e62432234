#include "config.hpp"

#include "mocap/error.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>

namespace mocap::cli {
namespace {

using nlohmann::json;

template <class T>
void read_key(const json& doc, const char* key, T& into) {
  if (!doc.contains(key)) {
    return;
  }
  try {
    into = doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

} // namespace

std::uint64_t motion_seed(const PipelineConfig& c) { return c.seed; }
std::uint64_t corrupt_seed(const PipelineConfig& c) { return c.seed + 1; }
std::uint64_t confidence_seed(const PipelineConfig& c) { return c.seed + 2; }
std::uint64_t feature_seed(const PipelineConfig& c) { return c.seed + 3; }
std::uint64_t pose_seed(const PipelineConfig& c) { return c.seed + 4; }

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config: " + path.string());
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& err) {
    throw ConfigError(path.string() + ": " + err.what());
  }
  if (!doc.is_object()) {
    throw ConfigError(path.string() + ": config must be a flat JSON object");
  }

  static const std::set<std::string> known = {
      "preset", "duration_s", "frame_rate", "seed",
      "occlusion_body", "occlusion_left_hand", "occlusion_right_hand", "ghost_rate",
      "jitter_sigma_m", "jitter_uniform_halfwidth_m", "shuffle",
      "sinkhorn_iterations", "dustbin_score", "accept_threshold",
      "confidence_provider", "oracle_margin", "oracle_noise", "oracle_temperature",
      "confidence_file",
      "use_tracklets", "window", "max_frame_gap", "th_pos_m", "th_fet", "lambda_fet", "q",
      "feature_provider", "feature_noise", "feature_file",
      "solver_mode", "pose_provider", "pose_position_noise_m", "pose_twist_noise_rad",
      "pose_offset_noise_m", "pose_file", "jitter_sweep",
      "out_dir"};
  for (const auto& [key, value] : doc.items()) {
    if (known.count(key) == 0) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  PipelineConfig c;
  read_key(doc, "preset", c.preset);
  read_key(doc, "duration_s", c.duration_s);
  read_key(doc, "frame_rate", c.frame_rate);
  read_key(doc, "seed", c.seed);
  read_key(doc, "occlusion_body", c.occlusion_body);
  read_key(doc, "occlusion_left_hand", c.occlusion_left_hand);
  read_key(doc, "occlusion_right_hand", c.occlusion_right_hand);
  read_key(doc, "ghost_rate", c.ghost_rate);
  read_key(doc, "jitter_sigma_m", c.jitter_sigma_m);
  read_key(doc, "jitter_uniform_halfwidth_m", c.jitter_uniform_halfwidth_m);
  read_key(doc, "shuffle", c.shuffle);
  read_key(doc, "sinkhorn_iterations", c.sinkhorn_iterations);
  read_key(doc, "dustbin_score", c.dustbin_score);
  read_key(doc, "accept_threshold", c.accept_threshold);
  read_key(doc, "confidence_provider", c.confidence_provider);
  read_key(doc, "oracle_margin", c.oracle_margin);
  read_key(doc, "oracle_noise", c.oracle_noise);
  read_key(doc, "oracle_temperature", c.oracle_temperature);
  read_key(doc, "confidence_file", c.confidence_file);
  read_key(doc, "use_tracklets", c.use_tracklets);
  read_key(doc, "window", c.window);
  read_key(doc, "max_frame_gap", c.max_frame_gap);
  read_key(doc, "th_pos_m", c.th_pos_m);
  read_key(doc, "th_fet", c.th_fet);
  read_key(doc, "lambda_fet", c.lambda_fet);
  read_key(doc, "q", c.q);
  read_key(doc, "feature_provider", c.feature_provider);
  read_key(doc, "feature_noise", c.feature_noise);
  read_key(doc, "feature_file", c.feature_file);
  read_key(doc, "solver_mode", c.solver_mode);
  read_key(doc, "pose_provider", c.pose_provider);
  read_key(doc, "pose_position_noise_m", c.pose_position_noise_m);
  read_key(doc, "pose_twist_noise_rad", c.pose_twist_noise_rad);
  read_key(doc, "pose_offset_noise_m", c.pose_offset_noise_m);
  read_key(doc, "pose_file", c.pose_file);
  read_key(doc, "jitter_sweep", c.jitter_sweep);
  read_key(doc, "out_dir", c.out_dir);

  validate_config(c);
  return c;
}

void validate_config(const PipelineConfig& c) {
  auto fail = [](const std::string& message) { throw ConfigError(message); };
  auto in_unit = [&](double v, const char* key) {
    if (!(v >= 0.0 && v <= 1.0)) {
      fail(std::string(key) + " must be in [0, 1]");
    }
  };
  auto non_negative = [&](double v, const char* key) {
    if (!(v >= 0.0)) {
      fail(std::string(key) + " must be non-negative");
    }
  };
  auto one_of = [&](const std::string& v, std::initializer_list<const char*> allowed,
                    const char* key) {
    for (const char* a : allowed) {
      if (v == a) {
        return;
      }
    }
    std::string message = std::string(key) + " must be one of {";
    bool first = true;
    for (const char* a : allowed) {
      message += (first ? "" : ", ") + std::string(a);
      first = false;
    }
    fail(message + "}, got '" + v + "'");
  };

  one_of(c.preset, {"body22", "hand16", "fullbody54"}, "preset");
  if (!(c.duration_s > 0.0)) {
    fail("duration_s must be positive");
  }
  if (!(c.frame_rate > 0.0)) {
    fail("frame_rate must be positive");
  }
  in_unit(c.occlusion_body, "occlusion_body");
  in_unit(c.occlusion_left_hand, "occlusion_left_hand");
  in_unit(c.occlusion_right_hand, "occlusion_right_hand");
  non_negative(c.ghost_rate, "ghost_rate");
  non_negative(c.jitter_sigma_m, "jitter_sigma_m");
  non_negative(c.jitter_uniform_halfwidth_m, "jitter_uniform_halfwidth_m");
  if (c.sinkhorn_iterations < 1) {
    fail("sinkhorn_iterations must be at least 1");
  }
  in_unit(c.accept_threshold, "accept_threshold");
  one_of(c.confidence_provider, {"oracle", "file"}, "confidence_provider");
  non_negative(c.oracle_noise, "oracle_noise");
  if (!(c.oracle_temperature > 0.0)) {
    fail("oracle_temperature must be positive");
  }
  if (c.window < 1) {
    fail("window must be at least 1");
  }
  if (c.max_frame_gap < 1) {
    fail("max_frame_gap must be at least 1");
  }
  non_negative(c.th_pos_m, "th_pos_m");
  non_negative(c.th_fet, "th_fet");
  non_negative(c.lambda_fet, "lambda_fet");
  non_negative(c.q, "q");
  one_of(c.feature_provider, {"baseline", "oracle", "file"}, "feature_provider");
  non_negative(c.feature_noise, "feature_noise");
  one_of(c.solver_mode, {"corrected", "naive"}, "solver_mode");
  one_of(c.pose_provider, {"oracle", "markers", "file"}, "pose_provider");
  non_negative(c.pose_position_noise_m, "pose_position_noise_m");
  non_negative(c.pose_twist_noise_rad, "pose_twist_noise_rad");
  non_negative(c.pose_offset_noise_m, "pose_offset_noise_m");
  if (c.out_dir.empty()) {
    fail("out_dir must not be empty");
  }
}

} // namespace mocap::cli

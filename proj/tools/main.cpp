#include "commands.hpp"
#include "config.hpp"

#include "mocap/error.hpp"

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace {

// One machine-readable line on stderr; exit codes: 2 config, 3 io, 4 data.
int report_error(const char* kind, const std::string& message, int code) {
  std::cerr << "{\"error\":\"" << kind << "\",\"message\":" << nlohmann::json(message).dump()
            << "}\n";
  return code;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"motion-capture labeling and solving toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> solver_mode;
  bool no_tracklets = false;
  bool jitter_sweep = false;
  app.add_option("--config", config_path, "JSON config file (flat object)");
  app.add_option("--seed", seed, "override config seed");
  app.add_option("--out", out_dir, "override output directory");
  app.add_option("--solver-mode", solver_mode, "corrected | naive")
      ->check(CLI::IsMember({"corrected", "naive"}));
  app.add_flag("--no-tracklets", no_tracklets, "frame-wise labeling only (ablation)");
  app.add_flag("--jitter-sweep", jitter_sweep, "solve: emit the jitter-robustness table");

  auto* sub_simulate = app.add_subcommand("simulate", "generate a synthetic capture sequence");
  auto* sub_label = app.add_subcommand("label", "assign marker labels to point clouds");
  auto* sub_solve = app.add_subcommand("solve", "reconstruct motion from pose estimates");
  auto* sub_eval = app.add_subcommand("eval", "score outputs against ground truth");
  auto* sub_pipeline = app.add_subcommand("pipeline", "simulate, label, solve and eval in order");
  for (CLI::App* sub : {sub_simulate, sub_label, sub_solve, sub_eval, sub_pipeline}) {
    sub->fallthrough(); // let global flags appear after the subcommand too
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err); // CLI11 prints usage; nonzero on bad flags
  }

  try {
    mocap::cli::PipelineConfig config;
    if (!config_path.empty()) {
      config = mocap::cli::load_config(config_path);
    }
    if (seed) {
      config.seed = *seed;
    }
    if (out_dir) {
      config.out_dir = *out_dir;
    }
    if (solver_mode) {
      config.solver_mode = *solver_mode;
    }
    if (no_tracklets) {
      config.use_tracklets = false;
    }
    if (jitter_sweep) {
      config.jitter_sweep = true;
    }
    mocap::cli::validate_config(config);

    if (sub_simulate->parsed()) {
      return mocap::cli::cmd_simulate(config);
    }
    if (sub_label->parsed()) {
      return mocap::cli::cmd_label(config);
    }
    if (sub_solve->parsed()) {
      return mocap::cli::cmd_solve(config);
    }
    if (sub_eval->parsed()) {
      return mocap::cli::cmd_eval(config);
    }
    if (sub_pipeline->parsed()) {
      return mocap::cli::cmd_pipeline(config);
    }
    return report_error("config", "no subcommand given", 2);
  } catch (const mocap::ConfigError& err) {
    return report_error("config", err.what(), 2);
  } catch (const mocap::IoError& err) {
    return report_error("io", err.what(), 3);
  } catch (const mocap::DataError& err) {
    return report_error("data", err.what(), 4);
  } catch (const std::exception& err) {
    // anything escaping the core is a broken data contract
    return report_error("data", err.what(), 4);
  }
}

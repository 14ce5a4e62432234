#pragma once

#include "config.hpp"

namespace mocap::cli {

/// Each command reads/writes the fixed file set under config.out_dir and
/// returns 0 on success; failures surface as the exceptions mapped to exit
/// codes in main.
int cmd_simulate(const PipelineConfig& config);
int cmd_label(const PipelineConfig& config);
int cmd_solve(const PipelineConfig& config);
int cmd_eval(const PipelineConfig& config);
int cmd_pipeline(const PipelineConfig& config);

} // namespace mocap::cli

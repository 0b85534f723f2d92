#pragma once

#include "specidx/config.hpp"

namespace specidx {

// Subcommand implementations; each writes output_path + ".csv" and
// output_path + ".json" and returns the process exit code (0 success,
// 2 configuration error, 3 numerical failure).

int cmd_xi_curve(const RunConfig& cfg);
int cmd_flow(const RunConfig& cfg);
int cmd_bs_spectrum(const RunConfig& cfg);
int cmd_krein_demo(const RunConfig& cfg);
int cmd_validate(const RunConfig& cfg, bool negative_control);

}  // namespace specidx

#pragma once

#include <string>

#include "specidx/potentials.hpp"

namespace specidx {

/// CLI run configuration; round-trips losslessly through JSON.
struct RunConfig {
  std::string potential = "gaussian";  // square_well, gaussian, poschl_teller,
                                       // exponential, custom-table
  double depth = 1.0;
  double width = 1.0;  // half-width (square well) or 1/gamma (exponential)
  std::string table_path;
  double table_rho = 3.0;

  double lam_min = 0.05;
  double lam_max = 25.0;
  int npoints = 60;

  int nquad = 96;
  double ode_tol = 1e-10;
  double tol_sing = 1e-6;

  std::string output_path = "specidx_out";
  unsigned long seed = 1;

  bool operator==(const RunConfig&) const = default;
};

std::string serialize_config(const RunConfig& cfg);
RunConfig parse_config(const std::string& json_text);

/// Validates invariants (positive window for essential-spectrum commands,
/// positive tolerances); throws ConfigError.
void check_config(const RunConfig& cfg, bool needs_positive_window);

/// Instantiates the configured potential.
PotentialSpec make_potential(const RunConfig& cfg);

}  // namespace specidx

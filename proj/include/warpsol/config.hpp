#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace warpsol {

/// Resolutions, tolerances and iteration limits shared by every pipeline stage.
struct SolverConfig {
  int n_max = 25;       ///< ground-state basis degree used for the tabulated profile
  int n_max_s1 = 40;    ///< basis degree for the S1 correction
  int n_max_fine = 60;  ///< ground-state degree feeding grid-based stages
  int grid_points = 8000;
  double grid_stretch = 5.0;
  double r_max = 40.0;
  int quad_panels = 64;
  double newton_tol = 1e-12;
  int newton_max_iter = 50;
  double fixedpoint_tol = 1e-10;
  int fixedpoint_max_iter = 50;
  double eig_tol = 1e-4;
  double alpha_min = 4.0;
  std::string cache_dir;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

nlohmann::json to_json(const SolverConfig& config);

/// Overrides the fields present in `j` on top of `base`. Unknown keys are rejected.
SolverConfig config_from_json(const nlohmann::json& j, SolverConfig base = {});

}  // namespace warpsol

#include "warpsol/config.hpp"

#include <stdexcept>

namespace warpsol {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("SolverConfig: ") + what);
}

bool valid_tolerance(double t) { return t > 0.0 && t <= 1e-2; }

}  // namespace

void SolverConfig::validate() const {
  require(n_max >= 10, "n_max must be >= 10");
  require(n_max_s1 >= 10, "n_max_s1 must be >= 10");
  require(n_max_fine >= 10, "n_max_fine must be >= 10");
  require(grid_points >= 500, "grid_points must be >= 500");
  require(grid_stretch > 0.0, "grid_stretch must be positive");
  require(r_max >= 20.0, "r_max must be >= 20");
  require(quad_panels >= 8, "quad_panels must be >= 8");
  require(valid_tolerance(newton_tol), "newton_tol must lie in (0, 1e-2]");
  require(valid_tolerance(fixedpoint_tol), "fixedpoint_tol must lie in (0, 1e-2]");
  require(valid_tolerance(eig_tol), "eig_tol must lie in (0, 1e-2]");
  require(newton_max_iter >= 1, "newton_max_iter must be >= 1");
  require(fixedpoint_max_iter >= 1, "fixedpoint_max_iter must be >= 1");
  require(alpha_min > 0.0, "alpha_min must be positive");
}

nlohmann::json to_json(const SolverConfig& c) {
  return {
      {"n_max", c.n_max},
      {"n_max_s1", c.n_max_s1},
      {"n_max_fine", c.n_max_fine},
      {"grid_points", c.grid_points},
      {"grid_stretch", c.grid_stretch},
      {"r_max", c.r_max},
      {"quad_panels", c.quad_panels},
      {"newton_tol", c.newton_tol},
      {"newton_max_iter", c.newton_max_iter},
      {"fixedpoint_tol", c.fixedpoint_tol},
      {"fixedpoint_max_iter", c.fixedpoint_max_iter},
      {"eig_tol", c.eig_tol},
      {"alpha_min", c.alpha_min},
      {"cache_dir", c.cache_dir},
  };
}

SolverConfig config_from_json(const nlohmann::json& j, SolverConfig c) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "n_max") c.n_max = value.get<int>();
    else if (key == "n_max_s1") c.n_max_s1 = value.get<int>();
    else if (key == "n_max_fine") c.n_max_fine = value.get<int>();
    else if (key == "grid_points") c.grid_points = value.get<int>();
    else if (key == "grid_stretch") c.grid_stretch = value.get<double>();
    else if (key == "r_max") c.r_max = value.get<double>();
    else if (key == "quad_panels") c.quad_panels = value.get<int>();
    else if (key == "newton_tol") c.newton_tol = value.get<double>();
    else if (key == "newton_max_iter") c.newton_max_iter = value.get<int>();
    else if (key == "fixedpoint_tol") c.fixedpoint_tol = value.get<double>();
    else if (key == "fixedpoint_max_iter") c.fixedpoint_max_iter = value.get<int>();
    else if (key == "eig_tol") c.eig_tol = value.get<double>();
    else if (key == "alpha_min") c.alpha_min = value.get<double>();
    else if (key == "cache_dir") c.cache_dir = value.get<std::string>();
    else throw std::invalid_argument("unknown config key: " + key);
  }
  c.validate();
  return c;
}

}  // namespace warpsol

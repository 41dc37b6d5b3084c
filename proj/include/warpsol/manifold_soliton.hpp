#pragma once

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "warpsol/config.hpp"
#include "warpsol/geometry.hpp"
#include "warpsol/ground_state.hpp"
#include "warpsol/radial_grid.hpp"

namespace warpsol {

/// Euclidean ground state (fine basis) sampled on the finite-volume grid.
struct EuclideanBackground {
  SolverConfig config;
  std::shared_ptr<const GroundState> ground_state;
  std::shared_ptr<const RadialGrid> grid;
  std::vector<double> Q;
  double mass = 0.0;  ///< ||Q||^2 by quadrature of the spectral profile
  int d = 2;
  double p = 3.0;
};

/// Solves the ground state at config.n_max_fine and samples it.
EuclideanBackground make_background(const SolverConfig& config);
EuclideanBackground make_background(const SolverConfig& config, GroundState fine);

struct CurvedSoliton {
  double alpha = 0.0;
  WarpingFunction warp = WarpingFunction::flat();
  int d = 2;
  double p = 3.0;
  std::vector<double> rho;
  int iterations = 0;
  double contraction_factor = 0.0;      ///< last ratio of successive differences
  double fixed_point_residual = 0.0;    ///< sup |rho - K(rho)| at the final iterate
  std::vector<double> difference_history;
  double sup_norm = 0.0;
  double h2_proxy = 0.0;                ///< ||rho|| + ||Delta_h rho|| in the grid norm
};

/// rho_{k+1} = -A_alpha^{-1} [q F'(Q) rho_k + (q - 1) N(rho_k) + alpha^-2 V Q + q F(Q)], rho_0 = 0,
/// with q = 1 - phi_{d,p}(r/alpha). Throws ConvergenceError on growth or iteration overflow.
CurvedSoliton fixed_point_rho(double alpha, const WarpingFunction& warp,
                              const EuclideanBackground& bg);

/// Max |Delta R - R - alpha^-2 V R + phi F(R)| over nodes with r <= r_limit for R = Q + rho.
/// The Laplacian of Q is taken from the spectral profile, that of rho from a three-point
/// non-uniform stencil (independent of the finite-volume operator used to solve for rho).
double profile_equation_residual(const CurvedSoliton& cs, const EuclideanBackground& bg,
                                 double r_limit = 10.0);

struct StraussResult {
  bool pass = true;
  double weighted_sup = 0.0;  ///< sup_{r >= 1} <r>^{(d-1)/2} |rho|
  double h1_proxy = 0.0;
  double constant = 0.0;      ///< weighted_sup / h1_proxy
  bool decays = true;         ///< weighted values on the outer quarter stay below 1e-3 of the sup
};

StraussResult strauss_check(const std::vector<double>& rho, const RadialGrid& grid,
                            double bound = 10.0);
StraussResult strauss_check(const CurvedSoliton& cs, const EuclideanBackground& bg,
                            double bound = 10.0);

/// |S^{d-1}| int (Q + rho)^2 r^{d-1} dr, split as the quadrature mass of Q plus the grid
/// integral of 2 Q rho + rho^2.
double manifold_mass(const CurvedSoliton& cs, const EuclideanBackground& bg);

enum class VkClass { unstable, stable_candidate, indeterminate };
std::string to_string(VkClass c);

struct VkResult {
  double alpha = 0.0;
  double alpha_minus = 0.0, alpha_plus = 0.0;
  double mass_minus = 0.0, mass_plus = 0.0;
  double d_mass_d_alpha = 0.0;
  VkClass classification = VkClass::indeterminate;
};

/// Central difference of the mass at alpha (1 +- 0.05); |delta mass| < 1e-8 is indeterminate.
VkResult vk_sign(const WarpingFunction& warp, double alpha, const EuclideanBackground& bg);

nlohmann::json to_json(const CurvedSoliton& cs, bool include_profile);
nlohmann::json to_json(const VkResult& vk);

}  // namespace warpsol

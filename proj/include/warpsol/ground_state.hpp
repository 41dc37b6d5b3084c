#pragma once

#include <optional>
#include <vector>

#include "warpsol/cheb_basis.hpp"
#include "warpsol/config.hpp"
#include "warpsol/quadrature.hpp"

namespace warpsol {

/// Ground state of -f'' - f'/r + f - f^3 = 0 in the constrained basis.
struct GroundState {
  SpectralFunction profile;
  int d = 2;
  double p = 3.0;
  double residual_norm = 0.0;  ///< max |scaled residual| over the collocation nodes
  int newton_iters = 0;
  std::vector<double> residual_history;  ///< residual norm of each iterate, starting guess first

  double f0() const { return profile.eval(-1.0); }
  double operator()(double r) const { return profile.to_radial(r); }
};

/// Residual of the compactified cubic equation for g at x in (-1, 1):
///   g'' + (3x^2-6x-5)/((1-x)^2(1+x)) g' - 3(3-x)/(4(1-x)^2(1+x)) g + 2/(1-x)^3 e^{-2(1+x)/(1-x)} g^3.
double cubic_residual(const SpectralFunction& g, double x);

/// The same residual multiplied by (1-x)^2 (1+x); bounded up to the endpoints.
double scaled_cubic_residual(const SpectralFunction& g, double x);

/// Newton iteration on the collocation system (square: n_max - 2 nodes).
/// `n_max` overrides config.n_max. Only d = 2, p = 3 is supported by this solver.
GroundState solve_ground_state(const SolverConfig& config, std::optional<int> n_max = {});
GroundState solve_ground_state(int d, double p, const SolverConfig& config,
                               std::optional<int> n_max = {});

/// ||Q||^2_{L^2(R^2)} through the quadrature module.
double mass(const GroundState& gs, const QuadratureRule& rule = {});

/// Radial profile from the shooting method, sampled densely with a Bessel-function tail.
class ShotProfile {
 public:
  ShotProfile(int d, double p, double amplitude, double step, std::vector<double> f,
              std::vector<double> df, double tail_start, double tail_scale);

  int d() const { return d_; }
  double p() const { return p_; }
  double amplitude() const { return amplitude_; }
  double tail_start() const { return tail_start_; }

  double operator()(double r) const;
  double deriv(double r) const;

 private:
  double tail(double r, int order) const;

  int d_;
  double p_;
  double amplitude_;
  double step_;
  std::vector<double> f_, df_;
  double tail_start_;
  double tail_scale_;
};

/// Shooting with bisection on f(0) for f'' + (d-1)f'/r - f + |f|^{p-1}f = 0.
/// Any d >= 1 and subcritical p are accepted. Throws ConvergenceError when no bracket is found.
ShotProfile shoot_ground_state(int d, double p);

}  // namespace warpsol

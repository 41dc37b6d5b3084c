#pragma once

#include <functional>
#include <vector>

namespace warpsol {

enum class VolterraSide { origin, infinity };

struct VolterraOptions {
  double picard_tol = 1e-10;  ///< sup-norm change between successive iterates
  int max_picard = 200;
  double refine_tol = 1e-9;   ///< change of a(r) under grid doubling
  int initial_intervals = 256;
  int max_intervals = 1 << 21;
  double r_far = 200.0;       ///< truncation radius of the infinity-side integral
};

/// Fundamental system of phi'' - (d-1)(d-3)/(4r^2) phi - V phi - lambda^2 phi = 0.
///
/// origin side on (0, 1/2]:
///   phi0 = f0 (1 + a), psi0 = g0 (1 + b), f0 = r^{(d-1)/2},
///   g0 = r^{1/2} log r (d = 2) or -r^{-(d-3)/2}/(d-2), W(phi0, psi0) = 1.
/// infinity side on [1/4, r_far]:
///   phi_inf = e^{-lambda r} (1 + a), psi_inf = e^{lambda r}/(2 lambda) (1 + b), W = 1.
///
/// phi comes from successive approximation of the Volterra equation for h = 1 + a
/// (the kernels are separable, so each sweep costs O(N)); psi from the reduction formula.
struct FundamentalSystem {
  VolterraSide side = VolterraSide::origin;
  std::vector<double> r;
  std::vector<double> phi, psi;
  std::vector<double> a, b;
  int picard_iterations = 0;
  int intervals = 0;
  double picard_change = 0.0;    ///< last sup-norm change of the iteration
  double refine_change = 0.0;    ///< last change under grid doubling
  bool contraction_ok = true;    ///< successive differences shrank
  bool refined = true;           ///< refine_tol reached within max_intervals
};

FundamentalSystem fundamental_system(const std::function<double(double)>& V, double lambda, int d,
                                     VolterraSide side, const VolterraOptions& options = {});

}  // namespace warpsol

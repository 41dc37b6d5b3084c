#pragma once

#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "warpsol/config.hpp"
#include "warpsol/ground_state.hpp"
#include "warpsol/manifold_soliton.hpp"
#include "warpsol/stability.hpp"

namespace warpsol::testing {

// Reference ground-state coefficients beta_3..beta_25.
inline const std::array<double, 23> kGroundStateReference = {
    -2542.0 / 141001.0, 8061.0 / 72860.0,   23.0 / 25643.0,     -17127.0 / 731900.0,
    -113.0 / 61446.0,   407.0 / 88530.0,    80.0 / 79969.0,     -195.0 / 296276.0,
    -167.0 / 607101.0,  3.0 / 91531.0,      3.0 / 109289.0,     1.0 / 42237921.0,
    1.0 / 163112.0,     1.0 / 171418.0,     1.0 / 1839428.0,    -1.0 / 412985.0,
    -1.0 / 693490.0,    -1.0 / 3459389.0,   1.0 / 5641102.0,    1.0 / 2626342.0,
    1.0 / 45286837.0,   1.0 / 10226264.0,   -1.0 / 9836273.0};

// Reference S1 coefficients gamma_3..gamma_40.
inline const std::array<double, 38> kS1Reference = {
    54973.0 / 96387.0,   -3088.0 / 102021.0,  -11563.0 / 65730.0,  -622.0 / 123831.0,
    935.0 / 19694.0,     715.0 / 80273.0,     -972.0 / 107461.0,   -245.0 / 66869.0,
    43.0 / 75440.0,      6.0 / 13097.0,       7.0 / 79466.0,       23.0 / 138473.0,
    10.0 / 87071.0,      -1.0 / 41044.0,      -7.0 / 100544.0,     -3.0 / 79736.0,
    -1.0 / 247350.0,     1.0 / 98688.0,       1.0 / 104302.0,      1.0 / 181864.0,
    1.0 / 1748151.0,     -1.0 / 795239.0,     -1.0 / 519650.0,     -1.0 / 1141942.0,
    -1.0 / 2632970.0,    1.0 / 3481458.0,     1.0 / 4334802.0,     1.0 / 3856839.0,
    1.0 / 14342913.0,    -1.0 / 142634956.0,  -1.0 / 42463795.0,   -1.0 / 12658667.0,
    1.0 / 45132528.0,    -1.0 / 14926347.0,   1.0 / 15529718.0,    -1.0 / 15419336.0,
    1.0 / 13135736.0,    -1.0 / 36714512.0};

// Constraint triple for n = 3, solved in exact arithmetic.
inline constexpr std::array<double, 3> kConstraintN3 = {4748.0 / 95.0, 129.0 / 95.0, -876.0 / 95.0};

inline const SolverConfig& default_config() {
  static const SolverConfig cfg{};
  return cfg;
}

inline const GroundState& table_ground_state() {
  static const GroundState gs = solve_ground_state(default_config());
  return gs;
}

inline const EuclideanBackground& background() {
  static const EuclideanBackground bg = make_background(default_config());
  return bg;
}

inline const ExpansionProfiles& profiles() {
  static const ExpansionProfiles ex = compute_Qhat1(background());
  return ex;
}

inline const StabilityConstants& constants() {
  static const StabilityConstants k = compute_constants(background(), profiles());
  return k;
}

inline const ShotProfile& shot_townes() {
  static const ShotProfile shot = shoot_ground_state(2, 3.0);
  return shot;
}

/// Fixed-point correction for the polynomial warp c1 = 1, c2 = 0, memoised per alpha.
inline const CurvedSoliton& rho_c1(double alpha) {
  static std::map<double, CurvedSoliton> memo;
  auto it = memo.find(alpha);
  if (it == memo.end())
    it = memo.emplace(alpha, fixed_point_rho(alpha, WarpingFunction::polynomial(1, 0), background())).first;
  return it->second;
}

inline std::vector<double> plus(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace warpsol::testing

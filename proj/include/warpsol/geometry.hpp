#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace warpsol {

inline constexpr const char* kWarpSchema = "warp-soliton/warp-v1";

enum class WarpKind { flat, hyperbolic, polynomial };

std::string to_string(WarpKind kind);

/// Warping function A of the metric dr^2 + A(r)^2 dw^2.
///
/// Polynomial warps are odd: A(r) = r P(r^2) with P(u) = 1 + a_1 u + a_2 u^2 + ...
/// so A(r) = r + c1 r^3 + c2 r^5 for the two-parameter family. Curvature and
/// potential are evaluated through P, which removes the r -> 0 cancellations.
class WarpingFunction {
 public:
  static WarpingFunction flat();
  static WarpingFunction hyperbolic();
  static WarpingFunction polynomial(double c1, double c2);
  /// Odd polynomial with coefficients of r^3, r^5, ...
  static WarpingFunction odd_polynomial(std::vector<double> coeffs);

  WarpKind kind() const { return kind_; }
  /// Coefficients a_1, a_2, ... of P (empty unless polynomial).
  const std::vector<double>& coeffs() const { return coeffs_; }
  double c1() const { return coeffs_.size() > 0 ? coeffs_[0] : 0.0; }
  double c2() const { return coeffs_.size() > 1 ? coeffs_[1] : 0.0; }

  double A(double r) const;
  double dA(double r) const;
  double d2A(double r) const;

  /// A''/A, finite at r = 0.
  double d2A_over_A(double r) const;
  /// A'^2/A^2 - 1/r^2, finite at r = 0.
  double centrifugal_defect(double r) const;
  /// (1 - A'^2)/A^2, finite at r = 0.
  double sphere_curvature(double r) const;
  /// r/A(r) with the value 1 at r = 0.
  double r_over_A(double r) const;

  /// Exact V_{0,d} where known in closed form (flat: 0, hyperbolic: (d-1)^2/4, polynomial: 0).
  double exact_V0d(int d) const;

 private:
  WarpingFunction(WarpKind kind, std::vector<double> coeffs);

  double P(double u) const;
  double dP(double u) const;
  double d2P(double u) const;

  WarpKind kind_;
  std::vector<double> coeffs_;
};

struct Curvatures {
  double radial;     ///< K_rad = -A''/A
  double spherical;  ///< K_sph = (1 - A'^2)/A^2, reported for d = 2 as well
};

/// Throws std::domain_error for r <= 0 or A(r) = 0.
Curvatures sectional_curvatures(const WarpingFunction& w, double r);

/// V_d(r) = (d-1)/2 A''/A + (d-1)(d-3)/4 (A'^2/A^2 - 1/r^2), r >= 0.
double potential_V(const WarpingFunction& w, int d, double r);

/// (r/A(r))^{(d-1)(p-1)/2} with the value 1 at r = 0.
double weight_phi(const WarpingFunction& w, int d, double p, double r);

struct CurvatureSample {
  double r;
  double radial;
  double spherical;
};

struct MetricReport {
  int d = 2;
  double V0d = 0.0;
  double fit_slope = 0.0;         ///< coefficient of r^-2 in the fit
  double fit_residual = 0.0;      ///< relative residual of the fit
  bool positivity_ok = true;      ///< A > 0 on the probe grid
  bool fit_ok = true;
  bool hypothesis_ok = true;
  std::vector<CurvatureSample> curvature_samples;
};

/// Least-squares fit V_d(r) ~ V0d + c r^-2 on r = 50, 100, 200, 400.
/// Failures are flagged in the report, not thrown.
MetricReport estimate_V0d(const WarpingFunction& w, int d);

nlohmann::json to_json(const WarpingFunction& w);
WarpingFunction warp_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MetricReport& report);

}  // namespace warpsol

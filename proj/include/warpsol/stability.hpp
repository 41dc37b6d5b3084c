#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "warpsol/cheb_basis.hpp"
#include "warpsol/ground_state.hpp"
#include "warpsol/manifold_soliton.hpp"
#include "warpsol/quadrature.hpp"

namespace warpsol {

/// S0 = r Q'(r) + Q(r) from the spectral profile.
double S0_at(const GroundState& gs, double r);
std::vector<double> compute_S0(const GroundState& gs, const RadialGrid& grid);

/// Spectral solve of L_+ S1 = -r^2 Q^3 in the constrained basis of degree n_max,
/// collocated at the Chebyshev-Gauss nodes.
SpectralFunction solve_S1_spectral(const GroundState& gs, int n_max);

/// Defining-equation residuals of the first-order profiles.
struct ExpansionProfiles {
  std::shared_ptr<const RadialGrid> grid;
  std::vector<double> Q, S0, S1, Qhat1;  ///< Qhat1 = S0 + S1 at the nodes
  std::vector<double> Qhat1_direct;      ///< finite-volume solve of L_+ Qhat1 = -2Q - r^2 Q^3
  SpectralFunction S1_spectral;
  double l_plus_S0_residual = 0.0;  ///< ||L_+ S0 + 2Q|| / ||Q||
  double S1_residual = 0.0;         ///< ||L_+ S1 + r^2 Q^3|| / ||r^2 Q^3||
  double Qhat1_residual = 0.0;      ///< ||L_+ Qhat1_direct + 2Q + r^2 Q^3|| / ||2Q + r^2 Q^3||
  double split_vs_direct = 0.0;     ///< sup |Qhat1_direct - S0 - S1| / sup |S0 + S1|
};

ExpansionProfiles compute_Qhat1(const EuclideanBackground& bg);

struct Q2Solution {
  std::vector<double> values;
  double residual = 0.0;  ///< relative residual of the alpha^-4 equation
};

/// L_+ Q2 = -2 c1 Q1 + (3c1^2 - 8c2) r^2 Q - 3 c1 r^2 Q^2 Q1 + 3 Q Q1^2 + (c1^2 - c2) r^4 Q^3,
/// Q1 = c1 Qhat1.
Q2Solution compute_Q2(const ExpansionProfiles& ex, double c1, double c2, double eig_tol = 1e-4);

struct StabilityConstants {
  double b1 = 0.0;           ///< spectral profiles, Gauss-Legendre quadrature
  double b1_grid = 0.0;      ///< finite-volume profiles, grid sums
  double b2_direct = 0.0;    ///< (S0 | 8 r^2 Q + r^4 Q^3)
  double b2_ibp = 0.0;       ///< -8 (Q | r^2 Q) - 1/2 (Q | r^4 Q^3)
  double mass = 0.0;
  double qhat1_norm_sq = 0.0;
  double S0_Q = 0.0;         ///< (S0|Q) / (||S0|| ||Q||)
  double S0_r2Q3 = 0.0;      ///< (S0|r^2 Q^3) / (||S0|| ||r^2 Q^3||)
  double Q_Qhat1 = 0.0;      ///< (Q|Qhat1) / (||Q|| ||Qhat1||)
  double Q_r2Q = 0.0;        ///< (Q|r^2 Q)
  double Q_r4Q3 = 0.0;       ///< (Q|r^4 Q^3)
  int n_max = 0;

  double b1_over_2pi() const;
  double b2() const { return b2_ibp; }
};

/// The constants from the fine ground state and Qhat1 = S0 + S1 (spectral, n_max_fine),
/// with b1 cross-checked on the finite-volume profiles.
StabilityConstants compute_constants(const EuclideanBackground& bg, const ExpansionProfiles& ex);

double compute_b1(const GroundState& gs, const SpectralFunction& S1, const QuadratureRule& rule);
std::pair<double, double> compute_b2(const GroundState& gs, const QuadratureRule& rule);

enum class KappaClass { unstable, stable_candidate, degenerate };
std::string to_string(KappaClass c);

struct StabilityReport {
  double c1 = 0.0, c2 = 0.0;
  double b1 = 0.0, b2_direct = 0.0, b2_ibp = 0.0;
  double kappa = 0.0;
  KappaClass classification = KappaClass::degenerate;
};

/// kappa = c1^2 b1 + c2 b2; unstable iff kappa > 1e-8 |b1|, stable_candidate iff kappa < -1e-8 |b1|.
StabilityReport kappa(double c1, double c2, const StabilityConstants& k);

struct ScanResult {
  std::vector<StabilityReport> rows;                  ///< c1 outer, c2 inner
  std::vector<std::pair<double, double>> boundary;    ///< (c1, -c1^2 b1 / b2)
};

/// steps >= 2 points per axis, inclusive ranges; rows evaluated on `jobs` threads.
ScanResult scan(std::pair<double, double> c1_range, std::pair<double, double> c2_range, int steps,
                const StabilityConstants& k, int jobs = 1);

/// CSV with header c1,c2,kappa,classification.
std::string to_csv(const ScanResult& result);

struct KappaCrossCheck {
  double alpha = 0.0;
  double fd_derivative = 0.0;  ///< finite-difference d mass / d alpha
  double predicted = 0.0;      ///< -4 alpha^-5 kappa
  double relative_error = 0.0;
  bool sign_agrees = false;
  bool indeterminate = false;
};

struct KappaCrossValidation {
  std::vector<KappaCrossCheck> rows;
  bool error_decreasing = false;
};

KappaCrossValidation cross_validate_kappa(double c1, double c2, const std::vector<double>& alphas,
                                          const EuclideanBackground& bg,
                                          const StabilityConstants& k);

nlohmann::json to_json(const StabilityConstants& k);
nlohmann::json to_json(const StabilityReport& r);

}  // namespace warpsol

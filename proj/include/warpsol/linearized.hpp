#pragma once

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "warpsol/geometry.hpp"
#include "warpsol/radial_grid.hpp"

namespace warpsol {

enum class LVariant { plus, minus };

LVariant variant_from_string(const std::string& name);

/// Radial Schrodinger operator -Delta_rad + constant_term + W(r) on a RadialGrid.
///
/// The finite-volume discretisation is symmetric in the unknowns f^_i = sqrt(V_i) f_i,
/// the discrete analogue of the half-line reduction r^{(d-1)/2} f; `apply` and `solve`
/// take and return plain nodal values f_i.
struct RadialOperator {
  std::shared_ptr<const RadialGrid> grid;
  std::vector<double> potential;  ///< W at the nodes
  double constant_term = 1.0;
  bool half_line_reduction = true;

  int d() const { return grid->d; }
  std::size_t size() const { return grid->size(); }

  /// Main diagonal and first off-diagonal of the symmetric matrix.
  std::vector<double> diagonal() const;
  std::vector<double> off_diagonal() const;
};

/// L_{alpha,-} (sigma = 1) or L_{alpha,+} (sigma = p):
/// W = -sigma phi_{d,p}(r/alpha) |u|^{p-1} + alpha^-2 V_d(r/alpha). alpha = inf gives L_-/L_+.
RadialOperator build_L(LVariant variant, double alpha, const WarpingFunction& warp, int d,
                       double p, const std::vector<double>& profile,
                       std::shared_ptr<const RadialGrid> grid);

/// A_alpha = L_+ + alpha^-2 V_d(r/alpha), with the Euclidean profile Q and no weight.
RadialOperator build_A(double alpha, const WarpingFunction& warp, int d, double p,
                       const std::vector<double>& Q, std::shared_ptr<const RadialGrid> grid);

/// -Delta_rad + 1.
RadialOperator free_operator(std::shared_ptr<const RadialGrid> grid);

std::vector<double> apply(const RadialOperator& op, const std::vector<double>& f);

/// Relative residual ||op f - rhs|| / ||rhs|| in the grid norm.
double relative_residual(const RadialOperator& op, const std::vector<double>& f,
                         const std::vector<double>& rhs);

/// Eigenvalue of smallest magnitude (bisection on the symmetric tridiagonal matrix).
double smallest_abs_eigenvalue(const RadialOperator& op);

/// Number of eigenvalues below `threshold`.
int count_eigenvalues_below(const RadialOperator& op, double threshold);

/// Solves op f = rhs. Throws SingularOperatorError when some |eigenvalue| <= tol.
std::vector<double> solve(const RadialOperator& op, const std::vector<double>& rhs,
                          double tol = 1e-4);

/// LU factorisation kept for repeated solves (fixed-point iterations).
class FactorizedOperator {
 public:
  explicit FactorizedOperator(RadialOperator op, double tol = 1e-4);

  std::vector<double> solve(const std::vector<double>& rhs) const;
  double smallest_abs_eigenvalue() const { return smallest_abs_; }
  const RadialOperator& op() const { return op_; }

 private:
  RadialOperator op_;
  std::vector<double> sqrt_volume_;
  std::vector<double> dl_, d_, du_, du2_;
  std::vector<int> ipiv_;
  double smallest_abs_;
};

struct SpectrumSlice {
  std::vector<double> eigenvalues;                ///< ascending
  std::vector<std::vector<double>> eigenvectors;  ///< nodal values, unit grid norm
  int neg_count = 0;                              ///< eigenvalues < -tol (whole operator)
  std::vector<double> near_zero;                  ///< |lambda| <= tol among the computed ones
};

/// The k lowest eigenpairs (k <= 10).
SpectrumSlice low_spectrum(const RadialOperator& op, int k, double tol = 1e-4);

nlohmann::json to_json(const SpectrumSlice& slice);

/// Bottom of the essential spectrum, 1 + V0d alpha^-2.
double essential_edge(double alpha, double V0d);

}  // namespace warpsol

#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

namespace warpsol {

inline constexpr const char* kSpectralSchema = "warp-soliton/spectral-v1";

/// Chebyshev polynomials corrected by a quadratic so that each basis function
/// satisfies the three endpoint regularity conditions of the compactified
/// ground-state equation on x = (r-1)/(r+1):
///
///   4 g'(-1) - 3 g(-1) = 0,   16 g'(1) + 3 g(1) = 0,   16 g''(1) - 5 g'(1) - 3 g(1) = 0.
///
/// phi_n(x) = T_n(x) + a0_n + a1_n x + a2_n x^2. The correction annihilates
/// degrees 0..2, so phi_0 = phi_1 = phi_2 = 0 and the active functions are n = 3..n_max.
class ConstrainedBasis {
 public:
  explicit ConstrainedBasis(int n_max);

  int n_max() const { return n_max_; }
  int size() const { return n_max_ - 2; }  ///< number of active functions

  /// (a0_n, a1_n, a2_n) for 0 <= n <= n_max.
  const std::array<double, 3>& constraint(int n) const;

  /// phi_n and its derivatives (order 0..2).
  double phi(int n, double x, int order = 0) const;

  /// Values of the three regularity functionals applied to phi_n.
  std::array<double, 3> regularity_residuals(int n) const;

 private:
  int n_max_;
  std::vector<std::array<double, 3>> constraints_;
};

/// Builds the basis; n_max >= 3.
std::shared_ptr<const ConstrainedBasis> build_basis(int n_max);

struct CollocationGrid {
  std::vector<double> nodes;  ///< strictly increasing, inside (-1, 1)
  std::size_t count() const { return nodes.size(); }
};

/// Chebyshev-Gauss nodes cos((2k+1)pi/(2 count)), sorted ascending.
CollocationGrid collocation_nodes(int count);

/// Clenshaw evaluation of sum_k c_k T_k(x).
double chebyshev_clenshaw(std::span<const double> coeffs, double x);

/// Coefficients of the derivative of a Chebyshev series.
std::vector<double> chebyshev_derivative(std::span<const double> coeffs);

/// A radial profile f(r) = (1+r)^{-1/2} e^{-r} g((r-1)/(r+1)) with g expanded in
/// a ConstrainedBasis. Immutable.
class SpectralFunction {
 public:
  /// `coeffs` holds beta_3..beta_{n_max}.
  SpectralFunction(std::shared_ptr<const ConstrainedBasis> basis, std::vector<double> coeffs);

  const ConstrainedBasis& basis() const { return *basis_; }
  std::shared_ptr<const ConstrainedBasis> basis_ptr() const { return basis_; }
  int n_max() const { return basis_->n_max(); }
  std::span<const double> coeffs() const { return coeffs_; }

  /// g(x) for x in [-1, 1].
  double eval(double x) const;
  /// g'(x) or g''(x); order must be 1 or 2.
  double eval_deriv(double x, int order) const;

  /// f(r) for r >= 0; r = +inf gives 0.
  double to_radial(double r) const;
  /// d^k f / dr^k for k in {1, 2}.
  double radial_deriv(double r, int order) const;

  /// Plain Chebyshev coefficients of g (length n_max + 1).
  std::span<const double> chebyshev_coeffs() const { return cheb_[0]; }

 private:
  double series(double x, int order) const;

  std::shared_ptr<const ConstrainedBasis> basis_;
  std::vector<double> coeffs_;
  std::array<std::vector<double>, 3> cheb_;
};

/// Interpolates g at the nodes (count must equal basis->size()).
SpectralFunction interpolate(std::shared_ptr<const ConstrainedBasis> basis,
                             const std::function<double(double)>& g, const CollocationGrid& grid);

/// Least-squares fit of g on `samples` points spread over (-1, 1).
SpectralFunction least_squares_fit(std::shared_ptr<const ConstrainedBasis> basis,
                                   const std::function<double(double)>& g, int samples);

nlohmann::json to_json(const SpectralFunction& sf);
SpectralFunction spectral_from_json(const nlohmann::json& j);

}  // namespace warpsol

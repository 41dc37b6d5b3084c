#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace warpsol {

using RadialFn = std::function<double(double)>;

enum class QuadScheme { gauss_legendre_mapped, clenshaw_curtis_mapped };

/// How panel breakpoints are laid out on [0, r_max].
///  - linear: equal panels in r.
///  - compactified: equal panels in x = (r-1)/(r+1), which clusters them near the origin.
enum class QuadMapping { linear, compactified };

struct QuadratureRule {
  QuadScheme scheme = QuadScheme::gauss_legendre_mapped;
  int panels = 64;
  double r_max = 40.0;
  QuadMapping mapping = QuadMapping::linear;

  void validate() const;  ///< panels >= 8, r_max >= 20
};

/// |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2).
double sphere_area(int d);

/// Plain integral of f over [0, r_max]. Throws NumericalError on a non-finite sample.
double integrate(const RadialFn& f, const QuadratureRule& rule);

/// |S^{d-1}| * int_0^{r_max} f g r^{weight_power} r^{d-1} dr.
double inner_product(const RadialFn& f, const RadialFn& g, int weight_power, int d,
                     const QuadratureRule& rule);

struct ConvergenceProbe {
  std::vector<std::pair<int, double>> values;  ///< (panels, integral)
  bool converged = false;
};

/// Re-evaluates inner_product at rule.panels, 2x, 4x, ... (at most 6 doublings)
/// and stops once two successive values agree to `tol` (absolute, scaled by max(1, |value|)).
ConvergenceProbe convergence_probe(const RadialFn& f, const RadialFn& g, int weight_power, int d,
                                   const QuadratureRule& rule, double tol = 1e-10);

}  // namespace warpsol

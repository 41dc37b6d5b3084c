#include "warpsol/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "warpsol/errors.hpp"

namespace warpsol {

namespace {

constexpr int kPanelPoints = 20;

struct Node {
  double x;
  double w;
};

// Reference rule on [-1, 1].
std::vector<Node> gauss_nodes() {
  using G = boost::math::quadrature::gauss<double, kPanelPoints>;
  std::vector<Node> out;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.push_back({a[i], w[i]});
    if (a[i] != 0.0) out.push_back({-a[i], w[i]});
  }
  return out;
}

// Clenshaw-Curtis on n+1 points, weights from the closed-form cosine sum.
std::vector<Node> clenshaw_curtis_nodes() {
  constexpr int n = kPanelPoints;
  std::vector<Node> out;
  for (int k = 0; k <= n; ++k) {
    const double theta = k * std::numbers::pi / n;
    double s = 0.0;
    for (int j = 1; j <= n / 2; ++j) {
      const double b = (j == n / 2) ? 1.0 : 2.0;
      s += b / (4.0 * j * j - 1.0) * std::cos(2.0 * j * theta);
    }
    const double c = (k == 0 || k == n) ? 1.0 : 2.0;
    out.push_back({std::cos(theta), c / n * (1.0 - s)});
  }
  return out;
}

const std::vector<Node>& reference_nodes(QuadScheme scheme) {
  static const std::vector<Node> gl = gauss_nodes();
  static const std::vector<Node> cc = clenshaw_curtis_nodes();
  return scheme == QuadScheme::gauss_legendre_mapped ? gl : cc;
}

double breakpoint(const QuadratureRule& rule, int k) {
  const double t = static_cast<double>(k) / rule.panels;
  if (k == rule.panels) return rule.r_max;
  if (rule.mapping == QuadMapping::linear) return t * rule.r_max;
  const double x_end = (rule.r_max - 1.0) / (rule.r_max + 1.0);
  const double x = -1.0 + t * (x_end + 1.0);
  return (1.0 + x) / (1.0 - x);
}

}  // namespace

void QuadratureRule::validate() const {
  if (panels < 8) throw std::invalid_argument("quadrature: panels must be >= 8");
  if (!(r_max >= 20.0)) throw std::invalid_argument("quadrature: r_max must be >= 20");
}

double sphere_area(int d) {
  if (d < 1) throw std::invalid_argument("sphere_area: d must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double integrate(const RadialFn& f, const QuadratureRule& rule) {
  rule.validate();
  const auto& ref = reference_nodes(rule.scheme);
  double total = 0.0;
  for (int k = 0; k < rule.panels; ++k) {
    const double a = breakpoint(rule, k), b = breakpoint(rule, k + 1);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double panel = 0.0;
    for (const auto& node : ref) {
      const double r = mid + half * node.x;
      const double v = f(r);
      if (!std::isfinite(v)) {
        throw NumericalError("quadrature: non-finite integrand at r = " + std::to_string(r));
      }
      panel += node.w * v;
    }
    total += half * panel;
  }
  return total;
}

double inner_product(const RadialFn& f, const RadialFn& g, int weight_power, int d,
                     const QuadratureRule& rule) {
  if (d < 1) throw std::invalid_argument("inner_product: d must be >= 1");
  if (weight_power < 0) throw std::invalid_argument("inner_product: weight_power must be >= 0");
  const int power = weight_power + d - 1;
  const auto integrand = [&](double r) { return f(r) * g(r) * std::pow(r, power); };
  return sphere_area(d) * integrate(integrand, rule);
}

ConvergenceProbe convergence_probe(const RadialFn& f, const RadialFn& g, int weight_power, int d,
                                   const QuadratureRule& rule, double tol) {
  ConvergenceProbe probe;
  QuadratureRule r = rule;
  for (int k = 0; k <= 6; ++k) {
    const double v = inner_product(f, g, weight_power, d, r);
    probe.values.emplace_back(r.panels, v);
    if (probe.values.size() >= 2) {
      const double prev = probe.values[probe.values.size() - 2].second;
      if (std::abs(v - prev) <= tol * std::max(1.0, std::abs(v))) {
        probe.converged = true;
        break;
      }
    }
    r.panels *= 2;
  }
  return probe;
}

}  // namespace warpsol

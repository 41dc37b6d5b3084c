#include "warpsol/radial_grid.hpp"

#include <cmath>
#include <stdexcept>

#include "warpsol/quadrature.hpp"

namespace warpsol {

std::shared_ptr<const RadialGrid> make_radial_grid(int points, double r_max, double stretch,
                                                   int d) {
  if (points < 8) throw std::invalid_argument("radial grid: too few points");
  if (!(r_max > 0.0) || !(stretch > 0.0)) {
    throw std::invalid_argument("radial grid: r_max and stretch must be positive");
  }
  if (d < 1) throw std::invalid_argument("radial grid: d must be >= 1");
  auto g = std::make_shared<RadialGrid>();
  const auto m = static_cast<std::size_t>(points);
  g->d = d;
  g->r_max = r_max;
  g->stretch = stretch;
  g->r.resize(m);
  const double denom = std::sinh(stretch);
  for (std::size_t i = 0; i < m; ++i) {
    const double s = (static_cast<double>(i) + 0.5) / points;
    g->r[i] = r_max * std::sinh(stretch * s) / denom;
  }
  g->face.resize(m + 1);
  g->face[0] = 0.0;
  for (std::size_t i = 1; i < m; ++i) g->face[i] = 0.5 * (g->r[i - 1] + g->r[i]);
  g->face[m] = r_max;
  g->volume.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    g->volume[i] = (std::pow(g->face[i + 1], d) - std::pow(g->face[i], d)) / d;
  }
  g->flux.assign(m + 1, 0.0);
  for (std::size_t i = 1; i < m; ++i) {
    g->flux[i] = std::pow(g->face[i], d - 1) / (g->r[i] - g->r[i - 1]);
  }
  g->flux[m] = std::pow(r_max, d - 1) / (r_max - g->r[m - 1]);
  return g;
}

std::vector<double> RadialGrid::sample(const std::function<double(double)>& f) const {
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = f(r[i]);
  return out;
}

double RadialGrid::dot(const std::vector<double>& f, const std::vector<double>& g) const {
  if (f.size() != size() || g.size() != size()) {
    throw std::invalid_argument("RadialGrid::dot: size mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += volume[i] * f[i] * g[i];
  return sphere_area(d) * s;
}

double RadialGrid::norm(const std::vector<double>& f) const { return std::sqrt(dot(f, f)); }

std::vector<double> RadialGrid::laplacian(const std::vector<double>& f) const {
  if (f.size() != size()) throw std::invalid_argument("RadialGrid::laplacian: size mismatch");
  const std::size_t m = size();
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double left = i > 0 ? flux[i] * (f[i - 1] - f[i]) : 0.0;
    const double right = i + 1 < m ? flux[i + 1] * (f[i + 1] - f[i]) : -flux[m] * f[i];
    out[i] = (left + right) / volume[i];
  }
  return out;
}

}  // namespace warpsol

#include "warpsol/manifold_soliton.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "warpsol/errors.hpp"
#include "warpsol/linearized.hpp"
#include "warpsol/quadrature.hpp"

namespace warpsol {

namespace {

double F(double s, double p) { return p == 3.0 ? s * s * s : std::pow(std::abs(s), p - 1.0) * s; }
double dF(double s, double p) { return p == 3.0 ? 3.0 * s * s : p * std::pow(std::abs(s), p - 1.0); }

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

EuclideanBackground make_background(const SolverConfig& config) {
  return make_background(config, solve_ground_state(config, config.n_max_fine));
}

EuclideanBackground make_background(const SolverConfig& config, GroundState fine) {
  config.validate();
  EuclideanBackground bg;
  bg.config = config;
  bg.ground_state = std::make_shared<const GroundState>(std::move(fine));
  bg.grid = make_radial_grid(config.grid_points, config.r_max, config.grid_stretch, 2);
  const auto& gs = *bg.ground_state;
  bg.Q = bg.grid->sample([&](double r) { return gs.profile.to_radial(r); });
  bg.mass = mass(gs, QuadratureRule{QuadScheme::gauss_legendre_mapped, config.quad_panels,
                                    config.r_max, QuadMapping::linear});
  return bg;
}

CurvedSoliton fixed_point_rho(double alpha, const WarpingFunction& warp,
                              const EuclideanBackground& bg) {
  const auto& cfg = bg.config;
  if (!(alpha >= cfg.alpha_min)) {
    throw std::invalid_argument("fixed_point_rho: alpha below alpha_min");
  }
  const auto& grid = *bg.grid;
  const std::size_t m = grid.size();
  const double p = bg.p;
  const int d = bg.d;
  std::vector<double> q(m), v(m), fq(m), dfq(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double s = grid.r[i] / alpha;
    q[i] = 1.0 - weight_phi(warp, d, p, s);
    v[i] = potential_V(warp, d, s) / (alpha * alpha);
    fq[i] = F(bg.Q[i], p);
    dfq[i] = dF(bg.Q[i], p);
  }
  const FactorizedOperator a_alpha(build_A(alpha, warp, d, p, bg.Q, bg.grid), cfg.eig_tol);

  CurvedSoliton cs;
  cs.alpha = alpha;
  cs.warp = warp;
  cs.d = d;
  cs.p = p;
  cs.rho.assign(m, 0.0);
  std::vector<double> rhs(m);
  int growth = 0;
  while (true) {
    for (std::size_t i = 0; i < m; ++i) {
      const double rho = cs.rho[i];
      const double n = F(bg.Q[i] + rho, p) - fq[i] - dfq[i] * rho;
      rhs[i] = -(q[i] * dfq[i] * rho + (q[i] - 1.0) * n + v[i] * bg.Q[i] + q[i] * fq[i]);
    }
    auto next = a_alpha.solve(rhs);
    double diff = 0.0;
    for (std::size_t i = 0; i < m; ++i) diff = std::max(diff, std::abs(next[i] - cs.rho[i]));
    cs.rho = std::move(next);
    ++cs.iterations;
    const auto& h = cs.difference_history;
    if (!h.empty() && h.back() > 0.0) cs.contraction_factor = diff / h.back();
    growth = (!h.empty() && diff > h.back()) ? growth + 1 : 0;
    cs.difference_history.push_back(diff);
    cs.fixed_point_residual = diff;
    if (!std::isfinite(diff) || growth >= 3) {
      throw ConvergenceError("fixed-point iteration for rho is not contracting at alpha = " +
                             std::to_string(alpha));
    }
    if (diff < cfg.fixedpoint_tol) break;
    if (cs.iterations >= cfg.fixedpoint_max_iter) {
      throw ConvergenceError("fixed-point iteration for rho did not converge at alpha = " +
                             std::to_string(alpha));
    }
  }
  cs.sup_norm = sup_abs(cs.rho);
  cs.h2_proxy = grid.norm(cs.rho) + grid.norm(grid.laplacian(cs.rho));
  return cs;
}

double profile_equation_residual(const CurvedSoliton& cs, const EuclideanBackground& bg,
                                 double r_limit) {
  const auto& grid = *bg.grid;
  const auto& g = bg.ground_state->profile;
  const double alpha = cs.alpha;
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < grid.size() && grid.r[i] <= r_limit; ++i) {
    const double r = grid.r[i];
    const double hl = r - grid.r[i - 1], hr = grid.r[i + 1] - r;
    const double rl = cs.rho[i - 1], rc = cs.rho[i], rr = cs.rho[i + 1];
    const double d2 = 2.0 * (hl * rr - (hl + hr) * rc + hr * rl) / (hl * hr * (hl + hr));
    const double d1 = (hl * hl * rr + (hr * hr - hl * hl) * rc - hr * hr * rl) / (hl * hr * (hl + hr));
    const double lap_rho = d2 + (cs.d - 1) * d1 / r;
    const double lap_q = g.radial_deriv(r, 2) + (cs.d - 1) * g.radial_deriv(r, 1) / r;
    const double R = g.to_radial(r) + rc;
    const double s = r / alpha;
    const double res = lap_q + lap_rho - R - potential_V(cs.warp, cs.d, s) / (alpha * alpha) * R +
                       weight_phi(cs.warp, cs.d, cs.p, s) * F(R, cs.p);
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

StraussResult strauss_check(const std::vector<double>& rho, const RadialGrid& grid, double bound) {
  if (rho.size() != grid.size()) throw std::invalid_argument("strauss_check: size mismatch");
  StraussResult out;
  const std::size_t m = grid.size();
  double energy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double next = i + 1 < m ? rho[i + 1] : 0.0;
    energy += grid.flux[i + 1] * (next - rho[i]) * (next - rho[i]) + grid.volume[i] * rho[i] * rho[i];
  }
  out.h1_proxy = std::sqrt(sphere_area(grid.d) * energy);
  const double expo = 0.5 * (grid.d - 1);
  double outer = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = grid.r[i];
    if (r < 1.0) continue;
    const double w = std::pow(1.0 + r * r, 0.5 * expo) * std::abs(rho[i]);
    out.weighted_sup = std::max(out.weighted_sup, w);
    if (r >= 0.75 * grid.r_max) outer = std::max(outer, w);
  }
  if (out.h1_proxy == 0.0) {
    out.pass = out.weighted_sup == 0.0;
    return out;
  }
  out.constant = out.weighted_sup / out.h1_proxy;
  out.decays = outer <= 1e-3 * out.weighted_sup;
  out.pass = std::isfinite(out.weighted_sup) && out.constant <= bound && out.decays;
  return out;
}

StraussResult strauss_check(const CurvedSoliton& cs, const EuclideanBackground& bg, double bound) {
  return strauss_check(cs.rho, *bg.grid, bound);
}

double manifold_mass(const CurvedSoliton& cs, const EuclideanBackground& bg) {
  std::vector<double> cross(cs.rho.size());
  for (std::size_t i = 0; i < cross.size(); ++i) cross[i] = 2.0 * bg.Q[i] + cs.rho[i];
  return bg.mass + bg.grid->dot(cross, cs.rho);
}

std::string to_string(VkClass c) {
  switch (c) {
    case VkClass::unstable: return "unstable";
    case VkClass::stable_candidate: return "stable_candidate";
    case VkClass::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

VkResult vk_sign(const WarpingFunction& warp, double alpha, const EuclideanBackground& bg) {
  VkResult out;
  out.alpha = alpha;
  out.alpha_minus = 0.95 * alpha;
  out.alpha_plus = 1.05 * alpha;
  out.mass_minus = manifold_mass(fixed_point_rho(out.alpha_minus, warp, bg), bg);
  out.mass_plus = manifold_mass(fixed_point_rho(out.alpha_plus, warp, bg), bg);
  const double delta = out.mass_plus - out.mass_minus;
  out.d_mass_d_alpha = delta / (out.alpha_plus - out.alpha_minus);
  if (std::abs(delta) < 1e-8) {
    out.classification = VkClass::indeterminate;
  } else {
    out.classification = out.d_mass_d_alpha < 0.0 ? VkClass::unstable : VkClass::stable_candidate;
  }
  return out;
}

nlohmann::json to_json(const CurvedSoliton& cs, bool include_profile) {
  nlohmann::json j{{"alpha", cs.alpha},
                   {"warp", to_json(cs.warp)},
                   {"d", cs.d},
                   {"p", cs.p},
                   {"iterations", cs.iterations},
                   {"contraction_factor", cs.contraction_factor},
                   {"fixed_point_residual", cs.fixed_point_residual},
                   {"sup_norm", cs.sup_norm},
                   {"h2_proxy", cs.h2_proxy}};
  if (include_profile) j["rho"] = cs.rho;
  return j;
}

nlohmann::json to_json(const VkResult& vk) {
  return {{"alpha", vk.alpha},
          {"alpha_pair", {vk.alpha_minus, vk.alpha_plus}},
          {"mass_pair", {vk.mass_minus, vk.mass_plus}},
          {"d_mass_d_alpha", vk.d_mass_d_alpha},
          {"classification", to_string(vk.classification)}};
}

}  // namespace warpsol

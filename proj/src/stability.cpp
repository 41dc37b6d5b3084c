#include "warpsol/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "warpsol/errors.hpp"
#include "warpsol/linearized.hpp"

namespace warpsol {

namespace {

std::vector<double> combine(const std::vector<double>& a, double ca, const std::vector<double>& b,
                            double cb) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = ca * a[i] + cb * b[i];
  return out;
}

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double cosine(const RadialFn& f, const RadialFn& g, const QuadratureRule& rule) {
  const double fg = inner_product(f, g, 0, 2, rule);
  const double ff = inner_product(f, f, 0, 2, rule);
  const double gg = inner_product(g, g, 0, 2, rule);
  return fg / std::sqrt(ff * gg);
}

QuadratureRule default_rule(const SolverConfig& cfg) {
  return {QuadScheme::gauss_legendre_mapped, cfg.quad_panels, cfg.r_max, QuadMapping::linear};
}

}  // namespace

double S0_at(const GroundState& gs, double r) {
  return r * gs.profile.radial_deriv(r, 1) + gs.profile.to_radial(r);
}

std::vector<double> compute_S0(const GroundState& gs, const RadialGrid& grid) {
  return grid.sample([&](double r) { return S0_at(gs, r); });
}

SpectralFunction solve_S1_spectral(const GroundState& gs, int n_max) {
  if (n_max < 10) throw std::invalid_argument("solve_S1_spectral: n_max must be >= 10");
  const auto basis = build_basis(n_max);
  const int n = basis->size();
  const auto nodes = collocation_nodes(n);
  Eigen::MatrixXd m(n, n);
  Eigen::VectorXd rhs(n);
  for (int k = 0; k < n; ++k) {
    const double x = nodes.nodes[static_cast<std::size_t>(k)];
    const double om = 1.0 - x, op = 1.0 + x;
    const double w = om * om * op;
    const double c1 = 3.0 * x * x - 6.0 * x - 5.0;
    const double c0 = -0.75 * (3.0 - x);
    const double e = std::exp(-2.0 * op / om);
    const double g0 = gs.profile.eval(x);
    const double cubic = 6.0 * op / om * e * g0 * g0;
    for (int j = 0; j < n; ++j) {
      m(k, j) = w * basis->phi(j + 3, x, 2) + c1 * basis->phi(j + 3, x, 1) +
                (c0 + cubic) * basis->phi(j + 3, x, 0);
    }
    // -r^2 Q^3 on the right of L_+ becomes this source once the prefactor is divided out.
    rhs[k] = 2.0 * op * op * op / (om * om * om) * e * g0 * g0 * g0;
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible()) throw NumericalError("S1 collocation matrix is singular");
  const Eigen::VectorXd gamma = lu.solve(rhs);
  return {basis, std::vector<double>(gamma.data(), gamma.data() + n)};
}

ExpansionProfiles compute_Qhat1(const EuclideanBackground& bg) {
  const auto& gs = *bg.ground_state;
  const auto& grid = *bg.grid;
  ExpansionProfiles ex{bg.grid, bg.Q, compute_S0(gs, grid), {}, {}, {},
                       solve_S1_spectral(gs, bg.config.n_max_fine)};
  ex.S1 = grid.sample([&](double r) { return ex.S1_spectral.to_radial(r); });
  ex.Qhat1 = combine(ex.S0, 1.0, ex.S1, 1.0);

  const auto lplus = build_L(LVariant::plus, INFINITY, WarpingFunction::flat(), bg.d, bg.p, bg.Q,
                             bg.grid);
  std::vector<double> r2q3(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    r2q3[i] = grid.r[i] * grid.r[i] * bg.Q[i] * bg.Q[i] * bg.Q[i];
  }
  ex.l_plus_S0_residual = grid.norm(combine(warpsol::apply(lplus, ex.S0), 1.0, bg.Q, 2.0)) / grid.norm(bg.Q);
  ex.S1_residual = grid.norm(combine(warpsol::apply(lplus, ex.S1), 1.0, r2q3, 1.0)) / grid.norm(r2q3);
  const auto rhs = combine(bg.Q, -2.0, r2q3, -1.0);
  ex.Qhat1_direct = solve(lplus, rhs, bg.config.eig_tol);
  ex.Qhat1_residual = relative_residual(lplus, ex.Qhat1_direct, rhs);
  ex.split_vs_direct = sup_abs(combine(ex.Qhat1_direct, 1.0, ex.Qhat1, -1.0)) / sup_abs(ex.Qhat1);
  return ex;
}

Q2Solution compute_Q2(const ExpansionProfiles& ex, double c1, double c2, double eig_tol) {
  const auto& grid = *ex.grid;
  const std::size_t m = grid.size();
  std::vector<double> rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double r2 = grid.r[i] * grid.r[i];
    const double q = ex.Q[i];
    const double q1 = c1 * ex.Qhat1_direct[i];
    rhs[i] = -2.0 * c1 * q1 + (3.0 * c1 * c1 - 8.0 * c2) * r2 * q - 3.0 * c1 * r2 * q * q * q1 +
             3.0 * q * q1 * q1 + (c1 * c1 - c2) * r2 * r2 * q * q * q;
  }
  const auto lplus = build_L(LVariant::plus, INFINITY, WarpingFunction::flat(), grid.d, 3.0, ex.Q,
                             ex.grid);
  Q2Solution out;
  out.values = solve(lplus, rhs, eig_tol);
  out.residual = sup_abs(rhs) == 0.0 ? 0.0 : relative_residual(lplus, out.values, rhs);
  return out;
}

double compute_b1(const GroundState& gs, const SpectralFunction& S1, const QuadratureRule& rule) {
  const auto Q = [&](double r) { return gs.profile.to_radial(r); };
  const auto S0 = [&](double r) { return S0_at(gs, r); };
  const auto Qh = [&](double r) { return S0_at(gs, r) + S1.to_radial(r); };
  const auto bracket = [&](double r) {
    const double q = Q(r), qh = Qh(r), r2 = r * r;
    return 2.0 * qh - 3.0 * r2 * q + 3.0 * r2 * q * q * qh - 3.0 * q * qh * qh - r2 * r2 * q * q * q;
  };
  return inner_product(Qh, Qh, 0, 2, rule) + inner_product(S0, bracket, 0, 2, rule);
}

std::pair<double, double> compute_b2(const GroundState& gs, const QuadratureRule& rule) {
  const auto Q = [&](double r) { return gs.profile.to_radial(r); };
  const auto S0 = [&](double r) { return S0_at(gs, r); };
  const auto Q3 = [&](double r) { return std::pow(Q(r), 3); };
  const auto direct_weight = [&](double r) {
    const double q = Q(r), r2 = r * r;
    return 8.0 * r2 * q + r2 * r2 * q * q * q;
  };
  const double direct = inner_product(S0, direct_weight, 0, 2, rule);
  const double ibp = -8.0 * inner_product(Q, Q, 2, 2, rule) - 0.5 * inner_product(Q, Q3, 4, 2, rule);
  return {direct, ibp};
}

double StabilityConstants::b1_over_2pi() const { return b1 / (2.0 * std::numbers::pi); }

StabilityConstants compute_constants(const EuclideanBackground& bg, const ExpansionProfiles& ex) {
  const auto& gs = *bg.ground_state;
  const auto rule = default_rule(bg.config);
  StabilityConstants k;
  k.n_max = gs.profile.n_max();
  k.b1 = compute_b1(gs, ex.S1_spectral, rule);
  std::tie(k.b2_direct, k.b2_ibp) = compute_b2(gs, rule);
  k.mass = bg.mass;

  const auto Q = [&](double r) { return gs.profile.to_radial(r); };
  const auto S0 = [&](double r) { return S0_at(gs, r); };
  const auto Qh = [&](double r) { return S0_at(gs, r) + ex.S1_spectral.to_radial(r); };
  const auto r2Q3 = [&](double r) { return r * r * std::pow(Q(r), 3); };
  k.qhat1_norm_sq = inner_product(Qh, Qh, 0, 2, rule);
  k.S0_Q = cosine(S0, Q, rule);
  k.S0_r2Q3 = cosine(S0, r2Q3, rule);
  k.Q_Qhat1 = cosine(Q, Qh, rule);
  k.Q_r2Q = inner_product(Q, Q, 2, 2, rule);
  k.Q_r4Q3 = inner_product(Q, [&](double r) { return std::pow(Q(r), 3); }, 4, 2, rule);

  // Same formula on the finite-volume profiles.
  const auto& grid = *bg.grid;
  const auto& qh = ex.Qhat1_direct;
  std::vector<double> bracket(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double q = bg.Q[i], r2 = grid.r[i] * grid.r[i];
    bracket[i] = 2.0 * qh[i] - 3.0 * r2 * q + 3.0 * r2 * q * q * qh[i] - 3.0 * q * qh[i] * qh[i] -
                 r2 * r2 * q * q * q;
  }
  k.b1_grid = grid.dot(qh, qh) + grid.dot(ex.S0, bracket);
  return k;
}

std::string to_string(KappaClass c) {
  switch (c) {
    case KappaClass::unstable: return "unstable";
    case KappaClass::stable_candidate: return "stable_candidate";
    case KappaClass::degenerate: return "degenerate";
  }
  return "degenerate";
}

StabilityReport kappa(double c1, double c2, const StabilityConstants& k) {
  StabilityReport rep;
  rep.c1 = c1;
  rep.c2 = c2;
  rep.b1 = k.b1;
  rep.b2_direct = k.b2_direct;
  rep.b2_ibp = k.b2_ibp;
  rep.kappa = c1 * c1 * k.b1 + c2 * k.b2();
  const double tol = 1e-8 * std::abs(k.b1);
  if (rep.kappa > tol) {
    rep.classification = KappaClass::unstable;
  } else if (rep.kappa < -tol) {
    rep.classification = KappaClass::stable_candidate;
  } else {
    rep.classification = KappaClass::degenerate;
  }
  return rep;
}

ScanResult scan(std::pair<double, double> c1_range, std::pair<double, double> c2_range, int steps,
                const StabilityConstants& k, int jobs) {
  if (steps < 2) throw std::invalid_argument("scan: steps must be >= 2");
  for (double v : {c1_range.first, c1_range.second, c2_range.first, c2_range.second}) {
    if (!std::isfinite(v)) throw std::invalid_argument("scan: ranges must be finite");
  }
  const auto axis = [steps](std::pair<double, double> range, int i) {
    if (i == steps - 1) return range.second;
    return range.first + (range.second - range.first) * i / (steps - 1);
  };
  const auto n = static_cast<std::size_t>(steps);
  ScanResult out;
  out.rows.resize(n * n);
  jobs = std::clamp(jobs, 1, steps);
  const auto work = [&](int worker) {
    for (int i = worker; i < steps; i += jobs) {
      for (int j = 0; j < steps; ++j) {
        out.rows[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)] =
            kappa(axis(c1_range, i), axis(c2_range, j), k);
      }
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (int i = 0; i < steps; ++i) {
    const double c1 = axis(c1_range, i);
    out.boundary.emplace_back(c1, -c1 * c1 * k.b1 / k.b2());
  }
  return out;
}

std::string to_csv(const ScanResult& result) {
  std::string csv = "c1,c2,kappa,classification\n";
  for (const auto& row : result.rows) {
    csv += fmt::format("{},{},{},{}\n", row.c1, row.c2, row.kappa, to_string(row.classification));
  }
  return csv;
}

KappaCrossValidation cross_validate_kappa(double c1, double c2, const std::vector<double>& alphas,
                                          const EuclideanBackground& bg,
                                          const StabilityConstants& k) {
  KappaCrossValidation out;
  const auto warp = (c1 == 0.0 && c2 == 0.0) ? WarpingFunction::flat()
                                             : WarpingFunction::polynomial(c1, c2);
  const double kap = kappa(c1, c2, k).kappa;
  for (double alpha : alphas) {
    const auto vk = vk_sign(warp, alpha, bg);
    KappaCrossCheck row;
    row.alpha = alpha;
    row.fd_derivative = vk.d_mass_d_alpha;
    row.predicted = -4.0 * std::pow(alpha, -5.0) * kap;
    row.indeterminate = vk.classification == VkClass::indeterminate;
    row.relative_error = row.predicted != 0.0
                             ? std::abs(row.fd_derivative - row.predicted) / std::abs(row.predicted)
                             : std::abs(row.fd_derivative);
    row.sign_agrees = row.indeterminate ? row.predicted == 0.0 || std::abs(kap) <= 1e-8 * std::abs(k.b1)
                                        : std::signbit(row.fd_derivative) == std::signbit(row.predicted);
    out.rows.push_back(row);
  }
  out.error_decreasing = out.rows.size() >= 2;
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    if (!(out.rows[i].relative_error < out.rows[i - 1].relative_error)) out.error_decreasing = false;
  }
  return out;
}

nlohmann::json to_json(const StabilityConstants& k) {
  return {{"b1", k.b1},
          {"b1_over_2pi", k.b1_over_2pi()},
          {"b1_grid", k.b1_grid},
          {"b2_direct", k.b2_direct},
          {"b2_ibp", k.b2_ibp},
          {"mass", k.mass},
          {"n_max", k.n_max},
          {"identities",
           {{"S0_Q", k.S0_Q}, {"S0_r2Q3", k.S0_r2Q3}, {"Q_Qhat1", k.Q_Qhat1}}}};
}

nlohmann::json to_json(const StabilityReport& r) {
  return {{"c1", r.c1},
          {"c2", r.c2},
          {"b1", r.b1},
          {"b2_direct", r.b2_direct},
          {"b2_ibp", r.b2_ibp},
          {"kappa", r.kappa},
          {"classification", to_string(r.classification)}};
}

}  // namespace warpsol

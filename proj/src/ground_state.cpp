#include "warpsol/ground_state.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include "warpsol/errors.hpp"

namespace warpsol {

namespace {

// Coefficients of the scaled equation
//   w g'' + c1 g' + c0 g + c3 g^3 = 0,  w = (1-x)^2 (1+x).
struct ScaledCoeffs {
  double w, c1, c0, c3;
};

ScaledCoeffs scaled_coeffs(double x) {
  const double om = 1.0 - x, op = 1.0 + x;
  return {om * om * op, 3.0 * x * x - 6.0 * x - 5.0, -0.75 * (3.0 - x),
          2.0 * op / om * std::exp(-2.0 * op / om)};
}

}  // namespace

double scaled_cubic_residual(const SpectralFunction& g, double x) {
  const double v = g.eval(x);
  const double d1 = g.eval_deriv(x, 1);
  // At x = 1 both w and the nonlinear coefficient vanish.
  if (x == 1.0) return -8.0 * d1 - 1.5 * v;
  const auto c = scaled_coeffs(x);
  return c.w * g.eval_deriv(x, 2) + c.c1 * d1 + c.c0 * v + c.c3 * v * v * v;
}

double cubic_residual(const SpectralFunction& g, double x) {
  if (!(x > -1.0 && x < 1.0)) throw std::domain_error("cubic_residual: x must lie in (-1, 1)");
  return scaled_cubic_residual(g, x) / scaled_coeffs(x).w;
}

GroundState solve_ground_state(const SolverConfig& config, std::optional<int> n_max_override) {
  config.validate();
  const int n_max = n_max_override.value_or(config.n_max);
  if (n_max < 10) throw std::invalid_argument("solve_ground_state: n_max must be >= 10");
  const auto basis = build_basis(n_max);
  const int n = basis->size();
  const auto nodes = collocation_nodes(n);

  Eigen::MatrixXd p0(n, n), p1(n, n), p2(n, n);
  std::vector<ScaledCoeffs> coeffs(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double x = nodes.nodes[static_cast<std::size_t>(k)];
    coeffs[static_cast<std::size_t>(k)] = scaled_coeffs(x);
    for (int j = 0; j < n; ++j) {
      p0(k, j) = basis->phi(j + 3, x, 0);
      p1(k, j) = basis->phi(j + 3, x, 1);
      p2(k, j) = basis->phi(j + 3, x, 2);
    }
  }
  Eigen::VectorXd w(n), c1(n), c0(n), c3(n);
  for (int k = 0; k < n; ++k) {
    const auto& c = coeffs[static_cast<std::size_t>(k)];
    w[k] = c.w;
    c1[k] = c.c1;
    c0[k] = c.c0;
    c3[k] = c.c3;
  }
  const Eigen::MatrixXd linear =
      w.asDiagonal() * p2 + c1.asDiagonal() * p1 + c0.asDiagonal() * p0;
  const auto residual = [&](const Eigen::VectorXd& beta) -> Eigen::VectorXd {
    const Eigen::VectorXd g = p0 * beta;
    return linear * beta + (c3.array() * g.array().cube()).matrix();
  };

  // Start from the best constant-amplitude profile g = 2.2, i.e. f(0) near the expected peak.
  const auto guess = least_squares_fit(basis, [](double) { return 2.2; }, 400);
  Eigen::VectorXd beta = Eigen::Map<const Eigen::VectorXd>(guess.coeffs().data(), n);

  GroundState gs{guess, 2, 3.0, 0.0, 0, {}};
  Eigen::VectorXd res = residual(beta);
  double norm = res.cwiseAbs().maxCoeff();
  gs.residual_history.push_back(norm);
  int iter = 0;
  while (norm >= config.newton_tol) {
    if (iter >= config.newton_max_iter || !std::isfinite(norm)) {
      throw ConvergenceError("ground state Newton iteration did not converge (residual " +
                             std::to_string(norm) + ")");
    }
    const Eigen::VectorXd g = p0 * beta;
    const Eigen::MatrixXd jac =
        linear + (3.0 * c3.array() * g.array().square()).matrix().asDiagonal() * p0;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
    if (std::abs(lu.determinant()) == 0.0) throw NumericalError("ground state Jacobian is singular");
    const Eigen::VectorXd step = lu.solve(-res);
    double t = 1.0;
    Eigen::VectorXd trial = beta + step;
    Eigen::VectorXd trial_res = residual(trial);
    for (int halving = 0; halving < 8; ++halving) {
      const double tn = trial_res.cwiseAbs().maxCoeff();
      if (std::isfinite(tn) && tn < norm) break;
      t *= 0.5;
      trial = beta + t * step;
      trial_res = residual(trial);
    }
    ++iter;
    const bool stalled = (trial - beta).cwiseAbs().maxCoeff() <=
                         4.0 * std::numeric_limits<double>::epsilon() * beta.cwiseAbs().maxCoeff();
    beta = trial;
    res = trial_res;
    norm = res.cwiseAbs().maxCoeff();
    gs.residual_history.push_back(norm);
    if (stalled && norm >= config.newton_tol) {
      throw ConvergenceError("ground state Newton iteration stalled at residual " +
                             std::to_string(norm));
    }
  }
  gs.profile = SpectralFunction(basis, std::vector<double>(beta.data(), beta.data() + n));
  gs.residual_norm = norm;
  gs.newton_iters = iter;
  return gs;
}

GroundState solve_ground_state(int d, double p, const SolverConfig& config,
                               std::optional<int> n_max) {
  if (d != 2 || p != 3.0) {
    throw std::invalid_argument("the constrained spectral solver supports d = 2, p = 3 only");
  }
  return solve_ground_state(config, n_max);
}

double mass(const GroundState& gs, const QuadratureRule& rule) {
  const auto q = [&](double r) { return gs.profile.to_radial(r); };
  return inner_product(q, q, 0, 2, rule);
}

// ---------------------------------------------------------------------------
// Shooting oracle

ShotProfile::ShotProfile(int d, double p, double amplitude, double step, std::vector<double> f,
                         std::vector<double> df, double tail_start, double tail_scale)
    : d_(d),
      p_(p),
      amplitude_(amplitude),
      step_(step),
      f_(std::move(f)),
      df_(std::move(df)),
      tail_start_(tail_start),
      tail_scale_(tail_scale) {}

double ShotProfile::tail(double r, int order) const {
  const double nu = 0.5 * (d_ - 2);
  const double base = std::pow(r, -nu);
  if (order == 0) return tail_scale_ * base * std::cyl_bessel_k(std::abs(nu), r);
  return -tail_scale_ * base * std::cyl_bessel_k(std::abs(nu + 1.0), r);
}

double ShotProfile::operator()(double r) const {
  if (!(r >= 0.0)) throw std::domain_error("ShotProfile: r must be >= 0");
  if (r >= tail_start_) return std::isinf(r) ? 0.0 : tail(r, 0);
  const double s = r / step_;
  const auto i = std::min(static_cast<std::size_t>(s), f_.size() - 2);
  const double t = s - static_cast<double>(i);
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
  return h00 * f_[i] + h10 * step_ * df_[i] + h01 * f_[i + 1] + h11 * step_ * df_[i + 1];
}

double ShotProfile::deriv(double r) const {
  if (!(r >= 0.0)) throw std::domain_error("ShotProfile: r must be >= 0");
  if (r >= tail_start_) return std::isinf(r) ? 0.0 : tail(r, 1);
  const double s = r / step_;
  const auto i = std::min(static_cast<std::size_t>(s), f_.size() - 2);
  const double t = s - static_cast<double>(i);
  const double d00 = 6 * t * t - 6 * t, d10 = 3 * t * t - 4 * t + 1;
  const double d01 = -d00, d11 = 3 * t * t - 2 * t;
  return (d00 * f_[i] + d01 * f_[i + 1]) / step_ + d10 * df_[i] + d11 * df_[i + 1];
}

namespace {

using State = std::array<double, 2>;

enum class ShotOutcome { overshoot, undershoot, decayed };

struct Shooter {
  int d;
  double p;
  static constexpr double r0 = 1e-4;
  static constexpr double r_end = 40.0;

  void rhs(const State& y, State& dy, double r) const {
    const double f = y[0];
    dy[0] = y[1];
    dy[1] = -(d - 1) * y[1] / r + f - std::pow(std::abs(f), p - 1.0) * f;
  }

  State start(double a) const {
    const double c = (a - std::pow(a, p)) / (2.0 * d);
    return {a + c * r0 * r0, 2.0 * c * r0};
  }

  // Integrates until the trajectory crosses zero, turns upward, or reaches r_end.
  // Samples on the uniform grid of spacing `step` are collected while f > floor.
  ShotOutcome run(double a, double step, double floor, std::vector<double>* f,
                  std::vector<double>* df) const {
    namespace ode = boost::numeric::odeint;
    auto stepper = ode::make_dense_output(1e-13, 1e-13, ode::runge_kutta_dopri5<State>());
    const auto sys = [this](const State& y, State& dy, double r) { rhs(y, dy, r); };
    stepper.initialize(start(a), r0, 1e-4);
    const double c = (a - std::pow(a, p)) / (2.0 * d);
    std::size_t next = 0;
    bool sampling = f != nullptr;
    auto emit_series_until = [&](double limit) {
      for (double r = next * step; sampling && r < limit; r = (++next) * step) {
        f->push_back(a + c * r * r);
        df->push_back(2.0 * c * r);
      }
    };
    emit_series_until(r0);
    while (stepper.current_time() < r_end) {
      stepper.do_step(sys);
      const double t = stepper.current_time();
      if (sampling) {
        State y;
        for (double r = next * step; r <= t; r = (++next) * step) {
          stepper.calc_state(r, y);
          if (y[0] <= floor) {
            sampling = false;
            break;
          }
          f->push_back(y[0]);
          df->push_back(y[1]);
        }
      }
      const State& y = stepper.current_state();
      if (y[0] < 0.0) return ShotOutcome::overshoot;
      if (y[1] > 0.0) return ShotOutcome::undershoot;
      if (!sampling && f != nullptr) return ShotOutcome::decayed;
    }
    return ShotOutcome::decayed;
  }
};

}  // namespace

ShotProfile shoot_ground_state(int d, double p) {
  if (d < 1) throw std::invalid_argument("shoot_ground_state: d must be >= 1");
  if (!(p > 1.0) || (d > 2 && !(p < 1.0 + 4.0 / (d - 2)))) {
    throw std::invalid_argument("shoot_ground_state: p outside the admissible range");
  }
  const Shooter sh{d, p};
  double lo = 1.0 + 1e-3;
  if (sh.run(lo, 1.0, 0.0, nullptr, nullptr) == ShotOutcome::overshoot) {
    throw ConvergenceError("shooting: lower amplitude does not undershoot");
  }
  double hi = 2.0;
  while (sh.run(hi, 1.0, 0.0, nullptr, nullptr) != ShotOutcome::overshoot) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw ConvergenceError("shooting: no overshooting amplitude found");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sh.run(mid, 1.0, 0.0, nullptr, nullptr) == ShotOutcome::overshoot) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  // Sample the undershooting trajectory until it drops below a small threshold; beyond it
  // the nonlinearity is negligible and the decaying linear solution r^{-nu} K_nu(r) takes over.
  constexpr double step = 1e-3;
  const double floor = 1e-5 * lo;
  std::vector<double> f, df;
  sh.run(lo, step, floor, &f, &df);
  if (f.size() < 4) throw ConvergenceError("shooting: sampled profile too short");
  const double r_match = (f.size() - 1) * step;
  const double nu = 0.5 * (d - 2);
  const double scale = f.back() / (std::pow(r_match, -nu) * std::cyl_bessel_k(std::abs(nu), r_match));
  return {d, p, lo, step, std::move(f), std::move(df), r_match, scale};
}

}  // namespace warpsol

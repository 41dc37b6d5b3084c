#include "warpsol/cheb_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace warpsol {

namespace {

// Rows: regularity functionals; columns: monomials 1, x, x^2.
Eigen::Matrix3d monomial_constraint_matrix() {
  Eigen::Matrix3d m;
  m << -3.0, 7.0, -11.0,  //
      3.0, 19.0, 35.0,    //
      -3.0, -8.0, 19.0;
  return m;
}

// Regularity functionals applied to T_n, using T_n(1) = 1, T_n(-1) = (-1)^n,
// T_n'(+-1) = (+-1)^{n+1} n^2, T_n''(1) = n^2 (n^2 - 1) / 3.
Eigen::Vector3d chebyshev_constraint_values(int n) {
  const double n2 = static_cast<double>(n) * n;
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return {sign * (-4.0 * n2 - 3.0), 16.0 * n2 + 3.0, 16.0 * n2 * (n2 - 1.0) / 3.0 - 5.0 * n2 - 3.0};
}

std::vector<double> unit_series(int n) {
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  c.back() = 1.0;
  return c;
}

void check_domain(double x) {
  if (!(x >= -1.0 && x <= 1.0)) {
    throw std::domain_error("spectral evaluation outside [-1, 1]: x = " + std::to_string(x));
  }
}

}  // namespace

double chebyshev_clenshaw(std::span<const double> c, double x) {
  if (c.empty()) return 0.0;
  double b1 = 0.0, b2 = 0.0;
  const double two_x = 2.0 * x;
  for (std::size_t k = c.size() - 1; k >= 1; --k) {
    const double b0 = c[k] + two_x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c[0] + x * b1 - b2;
}

std::vector<double> chebyshev_derivative(std::span<const double> c) {
  const std::size_t n = c.size() - 1;  // degree
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(n, 0.0);
  d[n - 1] = 2.0 * static_cast<double>(n) * c[n];
  if (n >= 2) d[n - 2] = 2.0 * static_cast<double>(n - 1) * c[n - 1];
  for (std::size_t k = n >= 3 ? n - 3 + 1 : 0; k-- > 0;) {
    d[k] = d[k + 2] + 2.0 * static_cast<double>(k + 1) * c[k + 1];
  }
  d[0] *= 0.5;
  return d;
}

ConstrainedBasis::ConstrainedBasis(int n_max) : n_max_(n_max) {
  if (n_max < 3) throw std::invalid_argument("ConstrainedBasis: n_max must be >= 3");
  const Eigen::Matrix3d m = monomial_constraint_matrix();
  const Eigen::FullPivLU<Eigen::Matrix3d> lu(m);
  if (!lu.isInvertible()) throw std::logic_error("regularity constraint system is singular");
  constraints_.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    const Eigen::Vector3d a = lu.solve(-chebyshev_constraint_values(n));
    constraints_.push_back({a[0], a[1], a[2]});
  }
}

const std::array<double, 3>& ConstrainedBasis::constraint(int n) const {
  return constraints_.at(static_cast<std::size_t>(n));
}

double ConstrainedBasis::phi(int n, double x, int order) const {
  const auto& a = constraint(n);
  std::vector<double> c = unit_series(n);
  for (int k = 0; k < order; ++k) c = chebyshev_derivative(c);
  const double t = chebyshev_clenshaw(c, x);
  switch (order) {
    case 0: return t + a[0] + a[1] * x + a[2] * x * x;
    case 1: return t + a[1] + 2.0 * a[2] * x;
    case 2: return t + 2.0 * a[2];
    default: throw std::invalid_argument("ConstrainedBasis::phi: order must be 0, 1 or 2");
  }
}

std::array<double, 3> ConstrainedBasis::regularity_residuals(int n) const {
  const double gm = phi(n, -1.0), gpm = phi(n, -1.0, 1);
  const double gp = phi(n, 1.0), gpp = phi(n, 1.0, 1), gppp = phi(n, 1.0, 2);
  return {4.0 * gpm - 3.0 * gm, 16.0 * gpp + 3.0 * gp, 16.0 * gppp - 5.0 * gpp - 3.0 * gp};
}

std::shared_ptr<const ConstrainedBasis> build_basis(int n_max) {
  return std::make_shared<const ConstrainedBasis>(n_max);
}

CollocationGrid collocation_nodes(int count) {
  if (count < 1) throw std::invalid_argument("collocation_nodes: count must be >= 1");
  CollocationGrid grid;
  grid.nodes.resize(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    // k-th node from the left: cos of the angle counted from pi.
    const int j = count - 1 - k;
    grid.nodes[static_cast<std::size_t>(k)] =
        std::cos((2.0 * j + 1.0) * std::numbers::pi / (2.0 * count));
  }
  // Symmetric pairs should cancel exactly; the middle node of an odd grid is 0.
  if (count % 2 == 1) grid.nodes[static_cast<std::size_t>(count / 2)] = 0.0;
  return grid;
}

SpectralFunction::SpectralFunction(std::shared_ptr<const ConstrainedBasis> basis,
                                   std::vector<double> coeffs)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
  if (!basis_) throw std::invalid_argument("SpectralFunction: null basis");
  if (static_cast<int>(coeffs_.size()) != basis_->size()) {
    throw std::invalid_argument("SpectralFunction: expected " + std::to_string(basis_->size()) +
                                " coefficients, got " + std::to_string(coeffs_.size()));
  }
  auto& c = cheb_[0];
  c.assign(static_cast<std::size_t>(basis_->n_max()) + 1, 0.0);
  for (int n = 3; n <= basis_->n_max(); ++n) {
    const double beta = coeffs_[static_cast<std::size_t>(n - 3)];
    const auto& a = basis_->constraint(n);
    c[static_cast<std::size_t>(n)] += beta;
    c[0] += beta * (a[0] + 0.5 * a[2]);
    c[1] += beta * a[1];
    c[2] += beta * 0.5 * a[2];
  }
  cheb_[1] = chebyshev_derivative(cheb_[0]);
  cheb_[2] = chebyshev_derivative(cheb_[1]);
}

double SpectralFunction::series(double x, int order) const {
  check_domain(x);
  return chebyshev_clenshaw(cheb_[static_cast<std::size_t>(order)], x);
}

double SpectralFunction::eval(double x) const { return series(x, 0); }

double SpectralFunction::eval_deriv(double x, int order) const {
  if (order != 1 && order != 2) {
    throw std::invalid_argument("eval_deriv: order must be 1 or 2");
  }
  return series(x, order);
}

double SpectralFunction::to_radial(double r) const {
  if (!(r >= 0.0)) throw std::domain_error("to_radial: r must be >= 0");
  if (std::isinf(r)) return 0.0;
  const double x = (r - 1.0) / (r + 1.0);
  return std::exp(-r) / std::sqrt(1.0 + r) * eval(x);
}

double SpectralFunction::radial_deriv(double r, int order) const {
  if (!(r >= 0.0)) throw std::domain_error("radial_deriv: r must be >= 0");
  if (order != 1 && order != 2) throw std::invalid_argument("radial_deriv: order must be 1 or 2");
  if (std::isinf(r)) return 0.0;
  const double x = (r - 1.0) / (r + 1.0);
  const double xr = 2.0 / ((r + 1.0) * (r + 1.0));
  const double xrr = -4.0 / ((r + 1.0) * (r + 1.0) * (r + 1.0));
  const double pre = std::exp(-r) / std::sqrt(1.0 + r);
  const double s = -0.5 / (1.0 + r) - 1.0;  // pre' / pre
  const double pre1 = pre * s;
  const double pre2 = pre * (s * s + 0.5 / ((1.0 + r) * (1.0 + r)));
  const double g = eval(x), g1 = series(x, 1);
  if (order == 1) return pre1 * g + pre * g1 * xr;
  const double g2 = series(x, 2);
  return pre2 * g + 2.0 * pre1 * g1 * xr + pre * (g2 * xr * xr + g1 * xrr);
}

SpectralFunction interpolate(std::shared_ptr<const ConstrainedBasis> basis,
                             const std::function<double(double)>& g, const CollocationGrid& grid) {
  const int n = basis->size();
  if (static_cast<int>(grid.count()) != n) {
    throw std::invalid_argument("interpolate: node count must equal the basis size");
  }
  Eigen::MatrixXd m(n, n);
  Eigen::VectorXd rhs(n);
  for (int k = 0; k < n; ++k) {
    const double x = grid.nodes[static_cast<std::size_t>(k)];
    for (int j = 0; j < n; ++j) m(k, j) = basis->phi(j + 3, x);
    rhs[k] = g(x);
  }
  const Eigen::VectorXd beta = m.fullPivLu().solve(rhs);
  return {std::move(basis), std::vector<double>(beta.data(), beta.data() + n)};
}

SpectralFunction least_squares_fit(std::shared_ptr<const ConstrainedBasis> basis,
                                   const std::function<double(double)>& g, int samples) {
  const int n = basis->size();
  if (samples < n) throw std::invalid_argument("least_squares_fit: too few samples");
  const CollocationGrid pts = collocation_nodes(samples);
  Eigen::MatrixXd m(samples, n);
  Eigen::VectorXd rhs(samples);
  for (int k = 0; k < samples; ++k) {
    const double x = pts.nodes[static_cast<std::size_t>(k)];
    for (int j = 0; j < n; ++j) m(k, j) = basis->phi(j + 3, x);
    rhs[k] = g(x);
  }
  const Eigen::VectorXd beta = m.colPivHouseholderQr().solve(rhs);
  return {std::move(basis), std::vector<double>(beta.data(), beta.data() + n)};
}

nlohmann::json to_json(const SpectralFunction& sf) {
  return {
      {"schema", kSpectralSchema},
      {"n_max", sf.n_max()},
      {"coeffs", std::vector<double>(sf.coeffs().begin(), sf.coeffs().end())},
      {"prefactor", "ground_state_form"},
  };
}

SpectralFunction spectral_from_json(const nlohmann::json& j) {
  if (j.value("schema", std::string{}) != kSpectralSchema) {
    throw std::invalid_argument("spectral function: unexpected schema");
  }
  if (j.value("prefactor", std::string{}) != "ground_state_form") {
    throw std::invalid_argument("spectral function: unsupported prefactor");
  }
  const int n_max = j.at("n_max").get<int>();
  return {build_basis(n_max), j.at("coeffs").get<std::vector<double>>()};
}

}  // namespace warpsol

#include "warpsol/linearized.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <lapacke.h>

#include "warpsol/errors.hpp"
#include "warpsol/quadrature.hpp"

namespace warpsol {

namespace {

double nonlinear_power(double u, double p) {
  return p == 3.0 ? u * u : std::pow(std::abs(u), p - 1.0);
}

void check_profile(const std::vector<double>& f, const RadialGrid& grid) {
  if (f.size() != grid.size()) throw std::invalid_argument("grid function has the wrong size");
}

// Gershgorin bound on the spectrum, used as the lower end of bisection intervals.
double gershgorin_lower(const std::vector<double>& d, const std::vector<double>& e) {
  double lo = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double left = i > 0 ? std::abs(e[i - 1]) : 0.0;
    const double right = i < e.size() ? std::abs(e[i]) : 0.0;
    lo = std::min(lo, d[i] - left - right);
  }
  return lo - 1.0;
}

// Eigenvalues with indices il..iu (1-based, ascending); no eigenvectors.
std::vector<double> eigenvalues_by_index(const RadialOperator& op, int il, int iu) {
  const auto d = op.diagonal();
  const auto e = op.off_diagonal();
  const auto n = static_cast<lapack_int>(d.size());
  lapack_int m = 0, nsplit = 0;
  std::vector<double> w(d.size());
  std::vector<lapack_int> iblock(d.size()), isplit(d.size());
  const lapack_int info = LAPACKE_dstebz('I', 'E', n, 0.0, 0.0, il, iu, 0.0, d.data(), e.data(),
                                         &m, &nsplit, w.data(), iblock.data(), isplit.data());
  if (info != 0) throw NumericalError("dstebz failed with info = " + std::to_string(info));
  w.resize(static_cast<std::size_t>(m));
  return w;
}

}  // namespace

LVariant variant_from_string(const std::string& name) {
  if (name == "plus") return LVariant::plus;
  if (name == "minus") return LVariant::minus;
  throw std::invalid_argument("unknown operator variant '" + name + "'");
}

std::vector<double> RadialOperator::diagonal() const {
  const auto& g = *grid;
  const std::size_t m = g.size();
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    out[i] = (g.flux[i] + g.flux[i + 1]) / g.volume[i] + constant_term + potential[i];
  }
  return out;
}

std::vector<double> RadialOperator::off_diagonal() const {
  const auto& g = *grid;
  const std::size_t m = g.size();
  std::vector<double> out(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    out[i] = -g.flux[i + 1] / std::sqrt(g.volume[i] * g.volume[i + 1]);
  }
  return out;
}

RadialOperator build_L(LVariant variant, double alpha, const WarpingFunction& warp, int d,
                       double p, const std::vector<double>& profile,
                       std::shared_ptr<const RadialGrid> grid) {
  check_profile(profile, *grid);
  if (!(alpha > 0.0)) throw std::invalid_argument("build_L: alpha must be positive");
  const double sigma = variant == LVariant::plus ? p : 1.0;
  RadialOperator op{grid, std::vector<double>(grid->size()), 1.0, true};
  const bool euclidean = std::isinf(alpha);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double u = nonlinear_power(profile[i], p);
    if (euclidean) {
      op.potential[i] = -sigma * u;
    } else {
      const double s = grid->r[i] / alpha;
      op.potential[i] =
          -sigma * weight_phi(warp, d, p, s) * u + potential_V(warp, d, s) / (alpha * alpha);
    }
  }
  return op;
}

RadialOperator build_A(double alpha, const WarpingFunction& warp, int d, double p,
                       const std::vector<double>& Q, std::shared_ptr<const RadialGrid> grid) {
  check_profile(Q, *grid);
  if (!(alpha > 0.0)) throw std::invalid_argument("build_A: alpha must be positive");
  RadialOperator op{grid, std::vector<double>(grid->size()), 1.0, true};
  for (std::size_t i = 0; i < grid->size(); ++i) {
    op.potential[i] = -p * nonlinear_power(Q[i], p);
    if (!std::isinf(alpha)) op.potential[i] += potential_V(warp, d, grid->r[i] / alpha) / (alpha * alpha);
  }
  return op;
}

RadialOperator free_operator(std::shared_ptr<const RadialGrid> grid) {
  const std::size_t m = grid->size();
  return {std::move(grid), std::vector<double>(m, 0.0), 1.0, true};
}

std::vector<double> apply(const RadialOperator& op, const std::vector<double>& f) {
  check_profile(f, *op.grid);
  auto out = op.grid->laplacian(f);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = -out[i] + (op.constant_term + op.potential[i]) * f[i];
  }
  return out;
}

double relative_residual(const RadialOperator& op, const std::vector<double>& f,
                         const std::vector<double>& rhs) {
  auto res = warpsol::apply(op, f);
  for (std::size_t i = 0; i < res.size(); ++i) res[i] -= rhs[i];
  const double nr = op.grid->norm(rhs);
  return nr > 0.0 ? op.grid->norm(res) / nr : op.grid->norm(res);
}

int count_eigenvalues_below(const RadialOperator& op, double threshold) {
  const auto d = op.diagonal();
  const auto e = op.off_diagonal();
  const double lo = gershgorin_lower(d, e);
  if (threshold <= lo) return 0;
  const auto n = static_cast<lapack_int>(d.size());
  lapack_int m = 0, nsplit = 0;
  std::vector<double> w(d.size());
  std::vector<lapack_int> iblock(d.size()), isplit(d.size());
  // Only the count is needed; a coarse absolute tolerance keeps the bisection short.
  const lapack_int info = LAPACKE_dstebz('V', 'E', n, lo, threshold, 0, 0, 1e-3, d.data(),
                                         e.data(), &m, &nsplit, w.data(), iblock.data(),
                                         isplit.data());
  if (info != 0) throw NumericalError("dstebz failed with info = " + std::to_string(info));
  return static_cast<int>(m);
}

double smallest_abs_eigenvalue(const RadialOperator& op) {
  const int neg = count_eigenvalues_below(op, 0.0);
  const int n = static_cast<int>(op.size());
  const int il = std::max(1, neg);
  const int iu = std::min(n, neg + 1);
  const auto w = eigenvalues_by_index(op, il, iu);
  double best = std::numeric_limits<double>::infinity();
  for (double v : w) {
    if (std::abs(v) < std::abs(best)) best = v;
  }
  return best;
}

std::vector<double> solve(const RadialOperator& op, const std::vector<double>& rhs, double tol) {
  return FactorizedOperator(op, tol).solve(rhs);
}

FactorizedOperator::FactorizedOperator(RadialOperator op, double tol) : op_(std::move(op)) {
  smallest_abs_ = warpsol::smallest_abs_eigenvalue(op_);
  if (!(std::abs(smallest_abs_) > tol)) {
    throw SingularOperatorError(
        "operator is numerically singular (eigenvalue " + std::to_string(smallest_abs_) + ")",
        smallest_abs_);
  }
  const auto& g = *op_.grid;
  sqrt_volume_.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) sqrt_volume_[i] = std::sqrt(g.volume[i]);
  d_ = op_.diagonal();
  dl_ = op_.off_diagonal();
  du_ = dl_;
  du2_.assign(d_.size(), 0.0);
  ipiv_.assign(d_.size(), 0);
  const lapack_int info = LAPACKE_dgttrf(static_cast<lapack_int>(d_.size()), dl_.data(), d_.data(),
                                         du_.data(), du2_.data(), ipiv_.data());
  if (info != 0) throw NumericalError("dgttrf failed with info = " + std::to_string(info));
}

std::vector<double> FactorizedOperator::solve(const std::vector<double>& rhs) const {
  check_profile(rhs, *op_.grid);
  std::vector<double> b(rhs.size());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = sqrt_volume_[i] * rhs[i];
  const lapack_int info =
      LAPACKE_dgttrs(LAPACK_COL_MAJOR, 'N', static_cast<lapack_int>(b.size()), 1, dl_.data(),
                     d_.data(), du_.data(), du2_.data(), ipiv_.data(), b.data(),
                     static_cast<lapack_int>(b.size()));
  if (info != 0) throw NumericalError("dgttrs failed with info = " + std::to_string(info));
  for (std::size_t i = 0; i < b.size(); ++i) b[i] /= sqrt_volume_[i];
  return b;
}

SpectrumSlice low_spectrum(const RadialOperator& op, int k, double tol) {
  if (k < 1 || k > 10) throw std::invalid_argument("low_spectrum: k must be in 1..10");
  auto d = op.diagonal();
  auto e = op.off_diagonal();
  const auto n = static_cast<lapack_int>(d.size());
  e.push_back(0.0);  // dstevr workspace convention: e has length n
  lapack_int m = 0;
  std::vector<double> w(d.size());
  std::vector<double> z(d.size() * static_cast<std::size_t>(k));
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(k));
  const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0,
                                         0.0, 1, k, 0.0, &m, w.data(), z.data(), n, isuppz.data());
  if (info != 0) throw NumericalError("dstevr failed with info = " + std::to_string(info));
  const auto& g = *op.grid;
  const double area = sphere_area(g.d);
  SpectrumSlice slice;
  for (lapack_int j = 0; j < m; ++j) {
    slice.eigenvalues.push_back(w[static_cast<std::size_t>(j)]);
    std::vector<double> v(g.size());
    double orient = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      v[i] = z[static_cast<std::size_t>(j) * g.size() + i] / std::sqrt(g.volume[i] * area);
      orient += g.volume[i] * v[i];
    }
    if (orient < 0.0) {
      for (double& x : v) x = -x;
    }
    slice.eigenvectors.push_back(std::move(v));
    if (std::abs(w[static_cast<std::size_t>(j)]) <= tol) {
      slice.near_zero.push_back(w[static_cast<std::size_t>(j)]);
    }
  }
  slice.neg_count = count_eigenvalues_below(op, -tol);
  return slice;
}

nlohmann::json to_json(const SpectrumSlice& slice) {
  return {{"eigenvalues", slice.eigenvalues},
          {"neg_count", slice.neg_count},
          {"near_zero", slice.near_zero}};
}

double essential_edge(double alpha, double V0d) {
  if (!(alpha > 0.0)) throw std::invalid_argument("essential_edge: alpha must be positive");
  if (std::isinf(alpha)) return 1.0;
  return 1.0 + V0d / (alpha * alpha);
}

}  // namespace warpsol

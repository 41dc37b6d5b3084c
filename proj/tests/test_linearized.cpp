#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "support.hpp"
#include "warpsol/errors.hpp"
#include "warpsol/linearized.hpp"
#include "warpsol/stability.hpp"

using namespace warpsol;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const auto kPoly = WarpingFunction::polynomial(1, 0);

RadialOperator euclidean(LVariant v) {
  const auto& bg = testing::background();
  return build_L(v, kInf, WarpingFunction::flat(), 2, 3.0, bg.Q, bg.grid);
}

std::vector<double> scaled(const std::vector<double>& f, double c) {
  std::vector<double> out(f);
  for (double& v : out) v *= c;
  return out;
}

std::vector<double> random_smooth(const RadialGrid& grid, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0), width(0.3, 3.0), centre(0.0, 8.0);
  std::vector<std::array<double, 3>> bumps(6);
  for (auto& b : bumps) b = {amp(gen), width(gen), centre(gen)};
  return grid.sample([&](double r) {
    double s = 0.0;
    for (const auto& b : bumps) s += b[0] * std::exp(-std::pow((r - b[2]) / b[1], 2));
    return s;
  });
}

double cosine(const RadialGrid& g, const std::vector<double>& a, const std::vector<double>& b) {
  return g.dot(a, b) / (g.norm(a) * g.norm(b));
}

}  // namespace

TEST_CASE("dilation generator and kernel of the Euclidean operators") {
  const auto& bg = testing::background();
  const auto S0 = compute_S0(*bg.ground_state, *bg.grid);
  const auto lplus = euclidean(LVariant::plus);
  CHECK(relative_residual(lplus, S0, scaled(bg.Q, -2.0)) < 1e-4);

  const auto lminus = euclidean(LVariant::minus);
  const auto lq = warpsol::apply(lminus, bg.Q);
  CHECK(bg.grid->norm(lq) / bg.grid->norm(bg.Q) < 5e-4);

  const auto solved = solve(lplus, scaled(bg.Q, -2.0));
  double worst = 0.0;
  for (std::size_t i = 0; i < bg.grid->size() && bg.grid->r[i] <= 10.0; ++i)
    worst = std::max(worst, std::abs(solved[i] - S0[i]));
  CHECK(worst < 1e-4);
}

TEST_CASE("flat warp gives the Euclidean matrix at any alpha") {
  const auto& bg = testing::background();
  for (auto v : {LVariant::plus, LVariant::minus}) {
    const auto a = build_L(v, 7.5, WarpingFunction::flat(), 2, 3.0, bg.Q, bg.grid);
    const auto b = euclidean(v);
    CHECK(a.diagonal() == b.diagonal());
    CHECK(a.off_diagonal() == b.off_diagonal());
  }
}

TEST_CASE("solves") {
  const auto& bg = testing::background();
  const auto lplus = euclidean(LVariant::plus);
  const auto zero = solve(lplus, std::vector<double>(bg.grid->size(), 0.0));
  CHECK(testing::max_abs(zero) == 0.0);

  for (unsigned seed : {1u, 2u, 3u}) {
    const auto f = random_smooth(*bg.grid, seed);
    const auto back = solve(lplus, warpsol::apply(lplus, f));
    std::vector<double> diff(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) diff[i] = back[i] - f[i];
    CHECK(bg.grid->norm(diff) / bg.grid->norm(f) < 1e-8);
    const auto rhs = random_smooth(*bg.grid, seed + 10);
    CHECK(relative_residual(lplus, solve(lplus, rhs), rhs) < 1e-8);
  }

  CHECK_THROWS_AS(solve(euclidean(LVariant::minus), bg.Q), SingularOperatorError);
}

TEST_CASE("the discrete operator is symmetric") {
  const auto& bg = testing::background();
  const auto op = build_L(LVariant::plus, 8.0, kPoly, 2, 3.0, bg.Q, bg.grid);
  const auto f = random_smooth(*bg.grid, 7), g = random_smooth(*bg.grid, 8);
  const double fg = bg.grid->dot(warpsol::apply(op, f), g);
  const double gf = bg.grid->dot(f, warpsol::apply(op, g));
  CHECK(fg == doctest::Approx(gf).epsilon(1e-11));
  CHECK(op.diagonal().size() == op.size());
  CHECK(op.off_diagonal().size() + 1 == op.size());
}

TEST_CASE("Euclidean spectra") {
  const auto& bg = testing::background();
  const auto minus = low_spectrum(euclidean(LVariant::minus), 4, 1e-4);
  CHECK(minus.neg_count == 0);
  CHECK(minus.eigenvalues.front() >= -1e-6);
  CHECK(minus.near_zero.size() == 1);
  CHECK(minus.eigenvalues[1] > 0.5);
  CHECK(cosine(*bg.grid, minus.eigenvectors.front(), bg.Q) > 1.0 - 1e-6);
  for (std::size_t i = 1; i < minus.eigenvalues.size(); ++i)
    CHECK(minus.eigenvalues[i] > minus.eigenvalues[i - 1]);

  const auto plus = low_spectrum(euclidean(LVariant::plus), 4, 1e-4);
  CHECK(plus.neg_count == 1);
  CHECK(plus.eigenvalues[0] < -1.0);
  CHECK(plus.eigenvalues[1] > 1e-4);
  CHECK(plus.near_zero.empty());

  const auto free = low_spectrum(free_operator(bg.grid), 5, 1e-4);
  for (double e : free.eigenvalues) CHECK(e >= 1.0 - 1e-6);
  CHECK(free.neg_count == 0);

  const auto j = to_json(plus);
  CHECK(j.at("neg_count") == 1);
  CHECK(j.at("eigenvalues").size() == 4);
}

TEST_CASE("curved operators around Q + rho") {
  const auto& bg = testing::background();
  for (double alpha : {8.0, 16.0, 32.0, 64.0}) {
    const auto R = testing::plus(bg.Q, testing::rho_c1(alpha).rho);
    const auto lp = build_L(LVariant::plus, alpha, kPoly, 2, 3.0, R, bg.grid);
    CHECK(smallest_abs_eigenvalue(lp) > 0.5);
    CHECK(count_eigenvalues_below(lp, -1e-4) == 1);

    const auto lm = build_L(LVariant::minus, alpha, kPoly, 2, 3.0, R, bg.grid);
    CHECK(bg.grid->norm(warpsol::apply(lm, R)) / bg.grid->norm(R) < 5e-4);
    const auto sm = low_spectrum(lm, 2, 1e-4);
    CHECK(sm.eigenvalues.front() >= -1e-6);
    CHECK(sm.near_zero.size() == 1);
  }
}

TEST_CASE("eigenvalues converge under grid refinement") {
  const auto& bg = testing::background();
  const auto& cfg = bg.config;
  const auto fine = make_radial_grid(2 * cfg.grid_points, cfg.r_max, cfg.grid_stretch, 2);
  const auto Qf = fine->sample([&](double r) { return (*bg.ground_state)(r); });
  for (auto v : {LVariant::plus, LVariant::minus}) {
    const auto coarse = low_spectrum(euclidean(v), 3);
    const auto refined = low_spectrum(build_L(v, kInf, WarpingFunction::flat(), 2, 3.0, Qf, fine), 3);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(coarse.eigenvalues[i] - refined.eigenvalues[i]) < 1e-5);
  }
}

TEST_CASE("essential spectrum edge") {
  CHECK(essential_edge(3.0, 0.0) == 1.0);
  CHECK(essential_edge(2.0, 0.25) == doctest::Approx(1.0625));
  CHECK(essential_edge(kInf, 0.25) == 1.0);
}

TEST_CASE("variant names") {
  CHECK(variant_from_string("plus") == LVariant::plus);
  CHECK(variant_from_string("minus") == LVariant::minus);
  CHECK_THROWS_AS(variant_from_string("zero"), std::invalid_argument);
}

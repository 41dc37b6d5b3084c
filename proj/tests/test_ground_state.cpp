#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "support.hpp"
#include "warpsol/errors.hpp"
#include "warpsol/ground_state.hpp"

using namespace warpsol;
using warpsol::testing::kGroundStateReference;

TEST_CASE("coefficients match the reference expansion") {
  const auto& gs = testing::table_ground_state();
  REQUIRE(gs.profile.n_max() == 25);
  double worst = 0.0;
  for (int n = 3; n <= 25; ++n)
    worst = std::max(worst, std::abs(gs.profile.coeffs()[n - 3] - kGroundStateReference[n - 3]));
  CHECK(worst < 1e-4);
  CHECK(gs.residual_norm < 1e-12);
  CHECK(gs.newton_iters <= 50);
}

TEST_CASE("collocation residual vanishes at the nodes") {
  const auto& gs = testing::table_ground_state();
  for (double x : collocation_nodes(gs.profile.basis().size()).nodes)
    CHECK(std::abs(scaled_cubic_residual(gs.profile, x)) < 1e-12);
}

TEST_CASE("off-collocation residual") {
  const auto fine = solve_ground_state(testing::default_config(), testing::default_config().n_max_fine);
  for (double x : {-0.9, 0.0, 0.9}) CHECK(std::abs(cubic_residual(fine.profile, x)) < 1e-6);
  // the tabulated resolution is accurate but not to this level everywhere
  const auto& gs = testing::table_ground_state();
  for (double x : {-0.9, 0.0, 0.9}) CHECK(std::abs(cubic_residual(gs.profile, x)) < 1e-2);
}

TEST_CASE("radial equation holds") {
  const auto& gs = *testing::background().ground_state;
  for (double r : {0.5, 1.0, 2.0}) {
    const double f = gs(r), f1 = gs.profile.radial_deriv(r, 1), f2 = gs.profile.radial_deriv(r, 2);
    CHECK(std::abs(f2 + f1 / r - f + f * f * f) < 1e-6);
  }
}

TEST_CASE("Newton converges quadratically") {
  const auto& h = testing::table_ground_state().residual_history;
  REQUIRE(h.size() >= 3);
  int checked = 0;
  for (std::size_t k = 0; k + 1 < h.size(); ++k) {
    if (h[k] >= 1e-2 || h[k + 1] < 1e-11) continue;  // before the basin, or at the round-off floor
    CHECK(h[k + 1] <= 50.0 * h[k] * h[k]);
    ++checked;
  }
  CHECK(checked >= 1);
}

TEST_CASE("profile is positive, decreasing and has the free decay rate") {
  const auto& gs = testing::table_ground_state();
  double prev = gs(0.0);
  for (int i = 1; i <= 400; ++i) {
    const double r = 0.1 * i;
    const double v = gs(r);
    CHECK(v > 0.0);
    CHECK(v < prev);
    prev = v;
  }
  const auto scaled = [&](double r) { return std::sqrt(r) * std::exp(r) * gs(r); };
  double lo = 1e300, hi = 0.0;
  for (double r = 10.0; r <= 20.0; r += 0.5) {
    lo = std::min(lo, scaled(r));
    hi = std::max(hi, scaled(r));
  }
  CHECK(lo > 0.0);
  CHECK((hi - lo) / hi < 0.02);
}

TEST_CASE("shooting oracle") {
  const auto& shot = testing::shot_townes();
  CHECK(shot.amplitude() == doctest::Approx(2.2062).epsilon(1e-4));
  CHECK(shot(25.0) < 1e-8);
  CHECK(shot(25.0) > 0.0);

  const auto sech = shoot_ground_state(1, 3.0);
  CHECK(sech.amplitude() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  for (double r : {0.5, 2.0, 5.0, 12.0, 20.0}) {
    const double exact = std::sqrt(2.0) / std::cosh(r);
    CHECK(std::abs(sech(r) - exact) < 1e-8);
    CHECK(std::abs(sech(r) - exact) / exact < 1e-5);
  }

  const auto quintic = shoot_ground_state(3, 3.0);
  CHECK(quintic.amplitude() > 0.0);
  CHECK_THROWS_AS(shoot_ground_state(3, 6.0), std::invalid_argument);
}

TEST_CASE("spectral and shooting profiles agree") {
  const auto& gs = testing::table_ground_state();
  const auto& shot = testing::shot_townes();
  double worst = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double r = 0.005 * i;
    worst = std::max(worst, std::abs(gs(r) - shot(r)));
  }
  CHECK(worst < 1e-4);
  CHECK(std::abs(gs.f0() - shot.amplitude()) < 1e-5);

  const double m_spec = mass(gs);
  auto s = [&](double r) { return shot(r); };
  const double m_shot = inner_product(s, s, 0, 2, {});
  CHECK(m_spec == doctest::Approx(11.7009).epsilon(1e-5));
  CHECK(std::abs(m_spec - m_shot) / m_shot < 1e-4);
}

TEST_CASE("mass is scale invariant and vanishes for the zero profile") {
  const auto& gs = testing::table_ground_state();
  const double m = mass(gs);
  QuadratureRule rule;
  rule.panels = 256;  // the compressed profiles need proportionally finer panels
  for (double a : {2.0, 4.0}) {
    auto f = [&](double r) { return a * gs(a * r); };
    CHECK(inner_product(f, f, 0, 2, rule) == doctest::Approx(m).epsilon(1e-12));
  }
  GroundState zero{SpectralFunction(build_basis(12), std::vector<double>(10, 0.0))};
  CHECK(mass(zero) == 0.0);
}

TEST_CASE("unsupported requests") {
  CHECK_THROWS_AS(solve_ground_state(3, 3.0, testing::default_config()), std::invalid_argument);
  CHECK_THROWS_AS(solve_ground_state(testing::default_config(), 8), std::invalid_argument);
  SolverConfig stingy;
  stingy.newton_max_iter = 1;
  CHECK_THROWS_AS(solve_ground_state(stingy), ConvergenceError);
}

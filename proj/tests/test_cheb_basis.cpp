#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "support.hpp"
#include "warpsol/cheb_basis.hpp"

using namespace warpsol;
using warpsol::testing::kConstraintN3;
using warpsol::testing::kGroundStateReference;

namespace {

SpectralFunction reference_profile() {
  auto basis = build_basis(25);
  return SpectralFunction(basis, {kGroundStateReference.begin(), kGroundStateReference.end()});
}

SpectralFunction single(int n_max, int n, double c = 1.0) {
  std::vector<double> coeffs(n_max - 2, 0.0);
  coeffs[n - 3] = c;
  return SpectralFunction(build_basis(n_max), coeffs);
}

}  // namespace

TEST_CASE("low degrees are annihilated") {
  auto basis = build_basis(10);
  for (int n = 0; n <= 2; ++n)
    for (double x : {-1.0, -0.4, 0.0, 0.3, 1.0})
      for (int order = 0; order <= 2; ++order) CHECK(basis->phi(n, x, order) == doctest::Approx(0.0));
}

TEST_CASE("n = 3 constraint matches the exact solution") {
  auto basis = build_basis(3);
  const auto& a = basis->constraint(3);
  for (int i = 0; i < 3; ++i) CHECK(a[i] == doctest::Approx(kConstraintN3[i]).epsilon(1e-14));
}

TEST_CASE("regularity conditions hold for every basis function") {
  // The functionals applied to T_n reach 16 n^2 (n^2 - 1)/3 in size, so for large n the
  // round-off floor of the absolute residual sits above 1e-12; measure it against that scale.
  auto basis = build_basis(60);
  for (int n = 3; n <= 60; ++n) {
    const double n2 = static_cast<double>(n) * n;
    const double scale = 16.0 * n2 * (n2 - 1.0) / 3.0 + 5.0 * n2 + 3.0;
    for (double v : basis->regularity_residuals(n)) {
      CHECK(std::abs(v) / scale < 1e-12);
      if (n <= 5) CHECK(std::abs(v) < 1e-12);
    }
  }
}

TEST_CASE("collocation nodes") {
  CHECK(collocation_nodes(1).nodes == std::vector<double>{0.0});
  const auto two = collocation_nodes(2).nodes;
  REQUIRE(two.size() == 2);
  CHECK(two[0] == doctest::Approx(-std::sqrt(2.0) / 2).epsilon(1e-15));
  CHECK(two[1] == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));

  const auto g = collocation_nodes(23).nodes;
  REQUIRE(g.size() == 23);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(std::abs(g[k]) < 1.0);
    if (k > 0) CHECK(g[k] > g[k - 1]);
    CHECK(std::abs(std::cos(23 * std::acos(g[k]))) < 1e-13);
  }
}

TEST_CASE("Clenshaw evaluation agrees with the trigonometric form") {
  std::vector<double> c = {0.3, -1.2, 0.5, 2.0, -0.7, 0.1};
  for (double x : {-1.0, -0.77, 0.0, 0.41, 1.0}) {
    double direct = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) direct += c[k] * std::cos(k * std::acos(x));
    CHECK(chebyshev_clenshaw(c, x) == doctest::Approx(direct).epsilon(1e-14));
  }
}

TEST_CASE("evaluation examples") {
  SpectralFunction zero(build_basis(12), std::vector<double>(10, 0.0));
  for (double x : {-1.0, 0.0, 0.5, 1.0}) {
    CHECK(zero.eval(x) == 0.0);
    CHECK(zero.eval_deriv(x, 1) == 0.0);
  }
  for (double r : {0.0, 1.0, 7.0}) CHECK(zero.to_radial(r) == 0.0);

  const auto c3 = single(8, 3);
  const auto& a = c3.basis().constraint(3);
  CHECK(c3.eval(1.0) == doctest::Approx(1.0 + a[0] + a[1] + a[2]).epsilon(1e-14));
  CHECK(c3.eval_deriv(0.0, 1) == doctest::Approx(-3.0 + a[1]).epsilon(1e-14));
  CHECK(c3.eval_deriv(0.5, 2) == doctest::Approx(24.0 * 0.5 + 2.0 * a[2]).epsilon(1e-13));
}

TEST_CASE("reference profile amplitude") {
  const auto sf = reference_profile();
  // f(0) = (1+0)^{-1/2} e^0 g(-1)
  CHECK(sf.to_radial(0.0) == doctest::Approx(sf.eval(-1.0)).epsilon(1e-15));
  CHECK(sf.eval(-1.0) == doctest::Approx(testing::shot_townes().amplitude()).epsilon(1e-4));
  CHECK(sf.to_radial(1.0) ==
        doctest::Approx(std::exp(-1.0) / std::sqrt(2.0) * sf.eval(0.0)).epsilon(1e-15));
  const double q3 = testing::shot_townes()(3.0);
  CHECK(std::abs(sf.to_radial(3.0) - q3) / q3 < 1e-4);
  CHECK(sf.to_radial(std::numeric_limits<double>::infinity()) == 0.0);
}

TEST_CASE("derivatives against central differences") {
  const auto sf = reference_profile();
  auto fd1 = [&](double x, double h) { return (sf.eval(x + h) - sf.eval(x - h)) / (2 * h); };
  auto fd2 = [&](double x, double h) {
    return (sf.eval(x + h) - 2 * sf.eval(x) + sf.eval(x - h)) / (h * h);
  };
  CHECK(std::abs(fd1(0.2, 1e-5) - sf.eval_deriv(0.2, 1)) < 1e-6);
  CHECK(std::abs(fd2(0.2, 1e-4) - sf.eval_deriv(0.2, 2)) < 1e-5);

  // second-order behaviour: the error drops with h^2 until round-off takes over
  for (double x : {-0.6, 0.1, 0.7}) {
    const double e4 = std::abs(fd1(x, 1e-4) - sf.eval_deriv(x, 1));
    const double e5 = std::abs(fd1(x, 1e-5) - sf.eval_deriv(x, 1));
    const double third = std::abs(fd1(x, 1e-3) - sf.eval_deriv(x, 1)) / 1e-6;
    CHECK(e4 <= 2.0 * third * 1e-8 + 1e-11);
    CHECK(e5 <= 2.0 * third * 1e-10 + 1e-10);
  }

  const double r = 2.5, h = 1e-5;
  const double dr = (sf.to_radial(r + h) - sf.to_radial(r - h)) / (2 * h);
  CHECK(std::abs(dr - sf.radial_deriv(r, 1)) < 1e-8);
  const double d2r = (sf.to_radial(r + 1e-4) - 2 * sf.to_radial(r) + sf.to_radial(r - 1e-4)) / 1e-8;
  CHECK(std::abs(d2r - sf.radial_deriv(r, 2)) < 1e-6);
}

TEST_CASE("domain errors") {
  const auto sf = single(8, 4);
  CHECK_THROWS_AS(sf.eval(1.5), std::domain_error);
  CHECK_THROWS_AS(sf.eval(-1.0001), std::domain_error);
  CHECK_THROWS_AS(sf.to_radial(-0.1), std::domain_error);
  CHECK_THROWS_AS(sf.eval_deriv(0.0, 3), std::invalid_argument);
  CHECK_THROWS(build_basis(2));
  CHECK_THROWS(SpectralFunction(build_basis(8), std::vector<double>(3, 0.0)));
}

TEST_CASE("fits reproduce constrained polynomials") {
  const int n_max = 30;
  auto basis = build_basis(n_max);
  std::vector<double> coeffs(n_max - 2);
  for (int n = 3; n <= n_max; ++n) coeffs[n - 3] = std::sin(1.7 * n) / (n * n);
  const SpectralFunction target(basis, coeffs);
  auto g = [&](double x) { return target.eval(x); };

  const auto interp = interpolate(basis, g, collocation_nodes(basis->size()));
  const auto lsq = least_squares_fit(basis, g, 200);
  for (int n = 3; n <= n_max; ++n) {
    CHECK(std::abs(interp.coeffs()[n - 3] - coeffs[n - 3]) < 1e-10);
    CHECK(std::abs(lsq.coeffs()[n - 3] - coeffs[n - 3]) < 1e-10);
  }
}

TEST_CASE("JSON round trip") {
  const auto sf = reference_profile();
  const auto j = to_json(sf);
  CHECK(j.at("schema") == kSpectralSchema);
  CHECK(j.at("prefactor") == "ground_state_form");
  CHECK(j.at("n_max") == 25);
  const auto back = spectral_from_json(j);
  for (std::size_t i = 0; i < sf.coeffs().size(); ++i) CHECK(back.coeffs()[i] == sf.coeffs()[i]);

  auto bad = j;
  bad["schema"] = "something-else";
  CHECK_THROWS(spectral_from_json(bad));
  bad = j;
  bad["coeffs"].erase(0);
  CHECK_THROWS(spectral_from_json(bad));
}

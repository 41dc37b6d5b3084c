#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "warpsol/geometry.hpp"

using namespace warpsol;

namespace {

// V_d straight from A, A', A'' for comparison with the cancellation-free evaluation.
double naive_V(const WarpingFunction& w, int d, double r) {
  const double A = w.A(r), dA = w.dA(r), d2A = w.d2A(r);
  return 0.5 * (d - 1) * d2A / A + 0.25 * (d - 1) * (d - 3) * (dA * dA / (A * A) - 1.0 / (r * r));
}

}  // namespace

TEST_CASE("curvatures of the model warps") {
  const auto h = WarpingFunction::hyperbolic();
  for (double r : {0.01, 0.3, 1.0, 4.0, 15.0}) {
    const auto k = sectional_curvatures(h, r);
    CHECK(k.radial == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(k.spherical == doctest::Approx(-1.0).epsilon(1e-9));
  }
  const auto f = WarpingFunction::flat();
  for (double r : {0.5, 3.0}) {
    const auto k = sectional_curvatures(f, r);
    CHECK(k.radial == 0.0);
    CHECK(k.spherical == 0.0);
  }
}

TEST_CASE("polynomial radial curvature") {
  CHECK(sectional_curvatures(WarpingFunction::polynomial(1, 0), 1e-8).radial ==
        doctest::Approx(-6.0).epsilon(1e-12));
  const double c1 = 0.7, c2 = -0.05, r = 0.9;
  const auto w = WarpingFunction::polynomial(c1, c2);
  const double expected = -(6 * c1 + 20 * c2 * r * r) / (1 + c1 * r * r + c2 * std::pow(r, 4));
  CHECK(sectional_curvatures(w, r).radial == doctest::Approx(expected).epsilon(1e-13));
  const double dA = w.dA(r), A = w.A(r);
  CHECK(sectional_curvatures(w, r).spherical == doctest::Approx((1 - dA * dA) / (A * A)).epsilon(1e-12));
}

TEST_CASE("potential V") {
  const auto f = WarpingFunction::flat();
  for (int d : {2, 3, 4})
    for (double r : {0.0, 0.5, 10.0}) CHECK(potential_V(f, d, r) == 0.0);

  const auto h = WarpingFunction::hyperbolic();
  CHECK(std::abs(potential_V(h, 2, 20.0) - 0.25) < 1e-3);
  // r -> 0 limit: 1/2 - (1/4)(2/3)
  CHECK(potential_V(h, 2, 0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(potential_V(h, 2, 0.0099) == doctest::Approx(potential_V(h, 2, 0.0101)).epsilon(1e-6));

  const auto p = WarpingFunction::polynomial(1, 0);
  for (double r : {0.0, 0.3, 2.0}) {
    const double u = r * r;
    CHECK(potential_V(p, 2, r) == doctest::Approx((2 + u) / ((1 + u) * (1 + u))).epsilon(1e-13));
  }
  CHECK(std::abs(potential_V(p, 2, 100.0)) < 1e-2);
  CHECK(std::abs(potential_V(p, 2, 400.0)) < std::abs(potential_V(p, 2, 200.0)));
  CHECK(std::abs(potential_V(p, 2, 200.0)) < std::abs(potential_V(p, 2, 100.0)));

  const auto q = WarpingFunction::odd_polynomial({0.4, -0.02, 0.003});
  for (int d : {2, 3, 4})
    for (double r : {0.7, 1.3, 3.0})
      CHECK(potential_V(q, d, r) == doctest::Approx(naive_V(q, d, r)).epsilon(1e-10));
  CHECK(potential_V(h, 4, 1.1) == doctest::Approx(naive_V(h, 4, 1.1)).epsilon(1e-12));
  CHECK_THROWS_AS(potential_V(p, 2, -1.0), std::domain_error);
}

TEST_CASE("weight phi") {
  CHECK(weight_phi(WarpingFunction::flat(), 2, 3.0, 4.0) == 1.0);
  const auto p = WarpingFunction::polynomial(0.5, 0.1);
  for (double r : {0.0, 0.8, 3.0})
    CHECK(weight_phi(p, 2, 3.0, r) ==
          doctest::Approx(1.0 / (1 + 0.5 * r * r + 0.1 * std::pow(r, 4))).epsilon(1e-14));
  CHECK(weight_phi(WarpingFunction::hyperbolic(), 2, 3.0, 1.0) ==
        doctest::Approx(1.0 / std::sinh(1.0)).epsilon(1e-14));
  CHECK(weight_phi(WarpingFunction::hyperbolic(), 2, 3.0, 1.0) == doctest::Approx(0.8509).epsilon(1e-4));
}

TEST_CASE("asymptotic constant V0d") {
  const auto flat = estimate_V0d(WarpingFunction::flat(), 2);
  CHECK(flat.V0d == 0.0);
  CHECK(flat.hypothesis_ok);

  const auto hyp = estimate_V0d(WarpingFunction::hyperbolic(), 2);
  CHECK(std::abs(hyp.V0d - 0.25) < 1e-4);
  CHECK(hyp.hypothesis_ok);
  CHECK(WarpingFunction::hyperbolic().exact_V0d(2) == 0.25);

  const auto poly = estimate_V0d(WarpingFunction::polynomial(1, 0), 2);
  CHECK(std::abs(poly.V0d) < 1e-4);
  CHECK(poly.hypothesis_ok);

  // A = r - r^3 vanishes at r = 1
  const auto neg = estimate_V0d(WarpingFunction::polynomial(-1, 0), 2);
  CHECK_FALSE(neg.positivity_ok);
  CHECK_FALSE(neg.hypothesis_ok);
}

TEST_CASE("oddness and normalisation") {
  for (const auto& w : {WarpingFunction::flat(), WarpingFunction::hyperbolic(),
                        WarpingFunction::polynomial(1, 0.3), WarpingFunction::odd_polynomial({0.2, 0.1, 0.05})}) {
    CHECK(w.dA(0.0) == 1.0);
    CHECK(w.A(0.0) == 0.0);
    for (double r : {0.2, 1.7, 5.0}) {
      CHECK(w.A(-r) == -w.A(r));
      CHECK(w.d2A(-r) == -w.d2A(r));
    }
    CHECK(w.r_over_A(0.0) == 1.0);
  }
}

TEST_CASE("invalid radii") {
  CHECK_THROWS_AS(sectional_curvatures(WarpingFunction::hyperbolic(), 0.0), std::domain_error);
  CHECK_THROWS_AS(sectional_curvatures(WarpingFunction::polynomial(-1, 0), 1.0), std::domain_error);
}

TEST_CASE("serialisation") {
  for (const auto& w : {WarpingFunction::flat(), WarpingFunction::hyperbolic(),
                        WarpingFunction::polynomial(1, -0.25), WarpingFunction::odd_polynomial({0.1, 0.2, 0.3})}) {
    const auto j = to_json(w);
    CHECK(j.at("schema") == kWarpSchema);
    const auto back = warp_from_json(j);
    CHECK(back.kind() == w.kind());
    CHECK(back.coeffs() == w.coeffs());
  }
  CHECK_THROWS(warp_from_json(nlohmann::json{{"schema", kWarpSchema}, {"kind", "spherical"}}));
  CHECK_THROWS(warp_from_json(nlohmann::json{{"schema", "nope"}, {"kind", "flat"}}));
  const auto report = to_json(estimate_V0d(WarpingFunction::hyperbolic(), 2));
  CHECK(report.contains("V0d"));
  CHECK(report.contains("hypothesis_ok"));
}

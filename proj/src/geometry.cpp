#include "warpsol/geometry.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace warpsol {

std::string to_string(WarpKind kind) {
  switch (kind) {
    case WarpKind::flat: return "flat";
    case WarpKind::hyperbolic: return "hyperbolic";
    case WarpKind::polynomial: return "polynomial";
  }
  return "unknown";
}

WarpingFunction::WarpingFunction(WarpKind kind, std::vector<double> coeffs)
    : kind_(kind), coeffs_(std::move(coeffs)) {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw std::invalid_argument("warp coefficient is not finite");
  }
}

WarpingFunction WarpingFunction::flat() { return {WarpKind::flat, {}}; }
WarpingFunction WarpingFunction::hyperbolic() { return {WarpKind::hyperbolic, {}}; }
WarpingFunction WarpingFunction::polynomial(double c1, double c2) {
  return {WarpKind::polynomial, {c1, c2}};
}
WarpingFunction WarpingFunction::odd_polynomial(std::vector<double> coeffs) {
  return {WarpKind::polynomial, std::move(coeffs)};
}

double WarpingFunction::P(double u) const {
  double s = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 0;) s = s * u + coeffs_[k];
  return 1.0 + u * s;
}

double WarpingFunction::dP(double u) const {
  double s = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 0;) s = s * u + static_cast<double>(k + 1) * coeffs_[k];
  return s;
}

double WarpingFunction::d2P(double u) const {
  double s = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 1;) {
    s = s * u + static_cast<double>((k + 1) * k) * coeffs_[k];
  }
  return s;
}

double WarpingFunction::A(double r) const {
  switch (kind_) {
    case WarpKind::flat: return r;
    case WarpKind::hyperbolic: return std::sinh(r);
    case WarpKind::polynomial: return r * P(r * r);
  }
  return r;
}

double WarpingFunction::dA(double r) const {
  switch (kind_) {
    case WarpKind::flat: return 1.0;
    case WarpKind::hyperbolic: return std::cosh(r);
    case WarpKind::polynomial: {
      const double u = r * r;
      return P(u) + 2.0 * u * dP(u);
    }
  }
  return 1.0;
}

double WarpingFunction::d2A(double r) const {
  switch (kind_) {
    case WarpKind::flat: return 0.0;
    case WarpKind::hyperbolic: return std::sinh(r);
    case WarpKind::polynomial: {
      const double u = r * r;
      return r * (6.0 * dP(u) + 4.0 * u * d2P(u));
    }
  }
  return 0.0;
}

double WarpingFunction::d2A_over_A(double r) const {
  switch (kind_) {
    case WarpKind::flat: return 0.0;
    case WarpKind::hyperbolic: return 1.0;
    case WarpKind::polynomial: {
      const double u = r * r;
      return (6.0 * dP(u) + 4.0 * u * d2P(u)) / P(u);
    }
  }
  return 0.0;
}

double WarpingFunction::centrifugal_defect(double r) const {
  switch (kind_) {
    case WarpKind::flat: return 0.0;
    case WarpKind::hyperbolic: {
      // coth^2 r - 1/r^2; the series avoids cancellation near the origin.
      const double ar = std::abs(r);
      if (ar < 1e-2) {
        const double u = r * r;
        return 2.0 / 3.0 + u / 15.0 - 2.0 * u * u / 189.0;
      }
      const double c = 1.0 / std::tanh(ar);
      return c * c - 1.0 / (r * r);
    }
    case WarpKind::polynomial: {
      const double u = r * r;
      const double p = P(u), dp = dP(u);
      return 4.0 * dp * (p + u * dp) / (p * p);
    }
  }
  return 0.0;
}

double WarpingFunction::sphere_curvature(double r) const {
  switch (kind_) {
    case WarpKind::flat: return 0.0;
    case WarpKind::hyperbolic: return -1.0;  // 1 - cosh^2 = -sinh^2
    case WarpKind::polynomial: {
      // 1 - A' = -u sum_k (2k+1) a_k u^{k-1}, so the u cancels against A^2 = u P^2.
      const double u = r * r;
      double s = 0.0;
      for (std::size_t k = coeffs_.size(); k-- > 0;) {
        s = s * u + static_cast<double>(2 * k + 3) * coeffs_[k];
      }
      const double p = P(u);
      return -s * (1.0 + p + 2.0 * u * dP(u)) / (p * p);
    }
  }
  return 0.0;
}

double WarpingFunction::r_over_A(double r) const {
  switch (kind_) {
    case WarpKind::flat: return 1.0;
    case WarpKind::hyperbolic: return r == 0.0 ? 1.0 : r / std::sinh(r);
    case WarpKind::polynomial: return 1.0 / P(r * r);
  }
  return 1.0;
}

double WarpingFunction::exact_V0d(int d) const {
  if (kind_ == WarpKind::hyperbolic) return 0.25 * (d - 1) * (d - 1);
  return 0.0;
}

Curvatures sectional_curvatures(const WarpingFunction& w, double r) {
  if (!(r > 0.0)) throw std::domain_error("sectional_curvatures: r must be > 0");
  if (w.A(r) == 0.0 || (w.kind() == WarpKind::polynomial && w.r_over_A(r) <= 0.0)) {
    throw std::domain_error("sectional_curvatures: A(r) vanishes");
  }
  return {-w.d2A_over_A(r), w.sphere_curvature(r)};
}

double potential_V(const WarpingFunction& w, int d, double r) {
  if (d < 2) throw std::invalid_argument("potential_V: d must be >= 2");
  if (!(r >= 0.0)) throw std::domain_error("potential_V: r must be >= 0");
  if (w.kind() == WarpKind::flat) return 0.0;
  const double dm1 = d - 1;
  double v = 0.5 * dm1 * w.d2A_over_A(r);
  if (d != 3) v += 0.25 * dm1 * (d - 3) * w.centrifugal_defect(r);
  return v;
}

double weight_phi(const WarpingFunction& w, int d, double p, double r) {
  if (!(r >= 0.0)) throw std::domain_error("weight_phi: r must be >= 0");
  if (w.kind() == WarpKind::flat) return 1.0;
  const double e = 0.5 * (d - 1) * (p - 1.0);
  const double q = w.r_over_A(r);
  return e == 1.0 ? q : std::pow(q, e);
}

MetricReport estimate_V0d(const WarpingFunction& w, int d) {
  MetricReport rep;
  rep.d = d;
  for (double r = 0.05; r <= 400.0; r *= 1.25) {
    const double ra = w.r_over_A(r);
    if (!(ra > 0.0) || !std::isfinite(ra)) rep.positivity_ok = false;
  }
  for (double r : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    try {
      const auto k = sectional_curvatures(w, r);
      rep.curvature_samples.push_back({r, k.radial, k.spherical});
    } catch (const std::domain_error&) {
      rep.positivity_ok = false;
    }
  }
  if (w.kind() == WarpKind::flat) {
    rep.hypothesis_ok = rep.positivity_ok;
    return rep;
  }
  const std::array<double, 4> radii{50.0, 100.0, 200.0, 400.0};
  Eigen::Matrix<double, 4, 2> m;
  Eigen::Vector4d v;
  for (int i = 0; i < 4; ++i) {
    const double r = radii[static_cast<std::size_t>(i)];
    m(i, 0) = 1.0;
    m(i, 1) = 1.0 / (r * r);
    v[i] = potential_V(w, d, r);
  }
  if (!v.allFinite()) {
    rep.fit_ok = false;
    rep.hypothesis_ok = false;
    return rep;
  }
  const Eigen::Vector2d c = m.colPivHouseholderQr().solve(v);
  rep.V0d = c[0];
  rep.fit_slope = c[1];
  const double scale = v.cwiseAbs().maxCoeff();
  const double res = (m * c - v).cwiseAbs().maxCoeff();
  rep.fit_residual = scale > 0.0 ? res / scale : res;
  rep.fit_ok = std::isfinite(rep.fit_residual) && rep.fit_residual < 1e-4;
  rep.hypothesis_ok = rep.fit_ok && rep.positivity_ok;
  return rep;
}

nlohmann::json to_json(const WarpingFunction& w) {
  nlohmann::json j{{"schema", kWarpSchema}, {"kind", to_string(w.kind())}};
  if (w.kind() == WarpKind::polynomial) {
    if (w.coeffs().size() == 2) {
      j["c1"] = w.c1();
      j["c2"] = w.c2();
    } else {
      j["coeffs"] = w.coeffs();
    }
  }
  return j;
}

WarpingFunction warp_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("warp: expected a JSON object");
  if (j.contains("schema") && j.at("schema") != kWarpSchema) {
    throw std::invalid_argument("warp: unexpected schema");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "flat") return WarpingFunction::flat();
  if (kind == "hyperbolic") return WarpingFunction::hyperbolic();
  if (kind == "polynomial") {
    if (j.contains("coeffs")) {
      return WarpingFunction::odd_polynomial(j.at("coeffs").get<std::vector<double>>());
    }
    return WarpingFunction::polynomial(j.value("c1", 0.0), j.value("c2", 0.0));
  }
  throw std::invalid_argument("warp: unknown kind '" + kind + "'");
}

nlohmann::json to_json(const MetricReport& report) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : report.curvature_samples) {
    samples.push_back({{"r", s.r}, {"K_rad", s.radial}, {"K_sph", s.spherical}});
  }
  return {{"d", report.d},
          {"V0d", report.V0d},
          {"fit_slope", report.fit_slope},
          {"fit_residual", report.fit_residual},
          {"positivity_ok", report.positivity_ok},
          {"hypothesis_ok", report.hypothesis_ok},
          {"curvature_samples", samples}};
}

}  // namespace warpsol

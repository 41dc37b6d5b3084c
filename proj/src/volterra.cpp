#include "warpsol/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "warpsol/errors.hpp"

namespace warpsol {

namespace {

struct Sweep {
  std::vector<double> a;
  int iterations = 0;
  double change = 0.0;
  bool contraction_ok = true;
};

// Successive approximation h <- 1 + T h, stopping on the sup-norm change.
template <class Operator>
Sweep picard(std::size_t n, Operator&& apply_kernel, const VolterraOptions& opt) {
  Sweep out;
  std::vector<double> h(n, 1.0), next(n);
  double prev_change = std::numeric_limits<double>::infinity();
  int growth = 0;
  for (int it = 1; it <= opt.max_picard; ++it) {
    apply_kernel(h, next);
    double change = 0.0;
    for (std::size_t j = 0; j < n; ++j) change = std::max(change, std::abs(next[j] - h[j]));
    h.swap(next);
    out.iterations = it;
    out.change = change;
    if (!std::isfinite(change)) {
      out.contraction_ok = false;
      break;
    }
    if (change < opt.picard_tol) break;
    growth = change > prev_change ? growth + 1 : 0;
    if (growth >= 3) {
      out.contraction_ok = false;
      break;
    }
    prev_change = change;
  }
  if (out.change >= opt.picard_tol) out.contraction_ok = false;
  out.a.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.a[j] = h[j] - 1.0;
  return out;
}

double f0_of(int d, double r) { return std::pow(r, 0.5 * (d - 1)); }

double g0_of(int d, double r) {
  if (d == 2) return std::sqrt(r) * std::log(r);
  return -std::pow(r, -0.5 * (d - 3)) / (d - 2);
}

// f0 g0, continued by 0 at the origin.
double f0g0_of(int d, double r) {
  if (r == 0.0) return 0.0;
  if (d == 2) return r * std::log(r);
  return -r / (d - 2);
}

// g0/f0 times an integral that vanishes at least like r^d at the origin.
double g0_over_f0(int d, double r) {
  if (d == 2) return std::log(r);
  return -std::pow(r, -(d - 2)) / (d - 2);
}

Sweep origin_sweep(const std::function<double(double)>& V, double lambda, int d, int intervals,
                   const VolterraOptions& opt, std::vector<double>& r) {
  const std::size_t n = static_cast<std::size_t>(intervals) + 1;
  const double step = 0.5 / intervals;
  r.resize(n);
  std::vector<double> f0sq(n), f0g0(n), ratio(n), w(n);
  for (std::size_t j = 0; j < n; ++j) {
    r[j] = step * static_cast<double>(j);
    const double f0 = j == 0 ? (d == 1 ? 1.0 : 0.0) : f0_of(d, r[j]);
    f0sq[j] = f0 * f0;
    f0g0[j] = f0g0_of(d, r[j]);
    ratio[j] = j == 0 ? 0.0 : g0_over_f0(d, r[j]);
    w[j] = V(r[j]) + lambda * lambda;
  }
  const auto kernel = [&](const std::vector<double>& h, std::vector<double>& out) {
    double ia = 0.0, ib = 0.0;
    out[0] = 1.0;
    for (std::size_t j = 1; j < n; ++j) {
      ia += 0.5 * step * (f0sq[j - 1] * w[j - 1] * h[j - 1] + f0sq[j] * w[j] * h[j]);
      ib += 0.5 * step * (f0g0[j - 1] * w[j - 1] * h[j - 1] + f0g0[j] * w[j] * h[j]);
      out[j] = 1.0 + ratio[j] * ia - ib;
    }
  };
  return picard(n, kernel, opt);
}

Sweep infinity_sweep(const std::function<double(double)>& V, double lambda, int d, int intervals,
                     const VolterraOptions& opt, std::vector<double>& r) {
  const std::size_t n = static_cast<std::size_t>(intervals) + 1;
  const double ra = 0.25, rb = opt.r_far;
  const double step = (rb - ra) / intervals;
  const double cd = 0.25 * (d - 1) * (d - 3);
  const double decay = std::exp(-2.0 * lambda * step);
  r.resize(n);
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) {
    r[j] = ra + step * static_cast<double>(j);
    w[j] = cd / (r[j] * r[j]) + V(r[j]);
  }
  // Beyond r_far only the centrifugal term survives and h is 1 to leading order.
  const double tail_i = cd / rb;
  const double tail_j = cd / (2.0 * lambda * rb * rb);
  const auto kernel = [&](const std::vector<double>& h, std::vector<double>& out) {
    double ii = tail_i, jj = tail_j;
    out[n - 1] = 1.0 + (ii - jj) / (2.0 * lambda);
    for (std::size_t j = n - 1; j-- > 0;) {
      const double wl = w[j] * h[j], wr = w[j + 1] * h[j + 1];
      ii += 0.5 * step * (wl + wr);
      jj = decay * jj + 0.5 * step * (wl + decay * wr);
      out[j] = 1.0 + (ii - jj) / (2.0 * lambda);
    }
  };
  return picard(n, kernel, opt);
}

void fill_origin(FundamentalSystem& fs, int d) {
  const std::size_t n = fs.r.size();
  const double r0 = fs.r.back();
  const double c0 = g0_of(d, r0) / f0_of(d, r0);
  // Backward cumulative integral of f0^-2 [(1+a)^-2 - 1] from r to r0.
  std::vector<double> tail(n, 0.0);
  const auto integrand = [&](std::size_t j) {
    const double f0 = f0_of(d, fs.r[j]);
    const double h = 1.0 + fs.a[j];
    return (1.0 / (h * h) - 1.0) / (f0 * f0);
  };
  for (std::size_t j = n - 1; j-- > 1;) {
    tail[j] = tail[j + 1] + 0.5 * (fs.r[j + 1] - fs.r[j]) * (integrand(j) + integrand(j + 1));
  }
  FundamentalSystem out = fs;
  out.r.assign(fs.r.begin() + 1, fs.r.end());
  out.a.assign(fs.a.begin() + 1, fs.a.end());
  out.phi.clear();
  out.psi.clear();
  out.b.clear();
  for (std::size_t j = 1; j < n; ++j) {
    const double r = fs.r[j];
    const double f0 = f0_of(d, r), g0 = g0_of(d, r);
    const double h = 1.0 + fs.a[j];
    if (!(h > 0.0)) throw NumericalError("origin-side solution changes sign on (0, 1/2]");
    const double b = fs.a[j] - c0 * (f0 / g0) * h - (f0 / g0) * h * tail[j];
    out.phi.push_back(f0 * h);
    out.b.push_back(b);
    out.psi.push_back(g0 * (1.0 + b));
  }
  fs = std::move(out);
}

void fill_infinity(FundamentalSystem& fs, double lambda) {
  const std::size_t n = fs.r.size();
  fs.phi.resize(n);
  fs.psi.resize(n);
  fs.b.resize(n);
  double k = 0.0;  // int_{r_a}^r e^{-2 lambda (r - s)} h(s)^-2 ds
  for (std::size_t j = 0; j < n; ++j) {
    const double h = 1.0 + fs.a[j];
    if (j > 0) {
      // Exact integral of the exponential weight against the linear interpolant of h^-2,
      // so the result does not depend on lambda * step being small.
      const double step = fs.r[j] - fs.r[j - 1];
      const double mu = 2.0 * lambda * step;
      const double decay = std::exp(-mu);
      const double hl = 1.0 + fs.a[j - 1];
      double wl, wr;
      if (mu < 1e-4) {
        wl = step * (0.5 - mu / 3.0);
        wr = step * (0.5 - mu / 6.0);
      } else {
        const double m1 = -std::expm1(-mu) / mu;            // int_0^1 e^{-mu s} ds
        const double m2 = (1.0 - (1.0 + mu) * decay) / (mu * mu);  // int_0^1 s e^{-mu s} ds
        wl = step * m2;
        wr = step * (m1 - m2);
      }
      k = decay * k + wl / (hl * hl) + wr / (h * h);
    }
    fs.phi[j] = std::exp(-lambda * fs.r[j]) * h;
    fs.psi[j] = std::exp(lambda * fs.r[j]) * h * k;
    fs.b[j] = 2.0 * lambda * h * k - 1.0;
  }
}

}  // namespace

FundamentalSystem fundamental_system(const std::function<double(double)>& V, double lambda, int d,
                                     VolterraSide side, const VolterraOptions& opt) {
  if (!(lambda > 0.0)) throw std::invalid_argument("fundamental_system: lambda must be > 0");
  if (d < 1) throw std::invalid_argument("fundamental_system: d must be >= 1");
  if (opt.initial_intervals < 2 || opt.max_intervals < opt.initial_intervals) {
    throw std::invalid_argument("fundamental_system: bad interval counts");
  }
  FundamentalSystem fs;
  fs.side = side;
  const auto run = [&](int intervals, std::vector<double>& r) {
    return side == VolterraSide::origin ? origin_sweep(V, lambda, d, intervals, opt, r)
                                        : infinity_sweep(V, lambda, d, intervals, opt, r);
  };
  int intervals = opt.initial_intervals;
  std::vector<double> r;
  Sweep coarse = run(intervals, r);
  bool contraction = coarse.contraction_ok;
  fs.refined = false;
  while (intervals * 2 <= opt.max_intervals) {
    intervals *= 2;
    std::vector<double> rf;
    Sweep fine = run(intervals, rf);
    contraction = contraction && fine.contraction_ok;
    double change = 0.0;
    for (std::size_t j = 0; j < coarse.a.size(); ++j) {
      change = std::max(change, std::abs(fine.a[2 * j] - coarse.a[j]));
    }
    fs.refine_change = change;
    coarse = std::move(fine);
    r = std::move(rf);
    if (change < opt.refine_tol) {
      fs.refined = true;
      break;
    }
  }
  fs.r = std::move(r);
  fs.a = std::move(coarse.a);
  fs.picard_iterations = coarse.iterations;
  fs.picard_change = coarse.change;
  fs.intervals = intervals;
  fs.contraction_ok = contraction;
  if (side == VolterraSide::origin) {
    fill_origin(fs, d);
  } else {
    fill_infinity(fs, lambda);
  }
  return fs;
}

}  // namespace warpsol

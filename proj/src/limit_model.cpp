#include "chl/limit_model.hpp"

#include <cmath>
#include <stdexcept>

namespace chl {

namespace {

// Lanczos (g=7, n=9) log-gamma, ~1e-14 relative accuracy on [0.5, inf).
double log_gamma(double x) {
  static const double coef[9] = {
      0.99999999999980993,  676.5203681218851,   -1259.1392167224028,
      771.32342877765313,   -176.61502916214059, 12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    // reflection; not reached for d >= 2 but kept for completeness
    return std::log(M_PI / std::sin(M_PI * x)) - log_gamma(1.0 - x);
  }
  x -= 1.0;
  double a = coef[0];
  double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += coef[i] / (x + i);
  return 0.5 * std::log(2.0 * M_PI) + (x + 0.5) * std::log(t) - t + std::log(a);
}

void require_dim(int d) {
  if (d < 2) throw std::domain_error("limit_model: dimension must be >= 2");
}

void require_params(const LimitParams& p) {
  require_dim(p.d);
  if (!(p.xi > 0.0)) throw std::domain_error("limit_model: xi must be positive");
}

double bisect(double lo, double hi, double flo, const auto& f, double tol) {
  // flo and f(hi) must have opposite signs; returns midpoint at |hi-lo|<=tol
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((flo <= 0.0) == (fm <= 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double surface_area_unit_sphere(int d) {
  require_dim(d);
  return 2.0 * std::exp(0.5 * d * std::log(M_PI) - log_gamma(0.5 * d));
}

double c1_bar(int d) {
  require_dim(d);
  const double dd = d;
  return kC0 * std::pow(surface_area_unit_sphere(d), 1.0 / dd) *
         std::pow(dd, (dd - 1.0) / dd);
}

double f_xi(double nu, const LimitParams& p) {
  require_params(p);
  if (nu < 0.0) throw std::domain_error("f_xi: nu must be nonnegative");
  const double dd = p.d;
  return c1_bar(p.d) * std::pow(nu, (dd - 1.0) / dd) - 4.0 * nu +
         4.0 * nu * nu / std::pow(p.xi, dd + 1.0);
}

double f_xi_prime(double nu, const LimitParams& p) {
  require_params(p);
  if (!(nu > 0.0)) throw std::domain_error("f_xi_prime: nu must be positive");
  const double dd = p.d;
  return ((dd - 1.0) / dd) * c1_bar(p.d) * std::pow(nu, -1.0 / dd) - 4.0 +
         8.0 * nu / std::pow(p.xi, dd + 1.0);
}

double f_xi_second(double nu, const LimitParams& p) {
  require_params(p);
  if (!(nu > 0.0)) throw std::domain_error("f_xi_second: nu must be positive");
  const double dd = p.d;
  return -((dd - 1.0) / (dd * dd)) * c1_bar(p.d) * std::pow(nu, -1.0 / dd - 1.0) +
         8.0 / std::pow(p.xi, dd + 1.0);
}

std::pair<double, double> critical_constants(int d) {
  require_dim(d);
  const double dd = d;
  const double common = std::pow(kC0, dd / (dd + 1.0)) *
                        std::pow(surface_area_unit_sphere(d), 1.0 / (dd + 1.0)) *
                        (dd + 1.0) /
                        (std::pow(4.0, dd / (dd + 1.0)) * std::pow(dd, 1.0 / (dd + 1.0)));
  const double xid = common;
  const double xit = common * std::pow(1.0 - 1.0 / dd, dd / (dd + 1.0)) *
                     std::pow(2.0, 1.0 / (dd + 1.0));
  return {xit, xid};
}

LimitLandscape solve_extrema(const LimitParams& p) {
  require_params(p);
  LimitLandscape out;
  out.sigma_d = surface_area_unit_sphere(p.d);
  out.c1_bar = c1_bar(p.d);
  const auto [xit, xid] = critical_constants(p.d);
  out.xi_tilde = xit;
  out.xi_d = xid;

  const double nu_max = 0.5 * std::pow(p.xi, p.d + 1.0);
  const auto fp = [&](double nu) { return f_xi_prime(nu, p); };
  const auto fpp = [&](double nu) { return f_xi_second(nu, p); };

  // f'' is strictly increasing from -inf to 8/xi^(d+1); locate its root nu_hat
  // (the unique minimum of f'), then bracket the two roots of f' around it.
  const double lo0 = 1e-9;
  if (fpp(lo0) >= 0.0) return out;  // f' increasing everywhere sampled: no extrema
  double hi0 = nu_max;
  while (fpp(hi0) <= 0.0) hi0 *= 2.0;
  const double nu_hat = bisect(lo0, hi0, fpp(lo0), fpp, 1e-12);
  if (fp(nu_hat) >= 0.0) return out;  // min of f' nonnegative: no positive roots

  LimitExtrema ex;
  ex.nu_s = bisect(lo0, nu_hat, fp(lo0), fp, 1e-12);
  ex.nu_m = bisect(nu_hat, nu_max, fp(nu_hat), fp, 1e-12);
  ex.c_s = f_xi(ex.nu_s, p);
  ex.c_m = f_xi(ex.nu_m, p);
  ex.gamma0 = 2.0 * std::sqrt(ex.nu_m - ex.nu_s);
  out.extrema = ex;
  return out;
}

double limit_energy_set(double perimeter, double volume, const LimitParams& p) {
  require_params(p);
  return kC0 * perimeter - 4.0 * volume +
         4.0 * volume * volume / std::pow(p.xi, p.d + 1.0);
}

}  // namespace chl

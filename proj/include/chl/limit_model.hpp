#pragma once

#include <optional>
#include <utility>

// Sharp-interface limit of the rescaled two-phase energy on the flat d-torus.
// The limit energy of a set of perimeter P and volume V is
//     c0*P - 4*V + 4*V^2/xi^(d+1),
// and restricted to balls of volume nu it becomes
//     f_xi(nu) = c1_bar * nu^((d-1)/d) - 4*nu + 4*nu^2/xi^(d+1).
// For xi above the bifurcation value xi_tilde, f_xi has a positive local
// maximum nu_s and minimum nu_m (the limit saddle and droplet volumes); at
// the crossover value xi_d the droplet ties the uniform state, f_xi(nu_m)=0.

namespace chl {

inline constexpr double kC0 = 0.9428090415820633658;  // 2*sqrt(2)/3

struct LimitParams {
  int d = 2;        // dimension >= 2
  double xi = 1.5;  // > 0
};

struct LimitExtrema {
  double nu_s = 0;    // location of the positive maximum of f_xi
  double nu_m = 0;    // location of the positive minimum, nu_s < nu_m
  double c_s = 0;     // f_xi(nu_s)
  double c_m = 0;     // f_xi(nu_m)
  double gamma0 = 0;  // 2*sqrt(nu_m - nu_s)
};

struct LimitLandscape {
  double c0 = kC0;
  double sigma_d = 0;   // perimeter of the unit (d-1)-sphere in R^d
  double c1_bar = 0;    // c0 * sigma_d^(1/d) * d^((d-1)/d)
  double xi_tilde = 0;  // saddle-node bifurcation point
  double xi_d = 0;      // crossover point
  std::optional<LimitExtrema> extrema;  // present iff f_xi has positive extrema
};

// sigma_d = 2 pi^(d/2) / Gamma(d/2); Gamma via a Lanczos approximation.
double surface_area_unit_sphere(int d);
double c1_bar(int d);

double f_xi(double nu, const LimitParams& p);         // nu >= 0
double f_xi_prime(double nu, const LimitParams& p);   // nu > 0
double f_xi_second(double nu, const LimitParams& p);  // nu > 0

// {xi_tilde, xi_d}; throws std::domain_error for d < 2.
std::pair<double, double> critical_constants(int d);

LimitLandscape solve_extrema(const LimitParams& p);

double limit_energy_set(double perimeter, double volume, const LimitParams& p);

}  // namespace chl

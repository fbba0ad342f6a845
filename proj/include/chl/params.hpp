#pragma once

#include <cmath>
#include <stdexcept>

namespace chl {

// Parameters of the rescaled model on the torus of side ell = xi^((d+1)/d) * phi^(-1/d),
// so that phi * ell^d = xi^(d+1). Mean value is m = -1 + phi, band width kappa = phi^(1/3).
struct ModelParams {
  int d = 2;
  double xi = 1.5;
  double phi = 0.04;

  double kappa() const { return std::cbrt(phi); }
  double mean_value() const { return -1.0 + phi; }
  double side() const {
    return std::pow(xi, (d + 1.0) / d) * std::pow(phi, -1.0 / d);
  }

  void validate() const {
    if (d != 2 && d != 3) throw std::invalid_argument("ModelParams: d must be 2 or 3");
    if (!(xi > 0.0)) throw std::invalid_argument("ModelParams: xi must be positive");
    if (!(phi > 0.0) || phi > 0.25)
      throw std::invalid_argument("ModelParams: phi must lie in (0, 0.25]");
  }
};

// Double-well potential G(u) = (1-u^2)^2 / 4 with minima at +-1.
inline double potential(double u) {
  const double w = 1.0 - u * u;
  return 0.25 * w * w;
}
inline double potential_prime(double u) { return u * u * u - u; }
inline double potential_second(double u) { return 3.0 * u * u - 1.0; }

// Cubic smoothstep used for all partition-of-unity transitions.
inline double smoothstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * (3.0 - 2.0 * x);
}
inline double smoothstep_prime(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return 6.0 * x * (1.0 - x);
}

struct ChiValues {
  double chi1, chi2, chi3;
};

// Partition of unity: chi1 = 1 on u <= -1+kappa and 0 on u >= -1+2kappa,
// chi3 = 0 on u <= 1-2kappa and 1 on u >= 1-kappa, chi2 = 1 - chi1 - chi3.
inline double chi3_of(double t, double kappa) {
  return smoothstep((t - (1.0 - 2.0 * kappa)) / kappa);
}
inline double chi3_prime_of(double t, double kappa) {
  return smoothstep_prime((t - (1.0 - 2.0 * kappa)) / kappa) / kappa;
}
inline double chi1_of(double t, double kappa) {
  return 1.0 - smoothstep((t - (-1.0 + kappa)) / kappa);
}
inline ChiValues chi_partition(double t, double kappa) {
  if (!(kappa > 0.0) || kappa >= 1.0)
    throw std::invalid_argument("chi_partition: kappa must lie in (0, 1)");
  const double c1 = chi1_of(t, kappa);
  const double c3 = chi3_of(t, kappa);
  return {c1, 1.0 - c1 - c3, c3};
}

}  // namespace chl

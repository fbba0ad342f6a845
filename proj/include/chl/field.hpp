#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "chl/params.hpp"

namespace chl {

// Scalar field sampled at cell centers of a periodic n^d grid, row-major with
// x fastest. Cell i along an axis has coordinate -ell/2 + (i+0.5)*h, h = ell/n.
struct Field {
  ModelParams params;
  int n = 0;
  std::vector<double> values;

  Field() = default;
  Field(const ModelParams& p, int n_);

  double spacing() const { return params.side() / n; }
  std::size_t size() const { return values.size(); }
  double cell_volume() const;  // h^d

  std::size_t index(int ix, int iy, int iz = 0) const {
    const std::size_t nn = static_cast<std::size_t>(n);
    return static_cast<std::size_t>(ix) + nn * (static_cast<std::size_t>(iy) +
           (params.d == 3 ? nn * static_cast<std::size_t>(iz) : 0));
  }
};

// n must be a power of two in [32, 1024]; throws std::invalid_argument.
void validate_grid(int n);

struct SharpProfile {
  double omega = 0.0;                     // droplet volume >= 0
  std::array<double, 3> center = {0, 0, 0};  // torus coordinates
};

Field uniform_field(const ModelParams& p, int n);

// +1 on cells whose center lies in the periodic ball of volume omega, -1 elsewhere.
// Throws std::invalid_argument if the ball does not fit in the torus.
Field make_sharp_profile(const SharpProfile& sp, const ModelParams& p, int n);

// Smooth droplet: u(x) = v(dist(x, center) - r_hat) + alpha with
// v(s) = -tanh(s / (sqrt(2)*phi)) for |s| < R, a monotone cubic blend to -+1 on
// R <= |s| <= 2R, and alpha fixed by bisection so the mean is -1+phi.
// r_hat = (omega*d/sigma_d)^(1/d); default cutoff R = 8*phi. The droplet is
// centered on the grid cell at index n/2 per axis.
Field droplet(double omega, const ModelParams& p, int n, double R = -1.0);

// Droplet whose *volume functional* nu equals target (the raw construction has
// nu(droplet(omega)) < omega); volume parameter found by bisection.
Field droplet_for_nu(double target, const ModelParams& p, int n);

// Mountain-pass trial path: convex interpolation uniform -> droplet(omega1) on
// [0, t1], then droplets with volume linear in t from omega1 to omega2. t1 = 0.2.
Field path_point(double t, double omega1, double omega2, const ModelParams& p, int n);

inline constexpr double kPathT1 = 0.2;

// Sharp droplet radius (omega*d/sigma_d)^(1/d).
double sharp_radius(double omega, const ModelParams& p);

}  // namespace chl

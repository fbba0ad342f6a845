#pragma once

// Shared per-cell arithmetic for the parallel kernels and their serial
// references. Both must evaluate exactly the same expressions so that the
// results agree bitwise.

#include "chl/field.hpp"
#include "chl/params.hpp"

namespace chl::detail {

inline int wrap_up(int i, int n) { return i + 1 == n ? 0 : i + 1; }
inline int wrap_down(int i, int n) { return i == 0 ? n - 1 : i - 1; }

struct EnergyCtx {
  double phi, m, inv_h, inv_phi, gm, gpm;
  explicit EnergyCtx(const Field& f)
      : phi(f.params.phi),
        m(f.params.mean_value()),
        inv_h(1.0 / f.spacing()),
        inv_phi(1.0 / f.params.phi),
        gm(potential(f.params.mean_value())),
        gpm(potential_prime(f.params.mean_value())) {}

  double density2(const double* v, int n, int ix, int iy) const {
    const std::size_t i = static_cast<std::size_t>(iy) * n + ix;
    const double u = v[i];
    const double dx = (v[static_cast<std::size_t>(iy) * n + wrap_up(ix, n)] - u) * inv_h;
    const double dy = (v[static_cast<std::size_t>(wrap_up(iy, n)) * n + ix] - u) * inv_h;
    return 0.5 * phi * (dx * dx + dy * dy) +
           inv_phi * (potential(u) - gm - gpm * (u - m));
  }

  double density3(const double* v, int n, int ix, int iy, int iz) const {
    const std::size_t nn = n;
    const std::size_t i = (static_cast<std::size_t>(iz) * nn + iy) * nn + ix;
    const double u = v[i];
    const double dx = (v[(static_cast<std::size_t>(iz) * nn + iy) * nn + wrap_up(ix, n)] - u) * inv_h;
    const double dy = (v[(static_cast<std::size_t>(iz) * nn + wrap_up(iy, n)) * nn + ix] - u) * inv_h;
    const double dz = (v[(static_cast<std::size_t>(wrap_up(iz, n)) * nn + iy) * nn + ix] - u) * inv_h;
    return 0.5 * phi * (dx * dx + dy * dy + dz * dz) +
           inv_phi * (potential(u) - gm - gpm * (u - m));
  }

  double dirichlet2(const double* v, int n, int ix, int iy) const {
    const std::size_t i = static_cast<std::size_t>(iy) * n + ix;
    const double u = v[i];
    const double dx = (v[static_cast<std::size_t>(iy) * n + wrap_up(ix, n)] - u) * inv_h;
    const double dy = (v[static_cast<std::size_t>(wrap_up(iy, n)) * n + ix] - u) * inv_h;
    return dx * dx + dy * dy;
  }

  double dirichlet3(const double* v, int n, int ix, int iy, int iz) const {
    const std::size_t nn = n;
    const std::size_t i = (static_cast<std::size_t>(iz) * nn + iy) * nn + ix;
    const double u = v[i];
    const double dx = (v[(static_cast<std::size_t>(iz) * nn + iy) * nn + wrap_up(ix, n)] - u) * inv_h;
    const double dy = (v[(static_cast<std::size_t>(iz) * nn + wrap_up(iy, n)) * nn + ix] - u) * inv_h;
    const double dz = (v[(static_cast<std::size_t>(wrap_up(iz, n)) * nn + iy) * nn + ix] - u) * inv_h;
    return dx * dx + dy * dy + dz * dz;
  }

  double gradient2(const double* v, int n, int ix, int iy) const {
    const std::size_t i = static_cast<std::size_t>(iy) * n + ix;
    const double u = v[i];
    const double lap =
        (v[static_cast<std::size_t>(iy) * n + wrap_up(ix, n)] - 2.0 * u +
         v[static_cast<std::size_t>(iy) * n + wrap_down(ix, n)] +
         v[static_cast<std::size_t>(wrap_up(iy, n)) * n + ix] - 2.0 * u +
         v[static_cast<std::size_t>(wrap_down(iy, n)) * n + ix]) *
        (inv_h * inv_h);
    return -phi * lap + inv_phi * (potential_prime(u) - gpm);
  }

  double gradient3(const double* v, int n, int ix, int iy, int iz) const {
    const std::size_t nn = n;
    const std::size_t i = (static_cast<std::size_t>(iz) * nn + iy) * nn + ix;
    const double u = v[i];
    const double lap =
        (v[(static_cast<std::size_t>(iz) * nn + iy) * nn + wrap_up(ix, n)] - 2.0 * u +
         v[(static_cast<std::size_t>(iz) * nn + iy) * nn + wrap_down(ix, n)] +
         v[(static_cast<std::size_t>(iz) * nn + wrap_up(iy, n)) * nn + ix] - 2.0 * u +
         v[(static_cast<std::size_t>(iz) * nn + wrap_down(iy, n)) * nn + ix] +
         v[(static_cast<std::size_t>(wrap_up(iz, n)) * nn + iy) * nn + ix] - 2.0 * u +
         v[(static_cast<std::size_t>(wrap_down(iz, n)) * nn + iy) * nn + ix]) *
        (inv_h * inv_h);
    return -phi * lap + inv_phi * (potential_prime(u) - gpm);
  }
};

}  // namespace chl::detail

#pragma once

#include <span>

#include "chl/field.hpp"

// Grid kernels. The hot loops are OpenMP-parallel over cells; every reduction
// goes through pairwise_sum with a fixed tree so results are bitwise identical
// across thread counts. Serial reference implementations live in chl::ref and
// must agree bitwise with the parallel ones (see tests and bench).

namespace chl {

// Deterministic pairwise tree sum (fixed association, independent of threads).
double pairwise_sum(std::span<const double> v);

double field_mean(const Field& f);

// Volume functional nu(u) = h^d * sum chi3(u_i).
double nu(const Field& f);

// Rescaled energy gap: h^d * sum e_phi(u) with
//   e_phi(u) = (phi/2) |grad u|^2 + (1/phi)(G(u) - G(m) - G'(m)(u - m)),
// |grad u|^2 from face-centered first differences (central at the half-grid),
// so that energy_gradient below is the exact algebraic gradient.
double energy_gap(const Field& f);

// Per-cell integrand of energy_gap (buffer of f.size() values).
void energy_density(const Field& f, std::span<double> out);

// Exact discrete gradient of energy_gap divided by h^d:
//   -phi * lap(u) + (G'(u) - G'(m)) / phi,
// lap = 5-point (d=2) / 7-point (d=3) periodic stencil.
Field energy_gradient(const Field& f);

// Dirichlet term h^d * sum |grad u|^2, same differences as energy_gap.
double dirichlet_sum(const Field& f);

namespace ref {
double nu(const Field& f);
double energy_gap(const Field& f);
void energy_density(const Field& f, std::span<double> out);
Field energy_gradient(const Field& f);
}  // namespace ref

}  // namespace chl

#pragma once

#include <span>

#include "chl/field.hpp"

// Discrete Steiner symmetrization on the periodic grid. Each grid line along
// an axis is replaced by its symmetric-decreasing rearrangement about index 0:
// sorted descending, rank 0 at index 0, then alternately +1, -1, +2, -2, ...
// (the + side first, so for even n the surplus cell lands at the half period).
// The value multiset of every line is preserved exactly.

namespace chl {

// h * #{ j : line[j] > t }
double distribution_mu(std::span<const double> line, double t, double h);

Field symmetrize_axis(const Field& f, int axis);

// S_d o ... o S_1 in fixed ascending axis order (the order matters).
Field steiner_symmetrize(const Field& f);

// True iff sup |f - steiner_symmetrize(f)| <= tol after recentring f by the
// L2-optimal lattice shift.
bool is_steiner_symmetric(const Field& f, double tol);

struct RearrangementEnergy {
  double before = 0, after = 0;                      // energy_gap
  double dirichlet_before = 0, dirichlet_after = 0;  // h^d sum |grad u|^2
};

RearrangementEnergy energy_decrease_report(const Field& f);

// Index of rank r in the symmetric-decreasing placement on a periodic line.
int rearrangement_index(int rank, int n);

}  // namespace chl

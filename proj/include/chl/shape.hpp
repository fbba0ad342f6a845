#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "chl/field.hpp"

// Superlevel-set geometry, d = 2 only.

namespace chl {

struct Mask {
  int n = 0;
  double h = 0.0;
  std::vector<std::uint8_t> cells;  // n*n, 1 = inside
  std::size_t count = 0;

  double area() const { return static_cast<double>(count) * h * h; }
  double side() const { return h * n; }
  bool at(int ix, int iy) const {
    return cells[static_cast<std::size_t>(iy) * n + ix] != 0;
  }
};

// Cell included iff value > s. Throws for d != 2.
Mask superlevel_mask(const Field& f, double s);

// Length of the s-level contour of the bilinear interpolant (marching squares
// on the periodic cell-center lattice; saddles resolved by the value at the
// dual-cell center).
double perimeter(const Field& f, double s);
double mask_perimeter(const Mask& m);  // contour of the +-1 indicator at level 0

// Euclidean isoperimetric function sigma_d^(1/d) d^((d-1)/d) area^((d-1)/d).
double p_e(double area, int d);

// Fraenkel asymmetry: min over all n^2 lattice centers of |A symdiff B(x)|/|A|,
// B(x) a cell-center-rasterized periodic ball with the same cell count.
// Coarse scan over an n/8 sublattice, then exhaustive local refinement.
// Throws std::invalid_argument for an empty mask or one whose equal-area ball
// does not fit in the torus.
double fraenkel_asymmetry(const Mask& m);

// Same search, brute force over every lattice center (for tests).
double fraenkel_asymmetry_brute(const Mask& m);

// Level-integrated weighted perimeter excess over K equispaced levels in
// [-1+2kappa, 1-2kappa] with weight sqrt(2 G(t)). K >= 3.
double isoperimetric_defect(const Field& f, int levels);

struct IsopCheck {
  enum class Status { holds, fails, inconclusive };
  Status status = Status::inconclusive;
  bool sharp = false;
  double margin = 0.0;  // perimeter minus the right-hand side
  double lambda = 0.0;  // Fraenkel asymmetry (sharp form only)
};

// Plain form: Per >= P_E for |A| <= 0.05 |T|; sharp form subtracts
// C(d) lambda^2 P_E - 4 d |A| / ell with C(2) = 0.1. Oversize input is
// inconclusive, not an error.
IsopCheck check_isoperimetric(const Mask& m, bool sharp);

struct BonnesenRadii {
  double rho_in = 0.0;   // largest inscribed disk radius
  double rho_out = 0.0;  // smallest enclosing disk radius
  double rho = 0.0;      // equal-area disk radius
};

// Radii of the mask recentred at its periodic centroid. Requires the mask to
// lie strictly inside the centered half-torus window after recentring.
BonnesenRadii bonnesen_radii(const Mask& m);

struct ShapeReport {
  struct Row {
    double s, area, perimeter, p_e;
    std::optional<double> fraenkel;  // absent when the mask is empty/oversize
  };
  std::vector<Row> rows;
  double defect = 0.0;
  std::optional<BonnesenRadii> radii;  // at level 0, when computable
};

ShapeReport diagnose(const Field& f, int levels);

// CSV: header s,area,perimeter,p_e,fraenkel then one row per level; defect and
// radii appended as '# key=value' comment lines. '.' decimal, LF endings.
void write_csv(const ShapeReport& r, std::ostream& os);

}  // namespace chl

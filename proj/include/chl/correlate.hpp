#pragma once

#include <array>
#include <complex>
#include <vector>

#include "chl/field.hpp"

namespace chl {

struct Registration {
  double dist = 0.0;                  // min over lattice shifts of ||f - g(.-s)||_L2
  std::array<int, 3> shift = {0, 0, 0};  // one argmin, smallest lexicographic on ties
};

// Translation-modded L2 distance via fast cyclic cross-correlation (radix-2
// FFT; this is why n is restricted to powers of two). Candidate shifts within
// FFT round-off of the best correlation are re-evaluated by exact summation,
// so exact matches return dist == 0. Throws std::invalid_argument on grid or
// parameter mismatch.
Registration l2_dist_mod_translation(const Field& f, const Field& g);

namespace detail {

// In-place complex FFT along every axis of an n^d array (row-major, x fastest).
// sign = -1 forward, +1 inverse (unnormalized; caller divides by N).
void fft_nd(std::vector<std::complex<double>>& a, int n, int d, int sign);

// corr[s] = sum_x f(x) * g(x - s), all cyclic shifts at once.
std::vector<double> cyclic_cross_correlation(const Field& f, const Field& g);

}  // namespace detail

}  // namespace chl

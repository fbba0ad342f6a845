#include "chl/steiner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "chl/correlate.hpp"
#include "chl/kernels.hpp"

namespace chl {

int rearrangement_index(int rank, int n) {
  if (rank == 0) return 0;
  const int k = (rank + 1) / 2;
  return (rank % 2 == 1) ? k : n - k;
}

double distribution_mu(std::span<const double> line, double t, double h) {
  std::size_t c = 0;
  for (const double v : line) c += v > t ? 1 : 0;
  return h * static_cast<double>(c);
}

namespace {

void rearrange_line(const double* src, double* dst, std::size_t stride, int n,
                    std::vector<double>& tmp) {
  for (int i = 0; i < n; ++i) tmp[i] = src[static_cast<std::size_t>(i) * stride];
  std::sort(tmp.begin(), tmp.end(), std::greater<double>());
  for (int r = 0; r < n; ++r)
    dst[static_cast<std::size_t>(rearrangement_index(r, n)) * stride] = tmp[r];
}

}  // namespace

Field symmetrize_axis(const Field& f, int axis) {
  if (axis < 0 || axis >= f.params.d)
    throw std::invalid_argument("symmetrize_axis: axis out of range");
  Field out(f.params, f.n);
  const int n = f.n;
  const std::size_t nn = static_cast<std::size_t>(n);
  std::size_t stride = 1;
  for (int a = 0; a < axis; ++a) stride *= nn;
  const std::size_t lines = f.size() / nn;
#pragma omp parallel
  {
    std::vector<double> tmp(n);
#pragma omp for schedule(static)
    for (long long li = 0; li < static_cast<long long>(lines); ++li) {
      // base index of the li-th line orthogonal to `axis`
      std::size_t rem = static_cast<std::size_t>(li);
      std::size_t base = 0;
      std::size_t mul = 1;
      for (int a = 0; a < f.params.d; ++a) {
        if (a == axis) {
          mul *= nn;
          continue;
        }
        base += (rem % nn) * mul;
        rem /= nn;
        mul *= nn;
      }
      rearrange_line(f.values.data() + base, out.values.data() + base, stride, n, tmp);
    }
  }
  return out;
}

Field steiner_symmetrize(const Field& f) {
  Field out = symmetrize_axis(f, 0);
  for (int a = 1; a < f.params.d; ++a) out = symmetrize_axis(out, a);
  return out;
}

bool is_steiner_symmetric(const Field& f, double tol) {
  const Field sym = steiner_symmetrize(f);
  const Registration reg = l2_dist_mod_translation(sym, f);
  // compare sym against f shifted by the optimal lattice vector
  const int n = f.n;
  double sup = 0.0;
  if (f.params.d == 2) {
    for (int iy = 0; iy < n; ++iy) {
      const int jy = (iy - reg.shift[1] % n + n) % n;
      for (int ix = 0; ix < n; ++ix) {
        const int jx = (ix - reg.shift[0] % n + n) % n;
        sup = std::max(sup, std::fabs(sym.values[static_cast<std::size_t>(iy) * n + ix] -
                                      f.values[static_cast<std::size_t>(jy) * n + jx]));
      }
    }
  } else {
    for (int iz = 0; iz < n; ++iz) {
      const int jz = (iz - reg.shift[2] % n + n) % n;
      for (int iy = 0; iy < n; ++iy) {
        const int jy = (iy - reg.shift[1] % n + n) % n;
        for (int ix = 0; ix < n; ++ix) {
          const int jx = (ix - reg.shift[0] % n + n) % n;
          sup = std::max(
              sup,
              std::fabs(sym.values[(static_cast<std::size_t>(iz) * n + iy) * n + ix] -
                        f.values[(static_cast<std::size_t>(jz) * n + jy) * n + jx]));
        }
      }
    }
  }
  return sup <= tol;
}

RearrangementEnergy energy_decrease_report(const Field& f) {
  RearrangementEnergy r;
  r.before = energy_gap(f);
  r.dirichlet_before = dirichlet_sum(f);
  const Field sym = steiner_symmetrize(f);
  r.after = energy_gap(sym);
  r.dirichlet_after = dirichlet_sum(sym);
  return r;
}

}  // namespace chl

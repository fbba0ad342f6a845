#include <vector>

#include "chl/kernels.hpp"
#include "kernels_detail.hpp"

// Serial reference implementations, kept for testing the parallel kernels.

namespace chl::ref {

double nu(const Field& f) {
  const double k = f.params.kappa();
  std::vector<double> buf(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) buf[i] = chi3_of(f.values[i], k);
  return f.cell_volume() * pairwise_sum(buf);
}

void energy_density(const Field& f, std::span<double> out) {
  const detail::EnergyCtx ctx(f);
  const double* v = f.values.data();
  const int n = f.n;
  if (f.params.d == 2) {
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix)
        out[static_cast<std::size_t>(iy) * n + ix] = ctx.density2(v, n, ix, iy);
  } else {
    for (int iz = 0; iz < n; ++iz)
      for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
          out[(static_cast<std::size_t>(iz) * n + iy) * n + ix] =
              ctx.density3(v, n, ix, iy, iz);
  }
}

double energy_gap(const Field& f) {
  std::vector<double> buf(f.size());
  ref::energy_density(f, buf);
  return f.cell_volume() * pairwise_sum(buf);
}

Field energy_gradient(const Field& f) {
  Field g(f.params, f.n);
  const detail::EnergyCtx ctx(f);
  const double* v = f.values.data();
  double* gv = g.values.data();
  const int n = f.n;
  if (f.params.d == 2) {
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix)
        gv[static_cast<std::size_t>(iy) * n + ix] = ctx.gradient2(v, n, ix, iy);
  } else {
    for (int iz = 0; iz < n; ++iz)
      for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
          gv[(static_cast<std::size_t>(iz) * n + iy) * n + ix] =
              ctx.gradient3(v, n, ix, iy, iz);
  }
  return g;
}

}  // namespace chl::ref

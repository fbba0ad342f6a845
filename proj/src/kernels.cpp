#include "chl/kernels.hpp"

#include <vector>

#include "kernels_detail.hpp"

namespace chl {

double pairwise_sum(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n <= 32) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double field_mean(const Field& f) {
  return pairwise_sum(f.values) / static_cast<double>(f.size());
}

double nu(const Field& f) {
  const double k = f.params.kappa();
  std::vector<double> buf(f.size());
  const double* v = f.values.data();
  const long long total = static_cast<long long>(f.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < total; ++i) buf[i] = chi3_of(v[i], k);
  return f.cell_volume() * pairwise_sum(buf);
}

void energy_density(const Field& f, std::span<double> out) {
  const detail::EnergyCtx ctx(f);
  const double* v = f.values.data();
  const int n = f.n;
  if (f.params.d == 2) {
#pragma omp parallel for schedule(static)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix)
        out[static_cast<std::size_t>(iy) * n + ix] = ctx.density2(v, n, ix, iy);
  } else {
#pragma omp parallel for schedule(static)
    for (int iz = 0; iz < n; ++iz)
      for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
          out[(static_cast<std::size_t>(iz) * n + iy) * n + ix] =
              ctx.density3(v, n, ix, iy, iz);
  }
}

double energy_gap(const Field& f) {
  std::vector<double> buf(f.size());
  energy_density(f, buf);
  return f.cell_volume() * pairwise_sum(buf);
}

double dirichlet_sum(const Field& f) {
  const detail::EnergyCtx ctx(f);
  const double* v = f.values.data();
  const int n = f.n;
  std::vector<double> buf(f.size());
  if (f.params.d == 2) {
#pragma omp parallel for schedule(static)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix)
        buf[static_cast<std::size_t>(iy) * n + ix] = ctx.dirichlet2(v, n, ix, iy);
  } else {
#pragma omp parallel for schedule(static)
    for (int iz = 0; iz < n; ++iz)
      for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
          buf[(static_cast<std::size_t>(iz) * n + iy) * n + ix] =
              ctx.dirichlet3(v, n, ix, iy, iz);
  }
  return f.cell_volume() * pairwise_sum(buf);
}

Field energy_gradient(const Field& f) {
  Field g(f.params, f.n);
  const detail::EnergyCtx ctx(f);
  const double* v = f.values.data();
  double* gv = g.values.data();
  const int n = f.n;
  if (f.params.d == 2) {
#pragma omp parallel for schedule(static)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix)
        gv[static_cast<std::size_t>(iy) * n + ix] = ctx.gradient2(v, n, ix, iy);
  } else {
#pragma omp parallel for schedule(static)
    for (int iz = 0; iz < n; ++iz)
      for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
          gv[(static_cast<std::size_t>(iz) * n + iy) * n + ix] =
              ctx.gradient3(v, n, ix, iy, iz);
  }
  return g;
}

}  // namespace chl

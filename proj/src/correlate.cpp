#include "chl/correlate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chl/kernels.hpp"

namespace chl {

namespace detail {

namespace {

// Iterative radix-2 Cooley-Tukey on a strided line.
void fft_line(std::complex<double>* a, int n, std::size_t stride, int sign) {
  // bit reversal
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j |= bit;
    if (i < j) std::swap(a[i * stride], a[j * stride]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * M_PI / len;
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (int j = 0; j < len / 2; ++j) {
        std::complex<double>& u = a[(i + j) * stride];
        std::complex<double>& v = a[(i + j + len / 2) * stride];
        const std::complex<double> t = v * w;
        v = u - t;
        u += t;
        w *= wl;
      }
    }
  }
}

}  // namespace

void fft_nd(std::vector<std::complex<double>>& a, int n, int d, int sign) {
  const std::size_t nn = static_cast<std::size_t>(n);
  if (d == 2) {
#pragma omp parallel for schedule(static)
    for (int iy = 0; iy < n; ++iy) fft_line(a.data() + nn * iy, n, 1, sign);
#pragma omp parallel for schedule(static)
    for (int ix = 0; ix < n; ++ix) fft_line(a.data() + ix, n, nn, sign);
  } else {
#pragma omp parallel for schedule(static)
    for (int is = 0; is < n * n; ++is)
      fft_line(a.data() + nn * is, n, 1, sign);  // x lines
#pragma omp parallel for schedule(static)
    for (int is = 0; is < n * n; ++is) {
      const int iz = is / n, ix = is % n;
      fft_line(a.data() + (nn * iz) * nn + ix, n, nn, sign);  // y lines
    }
#pragma omp parallel for schedule(static)
    for (int is = 0; is < n * n; ++is)
      fft_line(a.data() + is, n, nn * nn, sign);  // z lines
  }
}

std::vector<double> cyclic_cross_correlation(const Field& f, const Field& g) {
  const int n = f.n, d = f.params.d;
  const std::size_t total = f.size();
  std::vector<std::complex<double>> fa(total), ga(total);
  for (std::size_t i = 0; i < total; ++i) fa[i] = f.values[i];
  for (std::size_t i = 0; i < total; ++i) ga[i] = g.values[i];
  fft_nd(fa, n, d, -1);
  fft_nd(ga, n, d, -1);
  for (std::size_t i = 0; i < total; ++i) fa[i] *= std::conj(ga[i]);
  fft_nd(fa, n, d, +1);
  std::vector<double> corr(total);
  const double inv = 1.0 / static_cast<double>(total);
  for (std::size_t i = 0; i < total; ++i) corr[i] = fa[i].real() * inv;
  return corr;
}

}  // namespace detail

namespace {

// ||f - g(. - s)||^2 in grid units (no h^d), summed with the fixed tree.
double exact_shift_sq_dist(const Field& f, const Field& g, const std::array<int, 3>& s) {
  const int n = f.n;
  std::vector<double> buf(f.size());
  if (f.params.d == 2) {
    for (int iy = 0; iy < n; ++iy) {
      const int jy = (iy - s[1] % n + n) % n;
      for (int ix = 0; ix < n; ++ix) {
        const int jx = (ix - s[0] % n + n) % n;
        const double diff = f.values[static_cast<std::size_t>(iy) * n + ix] -
                            g.values[static_cast<std::size_t>(jy) * n + jx];
        buf[static_cast<std::size_t>(iy) * n + ix] = diff * diff;
      }
    }
  } else {
    for (int iz = 0; iz < n; ++iz) {
      const int jz = (iz - s[2] % n + n) % n;
      for (int iy = 0; iy < n; ++iy) {
        const int jy = (iy - s[1] % n + n) % n;
        for (int ix = 0; ix < n; ++ix) {
          const int jx = (ix - s[0] % n + n) % n;
          const double diff =
              f.values[(static_cast<std::size_t>(iz) * n + iy) * n + ix] -
              g.values[(static_cast<std::size_t>(jz) * n + jy) * n + jx];
          buf[(static_cast<std::size_t>(iz) * n + iy) * n + ix] = diff * diff;
        }
      }
    }
  }
  return pairwise_sum(buf);
}

}  // namespace

Registration l2_dist_mod_translation(const Field& f, const Field& g) {
  if (f.n != g.n || f.params.d != g.params.d)
    throw std::invalid_argument("l2_dist_mod_translation: grid mismatch");
  const int n = f.n, d = f.params.d;
  const std::vector<double> corr = detail::cyclic_cross_correlation(f, g);

  double cmax = corr[0];
  for (const double c : corr) cmax = std::max(cmax, c);
  double amp_f = 0.0, amp_g = 0.0;
  for (const double v : f.values) amp_f = std::max(amp_f, std::fabs(v));
  for (const double v : g.values) amp_g = std::max(amp_g, std::fabs(v));
  const double tol =
      1e-9 * static_cast<double>(f.size()) * (1.0 + amp_f) * (1.0 + amp_g);

  // Collect near-optimal shifts in lexicographic order and settle them by
  // exact re-evaluation; ties keep the first (smallest) shift.
  constexpr int kMaxCandidates = 64;
  std::array<int, 3> best_shift = {0, 0, 0};
  double best_sq = -1.0;
  int found = 0;
  const int nz = d == 3 ? n : 1;
  for (int sz = 0; sz < nz && found < kMaxCandidates; ++sz)
    for (int sy = 0; sy < n && found < kMaxCandidates; ++sy)
      for (int sx = 0; sx < n && found < kMaxCandidates; ++sx) {
        const std::size_t idx =
            (static_cast<std::size_t>(sz) * (d == 3 ? n : 1) + sy) * n + sx;
        if (corr[idx] < cmax - tol) continue;
        ++found;
        const std::array<int, 3> s = {sx, sy, sz};
        const double sq = exact_shift_sq_dist(f, g, s);
        if (best_sq < 0.0 || sq < best_sq) {
          best_sq = sq;
          best_shift = s;
        }
      }
  Registration out;
  out.shift = best_shift;
  out.dist = std::sqrt(std::max(best_sq, 0.0) * f.cell_volume());
  return out;
}

}  // namespace chl

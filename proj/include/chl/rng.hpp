#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "chl/field.hpp"

namespace chl {

// splitmix64: tiny, portable, identical across compilers.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

// Band-limited random field: the mean value plus a few low-frequency cosine
// modes with seeded amplitudes and phases. Deterministic for a given seed.
inline Field random_smooth_field(const ModelParams& p, int n, std::uint64_t seed,
                                 int max_mode = 4, double amplitude = 0.6) {
  SplitMix64 rng(seed);
  struct Mode {
    double kx, ky, kz, amp, phase;
  };
  std::vector<Mode> modes;
  const int d = p.d;
  for (int kx = 0; kx <= max_mode; ++kx)
    for (int ky = -max_mode; ky <= max_mode; ++ky)
      for (int kz = d == 3 ? -max_mode : 0; kz <= (d == 3 ? max_mode : 0); ++kz) {
        if (kx == 0 && ky == 0 && kz == 0) continue;
        if (kx == 0 && ky < 0) continue;  // one representative per +-k pair
        const double k2 = kx * kx + ky * ky + kz * kz;
        if (k2 > max_mode * max_mode) continue;
        modes.push_back({static_cast<double>(kx), static_cast<double>(ky),
                         static_cast<double>(kz),
                         rng.uniform(-1.0, 1.0) / k2, rng.uniform(0.0, 2.0 * M_PI)});
      }
  Field f(p, n);
  const double m = p.mean_value();
  const double two_pi_over_n = 2.0 * M_PI / n;
  const long long total = static_cast<long long>(f.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < total; ++i) {
    const int ix = static_cast<int>(i % n);
    const int iy = static_cast<int>((i / n) % n);
    const int iz = static_cast<int>(i / (static_cast<long long>(n) * n));
    double v = m;
    for (const Mode& mo : modes)
      v += amplitude * mo.amp *
           std::cos(two_pi_over_n * (mo.kx * ix + mo.ky * iy + mo.kz * iz) + mo.phase);
    f.values[i] = v;
  }
  return f;
}

}  // namespace chl

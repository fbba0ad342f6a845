// Timings of the OpenMP kernels against their serial references, plus a
// bitwise agreement check. Not part of the test suite; run manually.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "chl/field.hpp"
#include "chl/kernels.hpp"
#include "chl/rng.hpp"
#include "chl/steiner.hpp"

using clock_type = std::chrono::steady_clock;

namespace {

template <typename F>
double time_ms(F&& fn, int reps) {
  const auto t0 = clock_type::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto t1 = clock_type::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not enabled\n");
#endif
  for (const int n : {256, 512}) {
    const chl::ModelParams p{2, 1.5, 0.04};
    const chl::Field f = chl::random_smooth_field(p, n, 12345);
    const int reps = n <= 256 ? 50 : 10;

    const double e_par = chl::energy_gap(f);
    const double e_ser = chl::ref::energy_gap(f);
    const chl::Field g_par = chl::energy_gradient(f);
    const chl::Field g_ser = chl::ref::energy_gradient(f);
    const double nu_par = chl::nu(f);
    const double nu_ser = chl::ref::nu(f);

    std::printf("n=%d  energy: omp %.3f ms, serial %.3f ms, equal=%d\n", n,
                time_ms([&] { (void)chl::energy_gap(f); }, reps),
                time_ms([&] { (void)chl::ref::energy_gap(f); }, reps),
                e_par == e_ser);
    std::printf("n=%d  gradient: omp %.3f ms, serial %.3f ms, equal=%d\n", n,
                time_ms([&] { (void)chl::energy_gradient(f); }, reps),
                time_ms([&] { (void)chl::ref::energy_gradient(f); }, reps),
                bitwise_equal(g_par.values, g_ser.values));
    std::printf("n=%d  nu: omp %.3f ms, serial %.3f ms, equal=%d\n", n,
                time_ms([&] { (void)chl::nu(f); }, reps),
                time_ms([&] { (void)chl::ref::nu(f); }, reps), nu_par == nu_ser);
    std::printf("n=%d  steiner: %.3f ms\n", n,
                time_ms([&] { (void)chl::steiner_symmetrize(f); }, reps));
  }
  return 0;
}

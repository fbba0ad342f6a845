#include "chl/field.hpp"

#include <cmath>
#include <stdexcept>

#include "chl/kernels.hpp"
#include "chl/limit_model.hpp"

namespace chl {

void validate_grid(int n) {
  if (n < 32 || n > 1024 || (n & (n - 1)) != 0)
    throw std::invalid_argument("grid size must be a power of two in [32, 1024]");
}

Field::Field(const ModelParams& p, int n_) : params(p), n(n_) {
  params.validate();
  validate_grid(n);
  std::size_t total = 1;
  for (int a = 0; a < params.d; ++a) total *= static_cast<std::size_t>(n);
  values.assign(total, 0.0);
}

double Field::cell_volume() const {
  double hv = 1.0;
  for (int a = 0; a < params.d; ++a) hv *= spacing();
  return hv;
}

double sharp_radius(double omega, const ModelParams& p) {
  return std::pow(omega * p.d / surface_area_unit_sphere(p.d), 1.0 / p.d);
}

Field uniform_field(const ModelParams& p, int n) {
  Field f(p, n);
  const double m = p.mean_value();
  for (auto& v : f.values) v = m;
  return f;
}

namespace {

double periodic_delta(double x, double c, double ell) {
  double d = std::fabs(x - c);
  if (d > 0.5 * ell) d = ell - d;
  return d;
}

// Fills out[i] = periodic distance from cell center i to `center`.
void fill_distance(const Field& f, const std::array<double, 3>& center,
                   std::vector<double>& dist) {
  const int n = f.n;
  const double h = f.spacing();
  const double ell = f.params.side();
  const double x0 = -0.5 * ell + 0.5 * h;
  dist.resize(f.size());
  if (f.params.d == 2) {
#pragma omp parallel for schedule(static)
    for (int iy = 0; iy < n; ++iy) {
      const double dy = periodic_delta(x0 + iy * h, center[1], ell);
      for (int ix = 0; ix < n; ++ix) {
        const double dx = periodic_delta(x0 + ix * h, center[0], ell);
        dist[static_cast<std::size_t>(iy) * n + ix] = std::sqrt(dx * dx + dy * dy);
      }
    }
  } else {
#pragma omp parallel for schedule(static)
    for (int iz = 0; iz < n; ++iz) {
      const double dz = periodic_delta(x0 + iz * h, center[2], ell);
      for (int iy = 0; iy < n; ++iy) {
        const double dy = periodic_delta(x0 + iy * h, center[1], ell);
        for (int ix = 0; ix < n; ++ix) {
          const double dx = periodic_delta(x0 + ix * h, center[0], ell);
          dist[(static_cast<std::size_t>(iz) * n + iy) * n + ix] =
              std::sqrt(dx * dx + dy * dy + dz * dz);
        }
      }
    }
  }
}

// Shifts the whole field so its mean is exactly the model mean; bisection on
// the recomputed mean. Throws if the bracket fails.
void fix_mean(Field& f) {
  const double m = f.params.mean_value();
  double lo = -3.0, hi = 3.0;
  Field trial = f;
  const auto mean_at = [&](double a) {
    for (std::size_t i = 0; i < f.size(); ++i) trial.values[i] = f.values[i] + a;
    return field_mean(trial) - m;
  };
  double flo = mean_at(lo);
  if (!(flo < 0.0) || !(mean_at(hi) > 0.0))
    throw std::runtime_error("droplet: mean-shift bisection failed to bracket");
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (mean_at(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double alpha = 0.5 * (lo + hi);
  for (auto& v : f.values) v += alpha;
}

std::array<double, 3> grid_center(const Field& f) {
  // cell center at index n/2 per axis: coordinate +h/2
  const double c = 0.5 * f.spacing();
  return {c, c, c};
}

}  // namespace

Field make_sharp_profile(const SharpProfile& sp, const ModelParams& p, int n) {
  p.validate();
  if (sp.omega < 0.0) throw std::invalid_argument("make_sharp_profile: omega < 0");
  Field f(p, n);
  const double r = sharp_radius(sp.omega, p);
  if (r > 0.5 * p.side())
    throw std::invalid_argument("make_sharp_profile: ball does not fit in the torus");
  std::vector<double> dist;
  fill_distance(f, sp.center, dist);
  const long long total = static_cast<long long>(f.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < total; ++i)
    f.values[i] = dist[i] <= r ? 1.0 : -1.0;
  return f;
}

Field droplet(double omega, const ModelParams& p, int n, double R) {
  p.validate();
  if (R < 0.0) R = 8.0 * p.phi;
  const double cap = 0.5 * std::pow(p.xi, p.d + 1.0);
  if (!(omega > 0.0) || omega > cap)
    throw std::invalid_argument("droplet: omega must lie in (0, xi^(d+1)/2]");
  const double r = sharp_radius(omega, p);
  if (r + 2.0 * R > 0.5 * p.side())
    throw std::invalid_argument("droplet: radius plus interface width exceeds the torus");

  Field f(p, n);
  std::vector<double> dist;
  fill_distance(f, grid_center(f), dist);

  const double w = std::sqrt(2.0) * p.phi;  // tanh width
  const double vR = std::tanh(R / w);
  const double sec = 1.0 - vR * vR;
  double slope0 = (R / w) * sec;  // d|v|/dt at t=0, t = (|s|-R)/R
  // Fritsch-Carlson clamp keeps the cubic blend monotone.
  if (slope0 > 3.0 * (1.0 - vR)) slope0 = 3.0 * (1.0 - vR);

  const long long total = static_cast<long long>(f.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < total; ++i) {
    const double s = dist[i] - r;
    const double as = std::fabs(s);
    double mag;
    if (as < R) {
      mag = std::tanh(as / w);
    } else if (as < 2.0 * R) {
      const double t = (as - R) / R;
      mag = vR * (2.0 * t * t * t - 3.0 * t * t + 1.0) +
            slope0 * (t * t * t - 2.0 * t * t + t) +
            (-2.0 * t * t * t + 3.0 * t * t);
    } else {
      mag = 1.0;
    }
    f.values[i] = s <= 0.0 ? mag : -mag;
  }
  fix_mean(f);
  return f;
}

Field droplet_for_nu(double target, const ModelParams& p, int n) {
  if (!(target > 0.0)) throw std::invalid_argument("droplet_for_nu: target must be positive");
  const double cap = 0.5 * std::pow(p.xi, p.d + 1.0);
  double lo = 1e-8;
  double hi = std::min(1.5 * target + 0.5, cap);
  Field f = droplet(hi, p, n);
  if (nu(f) < target)
    throw std::invalid_argument("droplet_for_nu: target volume not reachable");
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    f = droplet(mid, p, n);
    if (nu(f) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return droplet(hi, p, n);
}

Field path_point(double t, double omega1, double omega2, const ModelParams& p, int n) {
  if (!(t >= 0.0) || t > 1.0) throw std::invalid_argument("path_point: t must lie in [0,1]");
  if (!(omega1 > 0.0) || !(omega1 < omega2) ||
      omega2 > 0.5 * std::pow(p.xi, p.d + 1.0))
    throw std::invalid_argument("path_point: need 0 < omega1 < omega2 <= xi^(d+1)/2");
  if (t <= kPathT1) {
    Field d1 = droplet(omega1, p, n);
    const double m = p.mean_value();
    const double a = t / kPathT1;
    for (auto& v : d1.values) v = (1.0 - a) * m + a * v;
    return d1;
  }
  const double om = omega1 + (t - kPathT1) / (1.0 - kPathT1) * (omega2 - omega1);
  return droplet(om, p, n);
}

}  // namespace chl

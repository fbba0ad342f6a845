#include "chl/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chl/correlate.hpp"
#include "chl/kernels.hpp"
#include "chl/limit_model.hpp"

namespace chl {

namespace {

double chi3_weight_sum(const Field& f, std::vector<double>& buf) {
  const double k = f.params.kappa();
  buf.resize(f.size());
  const long long total = static_cast<long long>(f.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < total; ++i) buf[i] = chi3_prime_of(f.values[i], k);
  return pairwise_sum(buf);
}

// lambda-tilde solving min || g + l1 + l2 w ||_2 over the cells.
struct Multipliers {
  double l1 = 0.0, l2 = 0.0;
};

Multipliers least_squares_multipliers(const Field& g, const std::vector<double>& w) {
  const double N = static_cast<double>(g.size());
  std::vector<double> buf(g.size());
  const double sw = pairwise_sum(w);
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = w[i] * w[i];
  const double sww = pairwise_sum(buf);
  const double sg = pairwise_sum(g.values);
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = w[i] * g.values[i];
  const double swg = pairwise_sum(buf);
  const double det = N * sww - sw * sw;
  Multipliers m;
  if (det <= 1e-12 * N * std::max(sww, 1.0)) {
    m.l1 = -sg / N;
    m.l2 = 0.0;
  } else {
    m.l1 = (-sg * sww + sw * swg) / det;
    m.l2 = (-N * swg + sw * sg) / det;
  }
  return m;
}

struct ResidualInfo {
  Multipliers mult;
  double sup = 0.0;  // sup-norm of the projected gradient
  double sq = 0.0;   // h^d * sum r^2
};

ResidualInfo projected_residual(const Field& g, const Field& u,
                                std::vector<double>& w, Field& r) {
  const double k = u.params.kappa();
  w.resize(u.size());
  const long long total = static_cast<long long>(u.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < total; ++i) w[i] = chi3_prime_of(u.values[i], k);
  ResidualInfo info;
  info.mult = least_squares_multipliers(g, w);
  r.params = u.params;
  r.n = u.n;
  r.values.resize(u.size());
  std::vector<double> sq(u.size());
  double sup = 0.0;
#pragma omp parallel for schedule(static) reduction(max : sup)
  for (long long i = 0; i < total; ++i) {
    const double v = g.values[i] + info.mult.l1 + info.mult.l2 * w[i];
    r.values[i] = v;
    sq[i] = v * v;
    sup = std::max(sup, std::fabs(v));
  }
  info.sup = sup;
  info.sq = u.cell_volume() * pairwise_sum(sq);
  return info;
}

}  // namespace

Field project_constraints(const Field& f, double omega, double tol) {
  if (omega < 0.0 || omega > 0.5 * std::pow(f.params.xi, f.params.d + 1.0))
    throw std::invalid_argument("project_constraints: omega out of range");
  const double m = f.params.mean_value();
  Field u = f;
  std::vector<double> w;
  double r1 = field_mean(u) - m;
  double r2 = nu(u) - omega;
  if (std::fabs(r1) <= tol && std::fabs(r2) <= tol) return u;  // already feasible

  for (int it = 0; it < 50; ++it) {
    const double sw = chi3_weight_sum(u, w);
    const double N = static_cast<double>(u.size());
    const double hv = u.cell_volume();
    std::vector<double> buf(u.size());
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = w[i] * w[i];
    const double sww = pairwise_sum(buf);
    // residuals: r1(a,b) = mean + a + b*mean(w) - m ; r2(a,b) = nu(u + a + b w) - omega
    const double J11 = 1.0, J12 = sw / N;
    const double J21 = hv * sw, J22 = hv * sww;
    double det = J11 * J22 - J12 * J21;
    double da, db;
    if (std::fabs(det) < 1e-14 * (std::fabs(J22) + std::fabs(J12 * J21)) + 1e-300) {
      // singular: fall back to fixing the mean alone, damped
      da = -r1;
      db = 0.0;
      if (std::fabs(r2) > tol)
        throw ProjectionError("project_constraints: singular Jacobian, volume unreachable");
    } else {
      da = (-r1 * J22 + r2 * J12) / det;
      db = (-J11 * r2 + J21 * r1) / det;
    }
    const double res0 = std::fabs(r1) / tol + std::fabs(r2) / tol;
    double step = 1.0;
    for (int halving = 0; halving < 30; ++halving) {
      Field trial = u;
      const long long total = static_cast<long long>(u.size());
#pragma omp parallel for schedule(static)
      for (long long i = 0; i < total; ++i)
        trial.values[i] = u.values[i] + step * (da + db * w[i]);
      const double t1 = field_mean(trial) - m;
      const double t2 = nu(trial) - omega;
      if (std::fabs(t1) / tol + std::fabs(t2) / tol < res0 || res0 == 0.0) {
        u = std::move(trial);
        r1 = t1;
        r2 = t2;
        break;
      }
      step *= 0.5;
      if (halving == 29)
        throw ProjectionError("project_constraints: damped Newton stalled");
    }
    if (std::fabs(r1) <= tol && std::fabs(r2) <= tol) return u;
  }
  throw ProjectionError("project_constraints: no convergence in 50 iterations");
}

double el_residual(const Field& f, double lambda_phi, double lambda_omega) {
  const Field g = energy_gradient(f);
  const double k = f.params.kappa();
  const double shift = potential_prime(f.params.mean_value()) / f.params.phi;
  double sup = 0.0;
  const long long total = static_cast<long long>(f.size());
#pragma omp parallel for schedule(static) reduction(max : sup)
  for (long long i = 0; i < total; ++i) {
    // g = -phi lap u + (G'(u) - G'(m))/phi, so add G'(m)/phi back
    const double v = g.values[i] + shift + lambda_phi +
                     lambda_omega * chi3_prime_of(f.values[i], k);
    sup = std::max(sup, std::fabs(v));
  }
  return sup;
}

ConstrainedResult constrained_minimize(double omega, const Field& init,
                                       const MinimizeConfig& cfg) {
  ConstrainedResult res;
  res.field = project_constraints(init, omega, cfg.constraint_tol);
  res.energy = energy_gap(res.field);
  res.energy_log.push_back(res.energy);

  const double gm_shift = potential_prime(init.params.mean_value()) / init.params.phi;
  std::vector<double> w;
  Field r;
  double alpha = cfg.initial_step;
  for (int it = 0; it < cfg.max_iter; ++it) {
    const Field g = energy_gradient(res.field);
    const ResidualInfo info = projected_residual(g, res.field, w, r);
    res.lambda_phi = info.mult.l1 - gm_shift;
    res.lambda_omega = info.mult.l2;
    res.el_residual = info.sup;
    if (info.sup <= cfg.grad_tol) {
      res.converged = true;
      return res;
    }
    bool accepted = false;
    while (alpha > 1e-18) {
      Field trial = res.field;
      const long long total = static_cast<long long>(trial.size());
#pragma omp parallel for schedule(static)
      for (long long i = 0; i < total; ++i)
        trial.values[i] -= alpha * r.values[i];
      bool feasible = true;
      try {
        trial = project_constraints(trial, omega, cfg.constraint_tol);
      } catch (const ProjectionError&) {
        feasible = false;
      }
      if (feasible) {
        const double et = energy_gap(trial);
        if (et <= res.energy - cfg.armijo_slope * alpha * info.sq) {
          res.field = std::move(trial);
          res.energy = et;
          res.energy_log.push_back(et);
          ++res.iterations;
          accepted = true;
          break;
        }
      }
      alpha *= cfg.armijo_shrink;
    }
    if (!accepted) break;  // line search exhausted; report the residual as is
    alpha = std::min(alpha * 2.0, cfg.initial_step);
  }
  // final residual with refreshed multipliers
  const Field g = energy_gradient(res.field);
  const ResidualInfo info = projected_residual(g, res.field, w, r);
  res.lambda_phi = info.mult.l1 - gm_shift;
  res.lambda_omega = info.mult.l2;
  res.el_residual = info.sup;
  res.converged = info.sup <= cfg.grad_tol;
  return res;
}

ConstrainedResult local_minimize_ball(const ModelParams& p, int n,
                                      const MinimizeConfig& cfg) {
  const LimitLandscape land = solve_extrema({p.d, p.xi});
  if (!land.extrema)
    throw std::invalid_argument("local_minimize_ball: xi <= xi_tilde, no droplet branch");
  const double gamma0 = land.extrema->gamma0;
  // Psi_m centered like the droplet, on the grid cell next to the origin
  const double hc = 0.5 * p.side() / n;
  const Field psi_m = make_sharp_profile({land.extrema->nu_m, {hc, hc, hc}}, p, n);
  const double m = p.mean_value();

  ConstrainedResult res;
  res.field = droplet(land.extrema->nu_m, p, n);
  {
    const Registration reg = l2_dist_mod_translation(res.field, psi_m);
    if (reg.dist > gamma0)
      throw std::invalid_argument("local_minimize_ball: start outside the gamma0 ball");
  }
  res.energy = energy_gap(res.field);
  res.energy_log.push_back(res.energy);
  const double gm_shift = potential_prime(m) / p.phi;

  const auto fix_mean = [m](Field& f) {
    const double a = m - field_mean(f);
    for (auto& v : f.values) v += a;
  };

  double alpha = cfg.initial_step;
  for (int it = 0; it < cfg.max_iter; ++it) {
    const Field g = energy_gradient(res.field);
    const double gmean = field_mean(g);
    Field r(p, n);
    std::vector<double> sq(g.size());
    double sup = 0.0;
    const long long total = static_cast<long long>(g.size());
#pragma omp parallel for schedule(static) reduction(max : sup)
    for (long long i = 0; i < total; ++i) {
      const double v = g.values[i] - gmean;
      r.values[i] = v;
      sq[i] = v * v;
      sup = std::max(sup, std::fabs(v));
    }
    res.lambda_phi = -gmean - gm_shift;
    res.lambda_omega = 0.0;
    res.el_residual = sup;
    if (sup <= cfg.grad_tol) {
      res.converged = true;
      return res;
    }
    const double rsq = res.field.cell_volume() * pairwise_sum(sq);
    bool accepted = false;
    while (alpha > 1e-18) {
      Field trial = res.field;
#pragma omp parallel for schedule(static)
      for (long long i = 0; i < total; ++i)
        trial.values[i] -= alpha * r.values[i];
      fix_mean(trial);
      const Registration reg = l2_dist_mod_translation(trial, psi_m);
      if (reg.dist > gamma0) {  // step leaves the ball: shrink
        alpha *= cfg.armijo_shrink;
        continue;
      }
      const double et = energy_gap(trial);
      if (et <= res.energy - cfg.armijo_slope * alpha * rsq) {
        res.field = std::move(trial);
        res.energy = et;
        res.energy_log.push_back(et);
        ++res.iterations;
        accepted = true;
        break;
      }
      alpha *= cfg.armijo_shrink;
    }
    if (!accepted) break;
    alpha = std::min(alpha * 2.0, cfg.initial_step);
  }
  const Field g = energy_gradient(res.field);
  const double gmean = field_mean(g);
  double sup = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    sup = std::max(sup, std::fabs(g.values[i] - gmean));
  res.lambda_phi = -gmean - gm_shift;
  res.el_residual = sup;
  res.converged = sup <= cfg.grad_tol;
  return res;
}

BarrierCurve barrier_sweep(const std::vector<double>& omega_grid,
                           const ModelParams& p, int n, const MinimizeConfig& cfg) {
  BarrierCurve curve;
  curve.samples.reserve(omega_grid.size());
  const Field uniform = uniform_field(p, n);
  const Field* warm = nullptr;
  ConstrainedResult prev;
  for (const double om : omega_grid) {
    ConstrainedResult r;
    bool done = false;
    if (!cfg.cold_start && warm != nullptr) {
      try {
        r = constrained_minimize(om, *warm, cfg);
        done = true;
      } catch (const ProjectionError&) {
        done = false;  // warm start not projectable; fall through to cold
      }
    }
    if (!done) {
      const Field init = om <= 0.0 ? uniform : droplet_for_nu(om, p, n);
      r = constrained_minimize(om, init, cfg);
    }
    curve.samples.push_back({om, r.energy, r.converged});
    if (r.converged) {
      prev = std::move(r);
      warm = &prev.field;
    }
  }
  curve.omega_star = std::numeric_limits<double>::quiet_NaN();
  curve.delta_e_omega = -std::numeric_limits<double>::infinity();
  for (const auto& s : curve.samples)
    if (s.converged && s.energy > curve.delta_e_omega) {
      curve.delta_e_omega = s.energy;
      curve.omega_star = s.omega;
    }
  return curve;
}

}  // namespace chl

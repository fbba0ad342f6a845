#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "chl/field.hpp"

// Volume-constrained minimization of the rescaled energy gap over the affine
// space of fields with mean -1+phi, plus the barrier sweep built on it.

namespace chl {

struct MinimizeConfig {
  int max_iter = 50000;
  double grad_tol = 1e-5;        // sup-norm of the projected gradient
  double constraint_tol = 1e-10; // on mean and nu
  double armijo_slope = 1e-4;
  double armijo_shrink = 0.5;
  double initial_step = 1.0;
  std::uint64_t seed = 0;
  bool cold_start = false;       // barrier sweep: ignore warm starts
};

struct ConstrainedResult {
  Field field;
  double energy = 0.0;
  double lambda_phi = 0.0;    // multiplier of the mean constraint (EL form)
  double lambda_omega = 0.0;  // multiplier of the volume constraint
  double el_residual = 0.0;   // sup |-phi lap u + G'(u)/phi + l_phi + l_omega chi3'(u)|
  int iterations = 0;         // accepted descent steps
  bool converged = false;
  std::vector<double> energy_log;  // energy after each accepted step
};

class ProjectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Returns f + a + b*chi3'(.) with (a, b) driven by a damped Newton iteration
// (direction refreshed at the current iterate) until mean = -1+phi and
// nu = omega, each to `tol`. Throws ProjectionError after 50 iterations.
Field project_constraints(const Field& f, double omega, double tol = 1e-10);

// Projected gradient descent with backtracking Armijo line search; multipliers
// recovered by least squares from the stationarity system. Non-convergence in
// max_iter is reported via converged=false, not an exception.
ConstrainedResult constrained_minimize(double omega, const Field& init,
                                       const MinimizeConfig& cfg);

double el_residual(const Field& f, double lambda_phi, double lambda_omega);

// Minimizes subject only to the mean constraint, starting from droplet(nu_m),
// with iterates confined to the gamma0-ball around the sharp profile Psi_m
// (translation-modded L2); steps leaving the ball are shrunk. Requires
// xi > xi_tilde (extrema must exist) and the start inside the ball.
ConstrainedResult local_minimize_ball(const ModelParams& p, int n,
                                      const MinimizeConfig& cfg);

struct BarrierSample {
  double omega = 0.0;
  double energy = 0.0;
  bool converged = false;
};

struct BarrierCurve {
  std::vector<BarrierSample> samples;
  double omega_star = 0.0;     // argmax of energy over converged samples
  double delta_e_omega = 0.0;  // that maximum
};

// Runs constrained_minimize over the grid in ascending order. Each sample is
// warm-started from the previous converged minimizer when projectable,
// otherwise cold-started from a volume-calibrated droplet (always, with
// cfg.cold_start). Per-sample non-convergence is recorded and the sweep
// continues.
BarrierCurve barrier_sweep(const std::vector<double>& omega_grid,
                           const ModelParams& p, int n, const MinimizeConfig& cfg);

}  // namespace chl

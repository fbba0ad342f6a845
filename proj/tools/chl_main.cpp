// Command-line front end: constants, minimize, sweep, path, diagnose,
// symmetrize, localmin. Exit codes: 0 ok, 2 bad config, 3 numerical
// non-convergence, 4 I/O failure. Errors go to stderr, data to stdout/files.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chl/correlate.hpp"
#include "chl/field.hpp"
#include "chl/field_io.hpp"
#include "chl/format.hpp"
#include "chl/kernels.hpp"
#include "chl/limit_model.hpp"
#include "chl/optimize.hpp"
#include "chl/shape.hpp"
#include "chl/steiner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerics = 3;
constexpr int kExitIo = 4;

struct RunConfig {
  int d = 2;
  double xi = 1.5;
  double phi = 0.04;
  int n = 256;
  std::uint64_t seed = 0;
  double omega = std::numeric_limits<double>::quiet_NaN();
  double omega_min = 0.0;
  double omega_max = std::numeric_limits<double>::quiet_NaN();
  int steps = 25;
  int levels = 33;
  int max_iter = 50000;
  double grad_tol = 1e-5;
  std::string out, report, config, input;
};

void add_common_options(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--d", rc.d);
  cmd->add_option("--xi", rc.xi);
  cmd->add_option("--phi", rc.phi);
  cmd->add_option("--n", rc.n);
  cmd->add_option("--seed", rc.seed);
  cmd->add_option("--omega", rc.omega);
  cmd->add_option("--omega-min", rc.omega_min);
  cmd->add_option("--omega-max", rc.omega_max);
  cmd->add_option("--steps", rc.steps);
  cmd->add_option("--levels", rc.levels);
  cmd->add_option("--max-iter", rc.max_iter);
  cmd->add_option("--grad-tol", rc.grad_tol);
  cmd->add_option("--out", rc.out);
  cmd->add_option("--report", rc.report);
  cmd->add_option("--config", rc.config);
}

// key=value per line, '#' comments; command-line flags take precedence.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;
  std::ifstream is(config_path);
  if (!is) throw CLI::ValidationError("--config", "cannot open config file: " + config_path);
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    const std::string flag = "--" + key;
    bool given = false;
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) given = true;
    if (!given) args.push_back(flag + "=" + val);
  }
  return args;
}

chl::ModelParams model_params(const RunConfig& rc) {
  chl::ModelParams p{rc.d, rc.xi, rc.phi};
  p.validate();
  chl::validate_grid(rc.n);
  return p;
}

double default_nu_m(const chl::ModelParams& p) {
  const auto land = chl::solve_extrema({p.d, p.xi});
  if (!land.extrema)
    throw std::invalid_argument("xi <= xi_tilde: no droplet volume nu_m to default to");
  return land.extrema->nu_m;
}

std::ostream& open_report(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path, std::ios::trunc);
  if (!file) throw chl::FieldIoError(chl::FieldIoStatus::io_failure,
                                     "cannot open report file: " + path);
  return file;
}

void write_minimize_report(std::ostream& os, const chl::ConstrainedResult& r) {
  os << "energy,lambda_phi,lambda_omega,el_residual,iterations,converged\n"
     << chl::format_double(r.energy) << ',' << chl::format_double(r.lambda_phi) << ','
     << chl::format_double(r.lambda_omega) << ',' << chl::format_double(r.el_residual)
     << ',' << r.iterations << ',' << (r.converged ? "true" : "false") << '\n';
}

int run_constants(const RunConfig& rc) {
  const chl::LimitLandscape land = chl::solve_extrema({rc.d, rc.xi});
  std::cout << "d,xi,c0,sigma_d,c1_bar,xi_tilde,xi_d,nu_s,nu_m,c_s,c_m,gamma0\n";
  std::cout << rc.d << ',' << chl::format_double(rc.xi) << ','
            << chl::format_double(land.c0) << ',' << chl::format_double(land.sigma_d)
            << ',' << chl::format_double(land.c1_bar) << ','
            << chl::format_double(land.xi_tilde) << ',' << chl::format_double(land.xi_d)
            << ',';
  if (land.extrema) {
    const auto& e = *land.extrema;
    std::cout << chl::format_double(e.nu_s) << ',' << chl::format_double(e.nu_m) << ','
              << chl::format_double(e.c_s) << ',' << chl::format_double(e.c_m) << ','
              << chl::format_double(e.gamma0);
  } else {
    std::cout << ",,,,";
  }
  std::cout << '\n';
  return kExitOk;
}

int run_minimize(const RunConfig& rc) {
  const chl::ModelParams p = model_params(rc);
  const double omega = std::isnan(rc.omega) ? default_nu_m(p) : rc.omega;
  if (omega < 0.0) throw std::invalid_argument("--omega must be nonnegative");
  chl::MinimizeConfig cfg;
  cfg.max_iter = rc.max_iter;
  cfg.grad_tol = rc.grad_tol;
  cfg.seed = rc.seed;
  const chl::Field init =
      omega == 0.0 ? chl::uniform_field(p, rc.n) : chl::droplet_for_nu(omega, p, rc.n);
  const chl::ConstrainedResult r = chl::constrained_minimize(omega, init, cfg);
  if (!rc.out.empty()) chl::write_field(r.field, rc.out);
  std::ofstream file;
  write_minimize_report(open_report(file, rc.report), r);
  return r.converged ? kExitOk : kExitNumerics;
}

int run_localmin(const RunConfig& rc) {
  const chl::ModelParams p = model_params(rc);
  chl::MinimizeConfig cfg;
  cfg.max_iter = rc.max_iter;
  cfg.grad_tol = rc.grad_tol;
  cfg.seed = rc.seed;
  const chl::ConstrainedResult r = chl::local_minimize_ball(p, rc.n, cfg);
  if (!rc.out.empty()) chl::write_field(r.field, rc.out);
  std::ofstream file;
  write_minimize_report(open_report(file, rc.report), r);
  return r.converged ? kExitOk : kExitNumerics;
}

int run_sweep(const RunConfig& rc) {
  const chl::ModelParams p = model_params(rc);
  if (rc.steps < 2) throw std::invalid_argument("--steps must be >= 2");
  const double omega_max = std::isnan(rc.omega_max) ? default_nu_m(p) : rc.omega_max;
  std::vector<double> grid(rc.steps);
  for (int i = 0; i < rc.steps; ++i)
    grid[i] = rc.omega_min + (omega_max - rc.omega_min) * i / (rc.steps - 1);
  chl::MinimizeConfig cfg;
  cfg.max_iter = rc.max_iter;
  cfg.grad_tol = rc.grad_tol;
  cfg.seed = rc.seed;
  const chl::BarrierCurve curve = chl::barrier_sweep(grid, p, rc.n, cfg);
  std::ofstream file;
  std::ostream& os = open_report(file, rc.report);
  os << "omega,energy,converged\n";
  bool all_ok = true;
  for (const auto& s : curve.samples) {
    os << chl::format_double(s.omega) << ',' << chl::format_double(s.energy) << ','
       << (s.converged ? "true" : "false") << '\n';
    all_ok = all_ok && s.converged;
  }
  os << "# omega_star=" << chl::format_double(curve.omega_star) << '\n';
  os << "# delta_e_omega=" << chl::format_double(curve.delta_e_omega) << '\n';
  return all_ok ? kExitOk : kExitNumerics;
}

int run_path(const RunConfig& rc) {
  const chl::ModelParams p = model_params(rc);
  const auto land = chl::solve_extrema({p.d, p.xi});
  double om1 = rc.omega_min, om2 = rc.omega_max;
  if (om1 <= 0.0) {
    if (!land.extrema) throw std::invalid_argument("no default omega1: xi <= xi_tilde");
    om1 = 0.1 * land.extrema->nu_s;
  }
  if (std::isnan(om2)) om2 = default_nu_m(p);
  if (rc.steps < 2) throw std::invalid_argument("--steps must be >= 2");
  std::ofstream file;
  std::ostream& os = open_report(file, rc.report);
  os << "t,nu,energy\n";
  double emax = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < rc.steps; ++i) {
    const double t = static_cast<double>(i) / (rc.steps - 1);
    const chl::Field u = chl::path_point(t, om1, om2, p, rc.n);
    const double e = chl::energy_gap(u);
    emax = std::max(emax, e);
    os << chl::format_double(t) << ',' << chl::format_double(chl::nu(u)) << ','
       << chl::format_double(e) << '\n';
  }
  os << "# max_energy=" << chl::format_double(emax) << '\n';
  return kExitOk;
}

int run_diagnose(const RunConfig& rc) {
  const chl::Field f = chl::read_field(rc.input);
  if (f.params.d != 2)
    throw std::invalid_argument("diagnose supports d = 2 fields only");
  const chl::ShapeReport rep = chl::diagnose(f, rc.levels);
  std::ofstream file;
  chl::write_csv(rep, open_report(file, rc.report));
  return kExitOk;
}

int run_symmetrize(const RunConfig& rc) {
  const chl::Field f = chl::read_field(rc.input);
  const chl::RearrangementEnergy e = chl::energy_decrease_report(f);
  if (!rc.out.empty()) chl::write_field(chl::steiner_symmetrize(f), rc.out);
  std::ofstream file;
  std::ostream& os = open_report(file, rc.report);
  os << "before,after,dirichlet_before,dirichlet_after\n"
     << chl::format_double(e.before) << ',' << chl::format_double(e.after) << ','
     << chl::format_double(e.dirichlet_before) << ','
     << chl::format_double(e.dirichlet_after) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"droplet energy landscape on the flat torus"};
  app.require_subcommand(1);
  RunConfig rc;

  CLI::App* c_constants = app.add_subcommand("constants", "sharp-interface limit constants");
  CLI::App* c_minimize = app.add_subcommand("minimize", "volume-constrained minimizer");
  CLI::App* c_sweep = app.add_subcommand("sweep", "barrier sweep over volumes");
  CLI::App* c_path = app.add_subcommand("path", "energy along the droplet trial path");
  CLI::App* c_diagnose = app.add_subcommand("diagnose", "shape report for a field file");
  CLI::App* c_symmetrize = app.add_subcommand("symmetrize", "Steiner symmetrization");
  CLI::App* c_localmin = app.add_subcommand("localmin", "local minimizer in the gamma0 ball");
  for (CLI::App* c : {c_constants, c_minimize, c_sweep, c_path, c_diagnose,
                      c_symmetrize, c_localmin})
    add_common_options(c, rc);
  c_diagnose->add_option("input", rc.input)->required();
  c_symmetrize->add_option("input", rc.input)->required();

  try {
    const std::vector<std::string> args = expand_config(argc, argv);
    std::vector<const char*> cargs;
    cargs.push_back(argv[0]);
    for (const auto& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (c_constants->parsed()) return run_constants(rc);
    if (c_minimize->parsed()) return run_minimize(rc);
    if (c_sweep->parsed()) return run_sweep(rc);
    if (c_path->parsed()) return run_path(rc);
    if (c_diagnose->parsed()) return run_diagnose(rc);
    if (c_symmetrize->parsed()) return run_symmetrize(rc);
    if (c_localmin->parsed()) return run_localmin(rc);
  } catch (const chl::FieldIoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const chl::ProjectionError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerics;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerics;
  }
  return kExitConfig;
}

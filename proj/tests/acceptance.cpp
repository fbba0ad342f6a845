// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exit code = number of failed criteria.
// argv[1] (optional) = path to the CLI binary, needed for criterion 9.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "chl/correlate.hpp"
#include "chl/field.hpp"
#include "chl/field_io.hpp"
#include "chl/kernels.hpp"
#include "chl/limit_model.hpp"
#include "chl/optimize.hpp"
#include "chl/shape.hpp"
#include "chl/steiner.hpp"
#include "chl/rng.hpp"
#include "test_helpers.hpp"

using namespace chl;
using clock_type = std::chrono::steady_clock;

namespace {

int g_failures = 0;
std::string g_cli;

struct Criterion {
  const char* name;
  clock_type::time_point t0 = clock_type::now();
  bool ok = true;
  std::string detail;

  explicit Criterion(const char* n) : name(n) {}
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  ~Criterion() {
    const double secs =
        std::chrono::duration<double>(clock_type::now() - t0).count();
    std::printf("criterion %-38s %s  (%.1f s)%s%s\n", name, ok ? "PASS" : "FAIL",
                secs, detail.empty() ? "" : "  -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// frozen 40-digit evaluations of the closed forms (independent oracle)
constexpr double kXiD2 = 1.6765391932197437;
constexpr double kXiTilde2 = 1.3306700394914688;
constexpr double kNuS = 0.23585419387272968;
constexpr double kNuM = 0.97267797798492839;
constexpr double kCs = 0.74563117276254482;
constexpr double kCm = 0.52679209378202880;

const ModelParams kP004{2, 1.5, 0.04};

void criterion1_constants() {
  Criterion c("1 (limit constants)");
  const auto [xit, xid] = critical_constants(2);
  c.require(std::fabs(xid - kXiD2) <= 1e-9, "xi_d mismatch " + fmt(xid));
  c.require(std::fabs(xit - kXiTilde2) <= 1e-9, "xi_tilde mismatch " + fmt(xit));

  const LimitParams pd{2, xid};
  const auto land = solve_extrema(pd);
  c.require(land.extrema.has_value(), "no extrema at xi_d");
  if (land.extrema)
    c.require(std::fabs(f_xi(land.extrema->nu_m, pd)) <= 1e-8,
              "f(nu_m) at xi_d = " + fmt(f_xi(land.extrema->nu_m, pd)));

  const LimitParams pt{2, xit};
  double lo = 1e-9, hi = 0.5 * std::pow(xit, 3);
  while (f_xi_second(hi, pt) <= 0.0) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (lo + hi);
    (f_xi_second(m, pt) < 0.0 ? lo : hi) = m;
  }
  const double nu_hat = 0.5 * (lo + hi);
  c.require(std::fabs(f_xi_prime(nu_hat, pt)) <= 1e-6,
            "f' at merged extremum = " + fmt(f_xi_prime(nu_hat, pt)));
  c.require(std::fabs(f_xi_second(nu_hat, pt)) <= 1e-6,
            "f'' at merged extremum = " + fmt(f_xi_second(nu_hat, pt)));
}

void criterion2_gradient() {
  Criterion c("2 (gradient consistency)");
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Field f = random_smooth_field(kP004, 64, 1000 + k);
    const Field v = random_smooth_field(kP004, 64, 2000 + k);
    const Field g = energy_gradient(f);
    std::vector<double> prod(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
      prod[i] = g.values[i] * (v.values[i] - kP004.mean_value());
    const double lhs = f.cell_volume() * pairwise_sum(prod);
    const double eps = 1e-6;
    Field fp = f, fm = f;
    for (std::size_t i = 0; i < f.size(); ++i) {
      fp.values[i] += eps * (v.values[i] - kP004.mean_value());
      fm.values[i] -= eps * (v.values[i] - kP004.mean_value());
    }
    const double rhs = (energy_gap(fp) - energy_gap(fm)) / (2.0 * eps);
    worst = std::max(worst, std::fabs(lhs - rhs) / std::max(1e-30, std::fabs(rhs)));
  }
  c.require(worst <= 1e-5, "max rel error " + fmt(worst));
}

// phi -> grid size keeping the interface resolved (h/phi roughly constant);
// at fixed n = 256 the phi = 0.02 interface is under-resolved (h = 2.5 phi)
// and the trend the criterion targets is swamped by quadrature error.
const std::vector<std::pair<double, int>> kPhiGrid = {
    {0.08, 128}, {0.04, 256}, {0.02, 1024}};

void criterion3_upper_bound() {
  Criterion c("3 (upper-bound construction)");
  std::vector<double> gaps;
  for (const auto& [phi, n] : kPhiGrid) {
    const ModelParams p{2, 1.5, phi};
    gaps.push_back(std::fabs(energy_gap(droplet(kNuM, p, n)) - kCm));
  }
  c.require(gaps[0] > gaps[1] && gaps[1] > gaps[2],
            "not strictly decreasing: " + fmt(gaps[0]) + ", " + fmt(gaps[1]) + ", " +
                fmt(gaps[2]));
  c.require(gaps[2] <= 0.15 * kCs, "gap at phi=0.02: " + fmt(gaps[2]));
}

void criterion4_minimizer() {
  Criterion c("4 (constrained minimizer at nu_m)");
  MinimizeConfig cfg;  // defaults: grad_tol 1e-5, max_iter 50000
  const Field init = droplet_for_nu(kNuM, kP004, 256);
  const double e_init = energy_gap(init);
  const ConstrainedResult r = constrained_minimize(kNuM, init, cfg);
  c.require(r.converged, "not converged");
  c.require(r.el_residual <= 1e-4, "el_residual " + fmt(r.el_residual));
  c.require(r.energy <= e_init + 1e-12, "energy above droplet init");
  c.require(std::fabs(r.energy - kCm) <= 0.1,
            "|energy - c_m| = " + fmt(std::fabs(r.energy - kCm)));
  double lam004[3];
  const double levels[3] = {-0.5, 0.0, 0.5};
  for (int i = 0; i < 3; ++i) {
    lam004[i] = fraenkel_asymmetry(superlevel_mask(r.field, levels[i]));
    c.require(lam004[i] <= 0.1,
              "lambda(u>" + fmt(levels[i]) + ") = " + fmt(lam004[i]));
  }
  // same run at phi = 0.02 on a grid that keeps the interface resolved
  const ModelParams p002{2, 1.5, 0.02};
  const ConstrainedResult r2 =
      constrained_minimize(kNuM, droplet_for_nu(kNuM, p002, 512), cfg);
  c.require(r2.converged, "phi=0.02 run not converged");
  for (int i = 0; i < 3; ++i) {
    const double l2v = fraenkel_asymmetry(superlevel_mask(r2.field, levels[i]));
    c.require(l2v <= lam004[i],
              "lambda not non-increasing at s=" + fmt(levels[i]) + ": " + fmt(l2v) +
                  " vs " + fmt(lam004[i]));
  }
}

void criterion5_barrier_sweep() {
  Criterion c("5 (barrier sweep)");
  MinimizeConfig cfg;
  std::vector<double> grid(25);
  for (int i = 0; i < 25; ++i) grid[i] = kNuM * i / 24.0;

  const BarrierCurve c004 = barrier_sweep(grid, kP004, 256, cfg);
  c.require(std::fabs(c004.delta_e_omega - kCs) <= 0.1 * kCs,
            "delta_e_omega = " + fmt(c004.delta_e_omega));
  c.require(std::fabs(c004.omega_star - kNuS) <= 0.25,
            "omega_star = " + fmt(c004.omega_star));

  const ModelParams p008{2, 1.5, 0.08};
  const BarrierCurve c008 = barrier_sweep(grid, p008, 256, cfg);
  const auto max_dev = [](const BarrierCurve& bc, double xi) {
    double dev = 0.0;
    for (const auto& s : bc.samples)
      if (s.converged)
        dev = std::max(dev, std::fabs(s.energy - f_xi(s.omega, {2, xi})));
    return dev;
  };
  const double d008 = max_dev(c008, 1.5), d004 = max_dev(c004, 1.5);
  c.require(d004 < d008,
            "deviation did not decrease: " + fmt(d008) + " -> " + fmt(d004));
  int conv = 0;
  for (const auto& s : c004.samples) conv += s.converged ? 1 : 0;
  c.require(conv == 25, "only " + fmt(conv) + "/25 converged at phi=0.04");
}

void criterion6_local_ball() {
  Criterion c("6 (local minimizer in the gamma0 ball)");
  MinimizeConfig cfg;
  const int n = 256;
  const ConstrainedResult r = local_minimize_ball(kP004, n, cfg);
  c.require(r.converged, "not converged");
  double vmin = 1e300, vmax = -1e300;
  for (const double v : r.field.values) {
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  c.require(vmax - vmin > 0.5, "field is nearly constant");
  const auto land = solve_extrema({2, 1.5});
  const double hc = 0.5 * kP004.side() / n;
  const Field psi = make_sharp_profile({land.extrema->nu_m, {hc, hc, hc}}, kP004, n);
  const double dist = l2_dist_mod_translation(r.field, psi).dist;
  c.require(dist <= 0.8 * land.extrema->gamma0,
            "dist = " + fmt(dist) + " vs 0.8*gamma0 = " + fmt(0.8 * land.extrema->gamma0));
  c.require(std::fabs(nu(r.field) - kNuM) <= 0.25,
            "|nu - nu_m| = " + fmt(std::fabs(nu(r.field) - kNuM)));
}

void criterion7_steiner() {
  Criterion c("7 (steiner suite)");
  int dirichlet_violations = 0, structure_ok = 0;
  SplitMix64 seeder(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Field f = random_smooth_field(kP004, 64, seeder.next());
    const Field s = steiner_symmetrize(f);
    // value multiset bitwise
    std::vector<double> a = f.values, b = s.values;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    c.require(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0,
              "multiset changed (trial " + fmt(trial) + ")");
    if (!c.ok) return;
    // mean and nu to 1e-12
    c.require(std::fabs(field_mean(s) - field_mean(f)) <= 1e-12, "mean drift");
    c.require(std::fabs(nu(s) - nu(f)) <= 1e-12, "nu drift");
    // dirichlet monotone (violations logged)
    const double db = dirichlet_sum(f), da = dirichlet_sum(s);
    if (da > db + 1e-9) {
      ++dirichlet_violations;
      std::printf("  [criterion 7] dirichlet violation, trial %d: %.12g -> %.12g\n",
                  trial, db, da);
    }
    // idempotence bitwise
    const Field s2 = steiner_symmetrize(s);
    c.require(std::memcmp(s.values.data(), s2.values.data(),
                          s.size() * sizeof(double)) == 0,
              "not idempotent (trial " + fmt(trial) + ")");
    // per-line monotone structure
    bool mono = true;
    const int n = s.n;
    for (int iy = 0; iy < n && mono; ++iy) {
      double prev = s.values[static_cast<std::size_t>(iy) * n + 0];
      for (int rk = 1; rk < n; ++rk) {
        const double cur =
            s.values[static_cast<std::size_t>(iy) * n + rearrangement_index(rk, n)];
        if (cur > prev) {
          mono = false;
          break;
        }
        prev = cur;
      }
    }
    for (int ix = 0; ix < n && mono; ++ix) {
      double prev = s.values[ix];
      for (int rk = 1; rk < n; ++rk) {
        const double cur =
            s.values[static_cast<std::size_t>(rearrangement_index(rk, n)) * n + ix];
        if (cur > prev) {
          mono = false;
          break;
        }
        prev = cur;
      }
    }
    structure_ok += mono ? 1 : 0;
  }
  c.require(dirichlet_violations <= 1,
            fmt(dirichlet_violations) + " dirichlet violations");
  c.require(structure_ok == 100, "monotone structure in " + fmt(structure_ok) + "/100");
}

void criterion8_isoperimetry() {
  Criterion c("8 (isoperimetry suite)");
  int holds = 0;
  for (int k = 0; k < 200; ++k) {
    const Mask blob = testhelp::random_blob_mask(kP004, 256, 4200 + k);
    const double per = mask_perimeter(blob);
    if (per >= 0.98 * p_e(blob.area(), 2)) ++holds;
  }
  c.require(holds == 200, "perimeter bound held for " + fmt(holds) + "/200 masks");

  const int n = 256;
  const double h = kP004.side() / n;
  const double hc = 0.5 * h;
  const Field psi = make_sharp_profile({0.5, {hc, hc, 0}}, kP004, n);
  const Mask disk = superlevel_mask(psi, 0.0);
  const double lam = fraenkel_asymmetry(disk);
  c.require(lam <= 0.02, "disk lambda = " + fmt(lam));
  const BonnesenRadii br = bonnesen_radii(disk);
  c.require(br.rho_out - br.rho_in <= 2.0 * h,
            "rho_out - rho_in = " + fmt(br.rho_out - br.rho_in));

  // two far disks at n = 64, against the exhaustive search
  const int n64 = 64;
  const double h64 = kP004.side() / n64;
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(n64) * n64, 0);
  const double r = std::sqrt(0.5 / M_PI);
  const double ell = kP004.side();
  for (int iy = 0; iy < n64; ++iy)
    for (int ix = 0; ix < n64; ++ix) {
      const double x = -0.5 * ell + (ix + 0.5) * h64;
      const double y = -0.5 * ell + (iy + 0.5) * h64;
      const bool in1 = (x + ell / 4) * (x + ell / 4) + y * y <= r * r;
      const bool in2 = (x - ell / 4) * (x - ell / 4) + y * y <= r * r;
      cells[static_cast<std::size_t>(iy) * n64 + ix] = (in1 || in2) ? 1 : 0;
    }
  const Mask two = testhelp::mask_from_cells(n64, h64, std::move(cells));
  const double brute = fraenkel_asymmetry_brute(two);
  c.require(std::fabs(brute - 1.0) <= 0.05, "two-disk lambda = " + fmt(brute));
}

std::string run_cli(const std::string& args, const std::string& outfile) {
  const std::string cmd = g_cli + " " + args + " > " + outfile + " 2>/dev/null";
  (void)std::system(cmd.c_str());
  std::ifstream is(outfile);
  return std::string((std::istreambuf_iterator<char>(is)),
                     std::istreambuf_iterator<char>());
}

std::string slurp(const std::string& p) {
  std::ifstream is(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(is)),
                     std::istreambuf_iterator<char>());
}

void criterion9_roundtrips() {
  Criterion c("9 (file and CLI round trips)");
  const auto dir = std::filesystem::temp_directory_path();
  // field write -> read bitwise
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ModelParams p = seed % 2 ? ModelParams{3, 1.2, 0.06} : kP004;
    const Field f = random_smooth_field(p, 32, 900 + seed);
    const std::string path = (dir / "chl_acc_rt.chfd").string();
    write_field(f, path);
    const Field g = read_field(path);
    c.require(std::memcmp(f.values.data(), g.values.data(),
                          f.size() * sizeof(double)) == 0,
              "round trip not bitwise (seed " + fmt(seed) + ")");
  }
  if (g_cli.empty()) {
    c.require(false, "no CLI path given");
    return;
  }
  // every subcommand: byte-identical outputs across two runs
  const std::string drop = (dir / "chl_acc_drop.chfd").string();
  write_field(droplet(0.5, {2, 1.5, 0.08}, 64), drop);
  const std::vector<std::pair<std::string, std::string>> cmds = {
      {"constants", "constants --d 2 --xi 1.5"},
      {"minimize", "minimize --n 64 --phi 0.08 --omega 0.4 --grad-tol 1e-4"},
      {"sweep", "sweep --n 64 --phi 0.08 --steps 4 --grad-tol 1e-4"},
      {"path", "path --n 64 --phi 0.08 --steps 9"},
      {"diagnose", "diagnose " + drop + " --levels 9"},
      {"symmetrize", "symmetrize " + drop},
      {"localmin", "localmin --n 64 --phi 0.08 --max-iter 400 --grad-tol 1e-4"},
  };
  for (const auto& [name, args] : cmds) {
    const std::string out1 = (dir / ("chl_acc_" + name + "_1.txt")).string();
    const std::string out2 = (dir / ("chl_acc_" + name + "_2.txt")).string();
    const std::string field1 = (dir / ("chl_acc_" + name + "_1.chfd")).string();
    const std::string field2 = (dir / ("chl_acc_" + name + "_2.chfd")).string();
    std::string extra1, extra2;
    if (name == "minimize" || name == "localmin" || name == "symmetrize") {
      extra1 = " --out " + field1;
      extra2 = " --out " + field2;
    }
    const std::string a = run_cli(args + extra1, out1);
    const std::string b = run_cli(args + extra2, out2);
    c.require(a == b, name + " stdout differs between runs");
    if (!extra1.empty())
      c.require(slurp(field1) == slurp(field2), name + " field file differs");
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli = argv[1];
  criterion1_constants();
  criterion2_gradient();
  criterion3_upper_bound();
  criterion4_minimizer();
  criterion5_barrier_sweep();
  criterion6_local_ball();
  criterion7_steiner();
  criterion8_isoperimetry();
  criterion9_roundtrips();
  if (g_failures > 0) std::printf("%d criterion(s) FAILED\n", g_failures);
  else std::printf("all acceptance criteria passed\n");
  return g_failures;
}

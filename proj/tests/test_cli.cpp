#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <string>

#include "chl/field.hpp"
#include "chl/field_io.hpp"
#include "chl/kernels.hpp"

namespace {

std::string g_cli;

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const auto outfile = std::filesystem::temp_directory_path() / "chl_cli_out.txt";
  const std::string cmd = g_cli + " " + args + " > " + outfile.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream is(outfile);
  r.out.assign((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(is)),
                     std::istreambuf_iterator<char>());
}

std::filesystem::path tmp(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("constants subcommand") {
  const RunResult r = run("constants --d 2 --xi 1.5");
  CHECK(r.code == 0);
  CHECK(r.out.find("0.745631") != std::string::npos);  // c_s column
  const RunResult sub = run("constants --d 2 --xi 1.0");
  CHECK(sub.code == 0);
  CHECK(sub.out.find(",,,,") != std::string::npos);  // extrema columns empty
  CHECK(run("constants --d 1").code == 2);
  CHECK(run("constants --d 2 --xi -3").code == 2);
  CHECK(run("nonsense").code == 2);
}

TEST_CASE("minimize subcommand") {
  const auto field = tmp("chl_cli_min.chfd");
  const auto report = tmp("chl_cli_min.csv");
  const std::string base = "minimize --n 64 --phi 0.08 --omega 0.4 --grad-tol 1e-4 ";
  const RunResult ok =
      run(base + "--out " + field.string() + " --report " + report.string());
  CHECK(ok.code == 0);
  const std::string rep = slurp(report);
  CHECK(rep.find("energy,lambda_phi,lambda_omega,el_residual,iterations,converged") == 0);
  CHECK(rep.find("true") != std::string::npos);
  const chl::Field f = chl::read_field(field.string());
  CHECK(std::fabs(chl::nu(f) - 0.4) <= 1e-9);

  const RunResult capped = run(base + "--max-iter 1 --report " + report.string());
  CHECK(capped.code == 3);
  CHECK(slurp(report).find("false") != std::string::npos);

  CHECK(run(base + "--out /nonexistent_dir/x.chfd").code == 4);
  CHECK(run("minimize --n 100").code == 2);
  CHECK(run("minimize --phi 0.7").code == 2);
  std::filesystem::remove(field);
  std::filesystem::remove(report);
}

TEST_CASE("sweep subcommand") {
  const RunResult r = run("sweep --steps 5 --n 64 --phi 0.08 --grad-tol 1e-4");
  CHECK(r.code == 0);
  CHECK(r.out.find("omega,energy,converged") == 0);
  CHECK(r.out.find("# omega_star=") != std::string::npos);
  CHECK(r.out.find("# delta_e_omega=") != std::string::npos);
  int rows = 0;
  for (const char c : r.out)
    if (c == '\n') ++rows;
  CHECK(rows == 1 + 5 + 2);  // header + samples + two comment lines
}

TEST_CASE("path subcommand") {
  const RunResult r = run("path --steps 11 --n 64 --phi 0.08");
  CHECK(r.code == 0);
  CHECK(r.out.find("t,nu,energy") == 0);
  CHECK(r.out.find("# max_energy=") != std::string::npos);
}

TEST_CASE("diagnose and symmetrize round") {
  const auto field = tmp("chl_cli_drop.chfd");
  const auto sym = tmp("chl_cli_sym.chfd");
  const chl::ModelParams p{2, 1.5, 0.08};
  chl::write_field(chl::droplet(0.5, p, 64), field.string());

  const RunResult diag = run("diagnose " + field.string() + " --levels 9");
  CHECK(diag.code == 0);
  CHECK(diag.out.find("s,area,perimeter,p_e,fraenkel") == 0);
  CHECK(diag.out.find("# defect=") != std::string::npos);

  const RunResult s1 = run("symmetrize " + field.string() + " --out " + sym.string());
  CHECK(s1.code == 0);
  CHECK(s1.out.find("before,after,dirichlet_before,dirichlet_after") == 0);

  // symmetrizing the symmetrized field is a bitwise fixed point
  const auto sym2 = tmp("chl_cli_sym2.chfd");
  const RunResult s2 = run("symmetrize " + sym.string() + " --out " + sym2.string());
  CHECK(s2.code == 0);
  CHECK(slurp(sym) == slurp(sym2));

  CHECK(run("diagnose /nonexistent.chfd").code == 4);
  std::filesystem::remove(field);
  std::filesystem::remove(sym);
  std::filesystem::remove(sym2);
}

TEST_CASE("config file with flag override") {
  const auto cfg = tmp("chl_cli_cfg.txt");
  {
    std::ofstream os(cfg);
    os << "# sweep configuration\n"
       << "n=64\n"
       << "phi = 0.08\n"
       << "steps=4\n"
       << "grad-tol=1e-4\n";
  }
  const RunResult a = run("sweep --config " + cfg.string());
  CHECK(a.code == 0);
  int rows = 0;
  for (const char c : a.out)
    if (c == '\n') ++rows;
  CHECK(rows == 1 + 4 + 2);

  // command line overrides the file
  const RunResult b = run("sweep --config " + cfg.string() + " --steps 3");
  int rows_b = 0;
  for (const char c : b.out)
    if (c == '\n') ++rows_b;
  CHECK(rows_b == 1 + 3 + 2);

  CHECK(run("sweep --config /nonexistent.cfg").code == 2);
  std::filesystem::remove(cfg);
}

TEST_CASE("byte-identical reruns") {
  const auto f1 = tmp("chl_rep1.chfd");
  const auto f2 = tmp("chl_rep2.chfd");
  const std::string args = "minimize --n 64 --phi 0.08 --omega 0.3 --grad-tol 1e-4 ";
  const RunResult a = run(args + "--out " + f1.string());
  const RunResult b = run(args + "--out " + f2.string());
  CHECK(a.code == 0);
  CHECK(b.code == 0);
  CHECK(a.out == b.out);
  CHECK(slurp(f1) == slurp(f2));
  std::filesystem::remove(f1);
  std::filesystem::remove(f2);
}

int main(int argc, char** argv) {
  if (argc > 1) g_cli = argv[1];
  doctest::Context ctx;
  // keep doctest from complaining about our positional argument
  ctx.applyCommandLine(1, argv);
  if (g_cli.empty()) {
    std::fprintf(stderr, "usage: test_cli <path-to-chl-binary>\n");
    return 1;
  }
  return ctx.run();
}

// Command-line front end with one subcommand per task. The JSON report goes to
// stdout or to --out; the exit status is 0 on pass and 1 on fail (2 for usage).

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dyson/tasks.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

}  // namespace

int main(int argc, char** argv) {
  using namespace dyson::tasks;

  CLI::App app{"Numerical checks for the ground-state energy of the two-component charged Bose gas"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  bool json = true;
  bool timing = false;
  std::string out_path;
  std::uint64_t seed = 7;
  double tol = 1e-10;
  app.add_flag("--json", json, "Emit a JSON report (the only format)");
  app.add_option("--out", out_path, "Write the report to this file instead of stdout");
  app.add_option("--seed", seed, "Seed for every random ensemble")->capture_default_str();
  app.add_option("--tol", tol, "Quadrature tolerance for i0")->capture_default_str();
  app.add_flag("--timing", timing, "Add wall_time to the report (breaks byte-for-byte reproducibility)");

  auto* i0_cmd = app.add_subcommand("i0", "Foldy constant by three independent routes");

  MinimizeOptions mini;
  auto* min_cmd = app.add_subcommand("minimize", "Mean-field minimizer by shooting and gradient flow");
  min_cmd->add_option("--method", mini.method, "shooting | flow | both")
      ->check(CLI::IsMember({"shooting", "flow", "both"}))
      ->capture_default_str();
  min_cmd->add_option("--dump-profile", mini.dump_profile, "CSV file with columns r, phi");

  BogolubovOptions bog;
  auto* bog_cmd = app.add_subcommand("bogolubov", "Quadratic Hamiltonian bound against exact diagonalization");
  bog_cmd->add_option("--check-random", bog.draws, "Number of random draws")->capture_default_str();
  bog_cmd->add_option("--cutoff", bog.cutoff, "Largest per-mode occupation cutoff")->capture_default_str();

  LatticeOptions lat;
  auto* lat_cmd = app.add_subcommand("lattice-check", "Lattice Dirichlet identity and inequality ensembles");
  lat_cmd->add_option("--ensemble", lat.ensemble, "Number of random fields")->capture_default_str();
  lat_cmd->add_option("--dump", lat.dump, "CSV file with columns field, x, y, z, value");

  MatlocOptions mat;
  auto* mat_cmd = app.add_subcommand("matloc", "Window localization of random band matrices");
  mat_cmd->add_option("--n", mat.n, "Matrix size")->capture_default_str();
  mat_cmd->add_option("--band", mat.band, "Half bandwidth")->capture_default_str();
  mat_cmd->add_option("--window", mat.window, "Window length M")->capture_default_str();
  mat_cmd->add_option("--trials", mat.trials, "Number of random matrices")->capture_default_str();

  SlidingOptions sli;
  auto* sli_cmd = app.add_subcommand("sliding-check", "Smallest omega making the sliding transform nonnegative");
  sli_cmd->add_option("--t", sli.t, "Bump width parameter in (0, 1/2)")->capture_default_str();
  sli_cmd->add_option("--m", sli.m, "Yukawa screening mass")->capture_default_str();

  BumpsOptions bum;
  auto* bum_cmd = app.add_subcommand("bumps", "Partition of unity and normalization constants");
  bum_cmd->add_option("--t", bum.t, "Bump width parameter in (0, 1/2)")->capture_default_str();
  bum_cmd->add_option("--dump", bum.dump, "CSV file with the 1D profiles");

  FockOptions fck;
  auto* fck_cmd = app.add_subcommand("fock-check", "Creation-operator inequality, 20-vector identity, Neumann modes");
  fck_cmd->add_option("--cutoff", fck.cutoff, "Per-mode occupation cutoff")->capture_default_str();

  FsOptions fso;
  auto* fs_cmd = app.add_subcommand("fs-check", "Convolution estimate for f_s");
  fs_cmd->add_option("--s", fso.s, "Values of s in (0, 1)")->delimiter(',')->capture_default_str();

  auto* all_cmd = app.add_subcommand("accept-all", "Run every acceptance criterion");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  (void)json;

  const auto start = std::chrono::steady_clock::now();
  dyson::RunReport report;
  if (i0_cmd->parsed()) {
    report = i0(I0Options{tol});
  } else if (min_cmd->parsed()) {
    report = minimize(mini);
  } else if (bog_cmd->parsed()) {
    bog.seed = seed;
    report = bogolubov(bog);
  } else if (lat_cmd->parsed()) {
    lat.seed = seed;
    report = lattice_check(lat);
  } else if (mat_cmd->parsed()) {
    mat.seed = seed;
    report = matloc(mat);
  } else if (sli_cmd->parsed()) {
    report = sliding_check(sli);
  } else if (bum_cmd->parsed()) {
    report = bumps(bum);
  } else if (fck_cmd->parsed()) {
    fck.seed = seed;
    report = fock_check(fck);
  } else if (fs_cmd->parsed()) {
    report = fs_check(fso);
  } else if (all_cmd->parsed()) {
    report = accept_all(seed, timing);
  }
  if (timing) report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::string text = report.dump();
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot open " << out_path << " for writing\n";
      return kExitUsage;
    }
    out << text;
  }
  return report.pass ? kExitPass : kExitFail;
}

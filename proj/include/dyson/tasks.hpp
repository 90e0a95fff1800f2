#pragma once

// Task drivers behind the command-line subcommands. Every task returns a
// RunReport whose pass flag covers all the inequalities and identities it
// checks; library exceptions are caught and turned into pass = false.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dyson/report.hpp"

namespace dyson::tasks {

/// Independent generator for one consumer of a run seed.
std::mt19937_64 stream(std::uint64_t seed, int id);

struct I0Options {
  double tol = 1e-10;
};
RunReport i0(const I0Options& o);

struct MinimizeOptions {
  std::string method = "both";  // shooting | flow | both
  std::string dump_profile;     // CSV path with columns r, phi
};
RunReport minimize(const MinimizeOptions& o);

struct BogolubovOptions {
  int draws = 200;
  int cutoff = 128;  // largest per-mode cutoff reached by doubling from 16
  std::uint64_t seed = 7;
};
RunReport bogolubov(const BogolubovOptions& o);

struct LatticeOptions {
  int ensemble = 100;
  std::uint64_t seed = 7;
  std::string dump;  // CSV path with columns field, x, y, z, value
};
RunReport lattice_check(const LatticeOptions& o);

struct MatlocOptions {
  int n = 200;
  int band = 5;
  int window = 20;
  int trials = 100;
  std::uint64_t seed = 7;
};
RunReport matloc(const MatlocOptions& o);

struct SlidingOptions {
  double t = 0.2;
  double m = 0.0;
};
RunReport sliding_check(const SlidingOptions& o);

struct BumpsOptions {
  double t = 0.2;
  std::string dump;  // CSV path with columns x, theta1, Theta1, theta1_complement
};
RunReport bumps(const BumpsOptions& o);

struct FockOptions {
  int cutoff = 40;
  std::uint64_t seed = 7;
};
RunReport fock_check(const FockOptions& o);

struct FsOptions {
  std::vector<double> s{0.1, 0.04, 0.01};
};
RunReport fs_check(const FsOptions& o);

struct Criterion {
  int id = 0;
  std::string name;
  std::function<RunReport(std::uint64_t seed)> run;
  bool seeded = false;  // consumes the run seed
};

/// The twelve acceptance criteria in order. The last one re-runs the seeded
/// criteria and compares their serialized reports byte for byte.
const std::vector<Criterion>& acceptance_criteria();

/// Runs every criterion; `timing` adds wall_time to each nested report.
RunReport accept_all(std::uint64_t seed, bool timing = false);

}  // namespace dyson::tasks

#include "dyson/tasks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "dyson/bogolubov.hpp"
#include "dyson/errors.hpp"
#include "dyson/fockcheck.hpp"
#include "dyson/lattice.hpp"
#include "dyson/matloc.hpp"
#include "dyson/meanfield.hpp"
#include "dyson/potentials.hpp"
#include "dyson/scalars.hpp"

namespace dyson::tasks {

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
RunReport guarded(const std::string& task, std::uint64_t seed, F&& body) {
  RunReport r;
  r.task = task;
  r.seed = seed;
  r.pass = true;
  try {
    body(r);
  } catch (const std::exception& e) {
    r.require(false, std::string("error: ") + e.what());
  }
  return r;
}

std::ofstream open_dump(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open " + path + " for writing");
  out.precision(17);
  return out;
}

// ---------------------------------------------------------------------------
// Building blocks shared by the subcommands and the acceptance criteria.

void check_i0(RunReport& r, double tol, double tol_1d, double tol_radial) {
  const auto v = scalars::i0_all(tol);
  r.params["tol"] = tol;
  r.tolerances["quad_1d"] = tol_1d;
  r.tolerances["quad_radial"] = tol_radial;
  r.results["closed_form"] = v.closed_form;
  r.results["quad_1d"] = v.quad_1d;
  r.results["quad_radial"] = v.quad_radial;
  r.results["max_pairwise_diff"] = v.max_pairwise_diff();
  r.results["abs_error_estimate"] = v.abs_error_estimate;
  r.require(std::abs(v.closed_form - v.quad_1d) <= tol_1d, "1D quadrature disagrees with the closed form");
  r.require(std::abs(v.closed_form - v.quad_radial) <= tol_radial, "radial form disagrees with the closed form");
}

struct Variational {
  meanfield::RadialProfile phi;
  double a = 0.0;
};

Variational shooting_solution(RunReport& r) {
  const double i0 = scalars::i0_closed_form();
  Variational v;
  v.phi = meanfield::minimizer();
  v.a = -v.phi.energy;
  const double el = meanfield::el_residual(v.phi);
  const double virial = std::abs(2.0 * v.phi.kinetic - 0.75 * i0 * v.phi.potential);
  r.tolerances["el_residual_rel"] = 1e-6;
  r.tolerances["mass"] = 1e-8;
  r.tolerances["virial_rel"] = 1e-4;
  r.results["A"] = v.a;
  r.results["mu"] = v.phi.mu;
  r.results["T"] = v.phi.kinetic;
  r.results["P"] = v.phi.potential;
  r.results["mass"] = v.phi.mass;
  r.results["el_residual"] = el;
  r.results["virial_residual"] = virial / v.phi.kinetic;
  r.require(el <= 1e-6 * v.phi.max_value(), "Euler-Lagrange residual too large");
  r.require(std::abs(v.phi.mass - 1.0) <= 1e-8, "mass is not 1");
  r.require(virial <= 1e-4 * v.phi.kinetic, "virial identity violated");
  return v;
}

double flow_solution(RunReport& r) {
  const double i0 = scalars::i0_closed_form();
  const std::vector<std::size_t> sizes{33, 49, 65};
  const auto est = meanfield::flow_dyson_estimate(meanfield::default_flow_extent(i0), sizes, i0);
  r.results["flow_grid_sizes"] = est.grid_sizes;
  r.results["flow_energies"] = est.energies;
  r.results["flow_A"] = -est.extrapolated;
  return -est.extrapolated;
}

void write_profile(const meanfield::RadialProfile& p, const std::string& path) {
  auto out = open_dump(path);
  out << "r,phi\n";
  for (std::size_t i = 0; i < p.r_grid.size(); ++i) out << p.r_grid[i] << ',' << p.values[i] << '\n';
}

void check_bogolubov_draws(RunReport& r, std::mt19937_64& rng, int draws, int cap) {
  r.params["draws"] = draws;
  r.params["start_cutoff"] = 16;
  r.params["max_cutoff"] = cap;
  r.tolerances["bound"] = 1e-8;
  r.tolerances["completed_square"] = 1e-6;
  Json list = Json::array();
  int converged = 0, violations = 0, mismatches = 0;
  double worst_mismatch = 0.0;
  for (int i = 0; i < draws; ++i) {
    const auto p = bogolubov::random_params(rng);
    const double bound = bogolubov::bogolubov_bound(p);
    const auto e = bogolubov::exact_ground_energy_adaptive(p, 16, cap);
    const double formula = bogolubov::completed_square_energy(p);
    if (e.energy < bound - 1e-8) ++violations;
    if (e.converged) {
      ++converged;
      const double mis = std::abs(e.energy - formula);
      worst_mismatch = std::max(worst_mismatch, mis);
      if (mis > 1e-6) ++mismatches;
    }
    list.push_back({{"bound", bound}, {"exact", e.energy}, {"gap", e.energy - bound}, {"cutoff", e.cutoff},
                    {"converged", e.converged}});
  }
  r.results["converged"] = converged;
  r.results["bound_violations"] = violations;
  r.results["completed_square_mismatches"] = mismatches;
  r.results["max_completed_square_mismatch"] = worst_mismatch;
  r.results["draws"] = std::move(list);
  r.require(violations == 0, "exact energy below the bound");
  r.require(mismatches == 0, "exact energy differs from the completed square");
}

void check_bogolubov_canonical(RunReport& r) {
  // kappa = 0 with a spread of couplings; the bound is attained.
  const std::vector<std::array<double, 3>> cases{
      {1.0, 1.0, 1.0}, {2.0, 1.0, 3.0}, {5.0, 4.0, 4.0}, {3.0, 0.5, 0.1}, {10.0, 6.0, 2.0}, {0.7, 0.3, 0.3}};
  r.tolerances["canonical_gap"] = 1e-6;
  double worst = 0.0;
  int unconverged = 0;
  for (const auto& c : cases) {
    bogolubov::QuadraticModeParams p{c[0], c[1], c[2], {0.0, 0.0}};
    const auto e = bogolubov::exact_ground_energy_adaptive(p, 64, 256);
    if (!e.converged) ++unconverged;
    worst = std::max(worst, std::abs(e.energy - bogolubov::bogolubov_bound(p)));
  }
  r.results["canonical_cases"] = cases.size();
  r.results["canonical_max_gap"] = worst;
  r.require(unconverged == 0, "canonical case did not converge in the cutoff");
  r.require(worst <= 1e-6, "kappa = 0 energy differs from the bound");
}

void check_dirichlet_identity(RunReport& r, std::mt19937_64& rng, int fields, std::ofstream* dump) {
  r.tolerances["dirichlet_identity"] = 1e-10;
  r.results["pair_convention"] = "ordered";
  double worst = 0.0;
  for (int i = 0; i < fields; ++i) {
    const auto f = lattice::ensemble_field(rng, i);
    const double t = lattice::lattice_energy(f);
    const double d = lattice::dirichlet_energy(lattice::interpolate(f));
    worst = std::max(worst, std::abs(t - d) / std::max(1.0, t));
    if (dump) {
      for (int x = 0; x < f.dims[0]; ++x)
        for (int y = 0; y < f.dims[1]; ++y)
          for (int z = 0; z < f.dims[2]; ++z) {
            const std::array<int, 3> site{f.origin[0] + x, f.origin[1] + y, f.origin[2] + z};
            *dump << i << ',' << site[0] << ',' << site[1] << ',' << site[2] << ',' << f.at(site) << '\n';
          }
    }
  }
  r.results["dirichlet_fields"] = fields;
  r.results["dirichlet_max_rel_diff"] = worst;
  r.require(worst <= 1e-10, "Dirichlet energy differs from T(S)");
}

void check_jensen(RunReport& r, std::mt19937_64& rng, int draws) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 8);
  r.tolerances["inequality_slack"] = 1e-9;
  int violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  double needed = 0.0;
  for (int trial = 0; trial < draws; ++trial) {
    const int n = size(rng);
    std::vector<double> s(n), lam(n);
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      // Alternate bounded and heavy-tailed values.
      s[j] = trial % 2 ? std::abs(std::tan(3.0 * (u(rng) - 0.5))) : 5.0 * u(rng);
      lam[j] = u(rng);
      total += lam[j];
    }
    for (auto& l : lam) l /= total;
    const double beta = trial % 3 ? 2.5 : 6.0;
    const auto g = lattice::jensen_gap(s, lam, beta);
    const double scale = std::max(1.0, g.rhs);
    const double slack = std::min(g.mid - g.lhs, g.rhs - g.mid) / scale;
    worst = std::min(worst, slack);
    if (slack < -1e-9) ++violations;
    double pow_sum = 0.0;
    for (double v : s) pow_sum += std::pow(v, beta - 1.0);
    if (g.spread > 0.0 && pow_sum > 0.0) needed = std::max(needed, (g.mid - g.lhs) / (g.spread * pow_sum) / beta);
  }
  r.results["jensen_draws"] = draws;
  r.results["jensen_constant_over_beta"] = 2.0;
  r.results["jensen_needed_over_beta"] = needed;
  r.results["jensen_min_slack"] = worst;
  r.results["jensen_violations"] = violations;
  r.require(violations == 0, "Jensen-type bound violated");
}

void check_lp_bounds(RunReport& r, std::mt19937_64& rng, int fields) {
  const double c_sob = lattice::kSobolevCalibration;
  int violations = 0;
  double chain = 0.0, cs = 0.0, sob = 0.0;
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < fields; ++i) {
    const auto f = lattice::ensemble_field(rng, i);
    const auto six = lattice::lattice_lp_bounds(f, 6.0, 0.5, c_sob);
    for (double s : {six.upper_slack, six.chain_slack}) {
      worst = std::min(worst, s);
      if (s < -1e-9) ++violations;
    }
    chain = std::max(chain, six.chain_needed);
    for (double delta : {0.1, 0.5}) {
      const auto q = lattice::lattice_lp_bounds(f, 2.5, delta, c_sob);
      for (double s : {q.upper_slack, q.chain_slack, q.cs_slack, q.sob_slack}) {
        worst = std::min(worst, s);
        if (s < -1e-9) ++violations;
      }
      cs = std::max(cs, q.cs_needed);
      sob = std::max(sob, q.sob_needed);
    }
  }
  r.results["lp_fields"] = fields;
  r.results["chain_constant_beta6"] = lattice::lower_chain_constant(6.0);
  r.results["chain_needed_beta6"] = chain;
  r.results["five_halves_constant"] = lattice::five_halves_constant();
  r.results["five_halves_needed"] = cs;
  r.results["sobolev_form_constant"] = lattice::five_halves_sobolev_constant(c_sob);
  r.results["sobolev_form_needed"] = sob;
  r.results["lp_min_slack"] = worst;
  r.results["lp_violations"] = violations;
  r.require(violations == 0, "lattice L^p bound violated");
}

void check_sobolev(RunReport& r, std::uint64_t seed, int fields) {
  const double fixture = lattice::kSobolevCalibration;
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < fields; ++i) worst = std::max(worst, lattice::sobolev_ratio(lattice::ensemble_field(rng, i)));
  const auto other = lattice::calibrate_sobolev(fields, seed + 1);
  const double drift = std::abs(other.constant - fixture) / fixture;
  r.tolerances["reseed_drift"] = 0.1;
  r.results["calibration_constant"] = fixture;
  r.results["regression_fields"] = fields;
  r.results["regression_max_ratio"] = worst;
  r.results["reseeded_constant"] = other.constant;
  r.results["reseeded_ensemble_max"] = other.ensemble_max;
  r.results["reseed_drift"] = drift;
  r.require(worst <= fixture, "Sobolev ratio above the calibration constant");
  r.require(drift <= 0.1, "calibration moved by more than 10% under reseeding");
}

void check_matloc(RunReport& r, std::mt19937_64& rng, const MatlocOptions& o) {
  r.params["n"] = o.n;
  r.params["band"] = o.band;
  r.params["window"] = o.window;
  r.params["trials"] = o.trials;
  r.params["c_work"] = 10.0;
  int failures = 0;
  std::vector<double> slack;
  for (int trial = 0; trial < o.trials; ++trial) {
    const auto a = matloc::random_band_matrix(rng, o.n, o.band);
    const auto psi = matloc::random_unit_vector(rng, o.n);
    const auto rep = matloc::localize(a, psi, o.window);
    if (!rep.holds) ++failures;
    slack.push_back(rep.bound - rep.value);
  }
  std::sort(slack.begin(), slack.end());
  r.results["failures"] = failures;
  if (!slack.empty()) {
    r.results["min_slack"] = slack.front();
    r.results["median_slack"] = slack[slack.size() / 2];
  }
  r.results["taper_constant"] = matloc::taper_constant(o.window);
  r.require(failures == 0, "localization bound failed");

  // Diagonal matrix: all d_k with k >= 1 vanish, so the bound is lambda itself.
  Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(60, 60);
  for (int i = 0; i < 60; ++i) diag(i, i) = std::sin(0.3 * i);
  double diag_excess = -std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 10; ++trial) {
    const auto rep = matloc::localize(diag, matloc::random_unit_vector(rng, 60), 7);
    diag_excess = std::max({diag_excess, std::abs(rep.bound - rep.lambda), rep.value - rep.lambda});
  }
  r.results["diagonal_excess"] = diag_excess;
  r.require(diag_excess <= 1e-12, "diagonal matrix case not exact");

  // Support shorter than the window: the window holding it reproduces lambda.
  const auto a = matloc::random_band_matrix(rng, 50, 3);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(50);
  psi.segment(10, 8) = matloc::random_unit_vector(rng, 8);
  const double lambda = psi.dot(a * psi).real();
  const auto shortrep = matloc::localize(a, psi, 8, 10.0, false);
  const auto full = matloc::localize(a, psi, 50, 10.0, false);
  const double short_excess = std::max(shortrep.value - lambda, std::abs(full.value - lambda));
  r.results["short_support_excess"] = short_excess;
  r.require(short_excess <= 1e-12, "short-support case not exact");
}

void check_beta_identity(RunReport& r, std::mt19937_64& rng, int draws) {
  std::normal_distribution<double> n(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < draws; ++i) {
    const auto b = fockcheck::beta_vector_identity({n(rng), n(rng), n(rng)});
    worst = std::max(worst, std::abs(b.lhs - b.rhs) / std::max(1.0, b.rhs));
  }
  const auto e1 = fockcheck::beta_vector_identity({1.0, 0.0, 0.0});
  r.tolerances["beta_identity"] = 1e-12;
  r.results["beta_vectors"] = fockcheck::beta_vectors().size();
  r.results["beta_draws"] = draws;
  r.results["beta_max_diff"] = worst;
  r.results["beta_e1"] = {e1.lhs, e1.rhs};
  r.require(worst <= 1e-12, "20-vector identity violated");
  r.require(e1.lhs == 1.0, "20-vector identity wrong at e1");
}

void check_creation_gap(RunReport& r, const std::vector<int>& cutoffs) {
  r.tolerances["creation_gap"] = -1e-8;
  Json list = Json::array();
  for (int c : cutoffs) {
    const auto g = fockcheck::creation_difference_gap(c);
    list.push_back({{"cutoff", c}, {"max_total", g.max_total}, {"dimension", g.dimension},
                    {"min_eigenvalue", g.min_eigenvalue}});
    r.require(g.min_eigenvalue >= -1e-8, "creation-difference operator has a negative eigenvalue");
  }
  r.results["creation_gap"] = std::move(list);
}

void check_fs(RunReport& r, std::vector<double> ss) {
  if (ss.empty()) throw InvalidArgument("fs-check needs at least one s");
  std::sort(ss.begin(), ss.end(), std::greater<>());
  Json list = Json::array();
  double constant = 0.0;
  bool bounded = true;
  for (std::size_t i = 0; i < ss.size(); ++i) {
    const auto f = fockcheck::fs_convolution_sup(ss[i]);
    const double ratio = f.sup / std::sqrt(f.s);
    // The constant is fitted at the largest s and must cover the rest.
    if (i == 0) constant = ratio;
    bounded = bounded && ratio <= constant * (1.0 + 1e-12);
    list.push_back({{"s", f.s}, {"sup", f.sup}, {"p_at_sup", f.p_at_sup}, {"sup_over_sqrt_s", ratio},
                    {"sup_over_s", f.sup / f.s}, {"tail_bound", f.tail_bound}, {"grid_points", f.grid_points}});
  }
  r.params["s"] = ss;
  r.results["fs"] = std::move(list);
  r.results["fs_constant"] = constant;
  r.require(bounded, "sup / sqrt(s) not bounded by the constant fitted at the largest s");
}

void check_bump_family(RunReport& r, double t) {
  const auto b = potentials::build_bumps(t);
  const double pou = potentials::partition_of_unity_residual(b, 1000, 1);
  const double g_hi = std::pow(1.0 - 2.0 * t, -3.0);
  const double gt_lo = std::pow(1.0 + t, -3.0);
  const double gt_hi = std::pow(1.0 - t, -3.0);
  Json j{{"t", t},
         {"partition_residual", pou},
         {"gamma", b.gamma()},
         {"gamma_bracket", {1.0, g_hi}},
         {"gamma_tilde", b.gamma_tilde()},
         {"gamma_tilde_bracket", {gt_lo, gt_hi}}};
  r.results["bumps"].push_back(j);
  r.require(pou <= 1e-12, "partition of unity residual too large");
  r.require(b.gamma() >= 1.0 && b.gamma() <= g_hi, "gamma outside its bracket");
  r.require(b.gamma_tilde() >= gt_lo && b.gamma_tilde() <= gt_hi, "gamma tilde outside its bracket");
}

Json omega_json(const potentials::OmegaSearch& s) {
  return {{"t", s.t},
          {"m", s.m},
          {"omega", s.omega},
          {"min_weighted_transform", s.min_transform},
          {"k_at_min", s.k_at_min},
          {"previous_min", s.previous_min},
          {"f_zero", s.f_zero},
          {"tail_constant", s.tail_constant}};
}

// ---------------------------------------------------------------------------
// Acceptance criteria

RunReport ac_i0(std::uint64_t seed) {
  return guarded("ac1_i0_triple_agreement", seed, [&](RunReport& r) { check_i0(r, 1e-10, 1e-8, 1e-6); });
}

RunReport ac_error_law(std::uint64_t seed) {
  return guarded("ac2_i_of_a_error_law", seed, [&](RunReport& r) {
    const double i0 = scalars::i0_closed_form();
    const std::vector<double> as{1e-2, 1e-3, 1e-4};
    std::vector<double> ratios;
    double log_sum = 0.0;
    for (double a : as) {
      ratios.push_back((scalars::i_of_a(a) - i0) / std::sqrt(a));
      log_sum += std::log(ratios.back());
    }
    // Least-squares fit of a single constant in log space.
    const double c = std::exp(log_sum / static_cast<double>(as.size()));
    bool within = true;
    for (double q : ratios) within = within && q <= 2.0 * c && q >= 0.5 * c;
    r.params["a"] = as;
    r.tolerances["factor"] = 2.0;
    r.results["ratios"] = ratios;
    r.results["fitted_constant"] = c;
    r.require(within, "(I(a) - I0)/sqrt(a) not within a factor 2 of one constant");
  });
}

RunReport ac_variational(std::uint64_t seed) {
  return guarded("ac3_variational_solution", seed, [&](RunReport& r) {
    const auto v = shooting_solution(r);
    const double flow_a = flow_solution(r);
    const double flow_rel = std::abs(flow_a - v.a) / v.a;
    meanfield::ShootingConfig coarse;
    coarse.step = 2e-3;
    const double doubled = std::abs(meanfield::dyson_constant(coarse) - v.a) / v.a;
    r.tolerances["flow_rel"] = 1e-3;
    r.tolerances["grid_doubling_rel"] = 1e-4;
    r.results["flow_rel_diff"] = flow_rel;
    r.results["grid_doubling_shift"] = doubled;
    r.require(flow_rel <= 1e-3, "gradient flow disagrees with shooting");
    r.require(doubled <= 1e-4, "A moves under grid doubling");
  });
}

RunReport ac_scaling(std::uint64_t seed) {
  return guarded("ac4_scaling_identity", seed, [&](RunReport& r) {
    const double i0 = scalars::i0_closed_form();
    const auto phi = meanfield::minimizer();
    r.tolerances["relative"] = 1e-6;
    for (int n : {8, 32}) {
      const auto c = meanfield::dyson_energy(n, phi, i0);
      r.results["checks"].push_back(
          {{"N", n}, {"energy", c.energy}, {"quadrature", c.quadrature_lhs}, {"relative_error", c.relative_error}});
      r.require(c.relative_error <= 1e-6, "scaling identity off at N = " + std::to_string(n));
    }
  });
}

RunReport ac_bogolubov(std::uint64_t seed) {
  return guarded("ac5_bogolubov", seed, [&](RunReport& r) {
    auto rng = stream(seed, 5);
    check_bogolubov_draws(r, rng, 200, 128);
    check_bogolubov_canonical(r);
  });
}

RunReport ac_lattice_identity(std::uint64_t seed) {
  return guarded("ac6_lattice_identity", seed, [&](RunReport& r) {
    auto rng = stream(seed, 6);
    check_dirichlet_identity(r, rng, 100, nullptr);
  });
}

RunReport ac_inequalities(std::uint64_t seed) {
  return guarded("ac7_inequality_ensembles", seed, [&](RunReport& r) {
    auto rng = stream(seed, 7);
    check_jensen(r, rng, 10000);
    check_lp_bounds(r, rng, 100);
  });
}

RunReport ac_sobolev(std::uint64_t seed) {
  return guarded("ac8_discrete_sobolev", seed, [&](RunReport& r) { check_sobolev(r, seed, 1000); });
}

RunReport ac_matloc(std::uint64_t seed) {
  return guarded("ac9_matrix_localization", seed, [&](RunReport& r) {
    auto rng = stream(seed, 9);
    check_matloc(r, rng, MatlocOptions{});
  });
}

RunReport ac_appendix(std::uint64_t seed) {
  return guarded("ac10_fock_checks", seed, [&](RunReport& r) {
    auto rng = stream(seed, 10);
    check_beta_identity(r, rng, 100);
    check_creation_gap(r, {20, 40});
    check_fs(r, {0.1, 0.04, 0.01});
  });
}

RunReport ac_constructions(std::uint64_t seed) {
  return guarded("ac11_constructions", seed, [&](RunReport& r) {
    for (double t : {0.1, 0.2, 0.4}) check_bump_family(r, t);
    const std::vector<double> ts{0.1, 0.15, 0.2, 0.3, 0.4};
    r.tolerances["positivity"] = -1e-6;
    r.tolerances["exponent_range"] = {-6.0, -3.0};
    for (double t : ts) {
      const auto s = potentials::omega_search(potentials::build_bumps(t));
      r.results["omega"].push_back(omega_json(s));
      r.require(s.min_transform >= -1e-6, "sliding transform negative at the returned omega");
    }
    const auto fit = potentials::fit_omega_exponent(ts);
    r.results["exponent"] = fit.slope;
    r.results["exponent_intercept"] = fit.intercept;
    r.require(fit.slope >= -6.0 && fit.slope <= -3.0, "fitted omega(t) exponent outside [-6, -3]");
  });
}

std::vector<Criterion> make_criteria();

// Re-runs the seeded criteria and compares serialized reports with `first`,
// or with a second run for criteria missing from it. The unseeded criteria
// are pure functions of fixed inputs.
RunReport determinism(std::uint64_t seed, const std::map<int, std::string>& first) {
  return guarded("ac12_determinism", seed, [&](RunReport& r) {
    Json reruns = Json::array();
    for (const auto& c : make_criteria()) {
      if (!c.seeded) continue;
      const auto it = first.find(c.id);
      const std::string before = it != first.end() ? it->second : c.run(seed).dump();
      const bool same = before == c.run(seed).dump();
      reruns.push_back({{"criterion", c.id}, {"identical", same}});
      r.require(same, "criterion " + std::to_string(c.id) + " is not reproducible");
    }
    r.results["reruns"] = std::move(reruns);
  });
}

RunReport ac_determinism(std::uint64_t seed) { return determinism(seed, {}); }

std::vector<Criterion> make_criteria() {
  return {
      {1, "I0 triple agreement", ac_i0, false},
      {2, "I(a) error law", ac_error_law, false},
      {3, "variational solution", ac_variational, false},
      {4, "scaling identity", ac_scaling, false},
      {5, "Bogolubov bound and exact energies", ac_bogolubov, true},
      {6, "lattice Dirichlet identity", ac_lattice_identity, true},
      {7, "lattice inequality ensembles", ac_inequalities, true},
      {8, "discrete Sobolev calibration", ac_sobolev, true},
      {9, "matrix localization", ac_matloc, true},
      {10, "Fock space and convolution checks", ac_appendix, true},
      {11, "bump and sliding constructions", ac_constructions, false},
      {12, "determinism", ac_determinism, false},
  };
}

}  // namespace

std::mt19937_64 stream(std::uint64_t seed, int id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id)};
  return std::mt19937_64(seq);
}

RunReport i0(const I0Options& o) {
  return guarded("i0", 0, [&](RunReport& r) {
    check_i0(r, o.tol, 1e-8, 1e-6);
    const double pairwise = r.results["max_pairwise_diff"].get<double>();
    r.tolerances["max_pairwise_diff"] = 1e-8;
    r.require(pairwise < 1e-8, "pairwise disagreement too large");
  });
}

RunReport minimize(const MinimizeOptions& o) {
  return guarded("minimize", 0, [&](RunReport& r) {
    if (o.method != "shooting" && o.method != "flow" && o.method != "both")
      throw InvalidArgument("unknown method " + o.method);
    r.params["method"] = o.method;
    if (o.method == "flow") {
      flow_solution(r);
      return;
    }
    const auto v = shooting_solution(r);
    if (!o.dump_profile.empty()) write_profile(v.phi, o.dump_profile);
    if (o.method == "both") {
      const double rel = std::abs(flow_solution(r) - v.a) / v.a;
      r.tolerances["flow_rel"] = 1e-3;
      r.results["flow_rel_diff"] = rel;
      r.require(rel <= 1e-3, "gradient flow disagrees with shooting");
    }
  });
}

RunReport bogolubov(const BogolubovOptions& o) {
  return guarded("bogolubov", o.seed, [&](RunReport& r) {
    if (o.draws < 0 || o.cutoff < 16) throw InvalidArgument("need draws >= 0 and cutoff >= 16");
    auto rng = stream(o.seed, 5);
    check_bogolubov_draws(r, rng, o.draws, o.cutoff);
    check_bogolubov_canonical(r);
  });
}

RunReport lattice_check(const LatticeOptions& o) {
  return guarded("lattice-check", o.seed, [&](RunReport& r) {
    if (o.ensemble < 1) throw InvalidArgument("ensemble must be positive");
    r.params["ensemble"] = o.ensemble;
    std::optional<std::ofstream> dump;
    if (!o.dump.empty()) {
      dump = open_dump(o.dump);
      *dump << "field,x,y,z,value\n";
    }
    auto rng = stream(o.seed, 6);
    check_dirichlet_identity(r, rng, o.ensemble, dump ? &*dump : nullptr);
    auto rng7 = stream(o.seed, 7);
    check_jensen(r, rng7, 100 * o.ensemble);
    check_lp_bounds(r, rng7, o.ensemble);
    const auto eq = lattice::nearest_neighbor_equivalence();
    r.results["nn_equivalence"] = {eq.c_lo, eq.c_hi};
    r.results["corner_spread_constant"] = lattice::corner_spread_constant();
  });
}

RunReport matloc(const MatlocOptions& o) {
  return guarded("matloc", o.seed, [&](RunReport& r) {
    if (o.window < 1 || o.window > o.n || o.band < 0 || o.trials < 0)
      throw InvalidArgument("need 1 <= window <= n, band >= 0, trials >= 0");
    auto rng = stream(o.seed, 9);
    check_matloc(r, rng, o);
  });
}

RunReport sliding_check(const SlidingOptions& o) {
  return guarded("sliding-check", 0, [&](RunReport& r) {
    r.params["t"] = o.t;
    r.params["m"] = o.m;
    r.tolerances["positivity"] = -1e-6;
    const auto s = potentials::omega_search(potentials::build_bumps(o.t), o.m);
    r.results = omega_json(s);
    r.require(s.min_transform >= -1e-6, "sliding transform negative");
  });
}

RunReport bumps(const BumpsOptions& o) {
  return guarded("bumps", 0, [&](RunReport& r) {
    r.params["t"] = o.t;
    r.tolerances["partition_residual"] = 1e-12;
    check_bump_family(r, o.t);
    r.results["derivative_constant"] = potentials::BumpFamily::derivative_constant();
    if (!o.dump.empty()) {
      const auto b = potentials::build_bumps(o.t);
      auto out = open_dump(o.dump);
      out << "x,theta1,Theta1,theta1_complement\n";
      for (int i = 0; i <= 1000; ++i) {
        const double x = -0.5 * (1.0 + o.t) + (1.0 + o.t) * i / 1000.0;
        out << x << ',' << b.theta1(x) << ',' << b.Theta1(x) << ',' << b.theta1_complement(x) << '\n';
      }
    }
  });
}

RunReport fock_check(const FockOptions& o) {
  return guarded("fock-check", o.seed, [&](RunReport& r) {
    r.params["cutoff"] = o.cutoff;
    check_creation_gap(r, {o.cutoff});
    auto rng = stream(o.seed, 10);
    check_beta_identity(r, rng, 100);
    const double ell = 1.0;
    const double gap = kPi * kPi / (ell * ell);
    double worst_norm = 0.0, worst_rayleigh = 0.0, min_excited = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c) {
          const auto m = fockcheck::neumann_mode_check({a, b, c}, ell);
          worst_norm = std::max(worst_norm, std::abs(m.norm - 1.0));
          worst_rayleigh = std::max(worst_rayleigh, std::abs(m.rayleigh - m.eigenvalue) / std::max(1.0, m.eigenvalue));
          if (a + b + c > 0) min_excited = std::min(min_excited, m.rayleigh);
        }
    const double orth = fockcheck::neumann_orthogonality_defect(3, ell);
    r.tolerances["neumann"] = 1e-10;
    r.results["neumann_norm_defect"] = worst_norm;
    r.results["neumann_rayleigh_defect"] = worst_rayleigh;
    r.results["neumann_orthogonality_defect"] = orth;
    r.results["neumann_min_excited_over_gap"] = min_excited / gap;
    r.require(worst_norm <= 1e-10 && worst_rayleigh <= 1e-10 && orth <= 1e-10, "Neumann mode check failed");
    r.require(min_excited >= gap * (1.0 - 1e-10), "spectral gap violated");
  });
}

RunReport fs_check(const FsOptions& o) {
  return guarded("fs-check", 0, [&](RunReport& r) { check_fs(r, o.s); });
}

const std::vector<Criterion>& acceptance_criteria() {
  static const std::vector<Criterion> all = make_criteria();
  return all;
}

RunReport accept_all(std::uint64_t seed, bool timing) {
  return guarded("accept-all", seed, [&](RunReport& r) {
    Json list = Json::array();
    int passed = 0;
    std::map<int, std::string> dumps;
    for (const auto& c : acceptance_criteria()) {
      const auto start = std::chrono::steady_clock::now();
      RunReport sub = c.id == 12 ? determinism(seed, dumps) : c.run(seed);
      if (c.seeded) dumps[c.id] = sub.dump();
      if (timing) sub.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      Json j = sub.to_json();
      j.erase("schema");
      j["id"] = c.id;
      j["name"] = c.name;
      list.push_back(std::move(j));
      if (sub.pass) ++passed;
      r.require(sub.pass, "criterion " + std::to_string(c.id) + " failed");
    }
    r.results["passed"] = passed;
    r.results["total"] = acceptance_criteria().size();
    r.results["criteria"] = std::move(list);
  });
}

}  // namespace dyson::tasks

#include "doctest.h"

#include <cmath>
#include <numbers>

#include "dyson/errors.hpp"
#include "dyson/meanfield.hpp"
#include "dyson/scalars.hpp"
#include "fixtures.hpp"

using namespace dyson;
using namespace dyson::meanfield;

namespace {

const NormalizedSolution& normalized() {
  static const NormalizedSolution s = solve_normalized();
  return s;
}

const RadialProfile& phi() {
  static const RadialProfile p = rescale_to_unit_mass(normalized().profile, fixtures::kI0);
  return p;
}

}  // namespace

TEST_CASE("el_residual: zero profile and coarse grids") {
  RadialProfile zero;
  for (int i = 0; i < 101; ++i) {
    zero.r_grid.push_back(0.1 * i);
    zero.values.push_back(0.0);
    zero.derivatives.push_back(0.0);
  }
  zero.mu = 3.7;
  CHECK(el_residual(zero) == 0.0);

  RadialProfile coarse = zero;
  coarse.r_grid.resize(63);
  coarse.values.resize(63);
  coarse.derivatives.resize(63);
  CHECK_THROWS_AS(el_residual(coarse), GridTooCoarse);
}

TEST_CASE("shooting bracket and normalized solution") {
  const auto& s = normalized();
  CHECK(shoot(s.bracket_lo) == ShotOutcome::Undershoot);
  CHECK(shoot(s.bracket_hi) == ShotOutcome::Overshoot);
  CHECK(s.bracket_hi - s.bracket_lo <= 1e-14 * s.psi0);
  CHECK(el_residual(s.profile) <= 1e-6);

  // Positive and strictly decreasing all the way out.
  const auto& v = s.profile.values;
  for (std::size_t i = 1; i < v.size(); ++i) {
    CHECK_MESSAGE(v[i] > 0.0, "node " << i);
    if (v[i] >= v[i - 1]) FAIL("not decreasing at node " << i);
  }
}

TEST_CASE("bad bracket is reported") {
  ShootingConfig cfg;
  cfg.psi0_lo = 5.0;  // already overshoots
  cfg.psi0_hi = 10.0;
  CHECK_THROWS_AS(solve_normalized(cfg), BracketNotFound);
}

TEST_CASE("rescaling to unit mass") {
  const auto& p = phi();
  CHECK(p.mu > 0.0);
  CHECK(std::abs(p.mass - 1.0) < 1e-8);
  CHECK(el_residual(p) <= 1e-5);
  CHECK(el_residual(p) <= 1e-6 * p.max_value());
  CHECK(p.energy == doctest::Approx(p.kinetic - fixtures::kI0 * p.potential).epsilon(1e-15));

  // Mis-set multiplier: the mu*Phi term dominates the residual.
  RadialProfile shifted = p;
  shifted.mu += 0.1;
  CHECK(el_residual(shifted) >= 0.09 * p.max_value());
}

TEST_CASE("virial identities and dilation stationarity") {
  const auto& p = phi();
  const double i0 = fixtures::kI0;
  CHECK(std::abs(2.0 * p.kinetic - 0.75 * i0 * p.potential) <= 1e-4 * p.kinetic);
  CHECK(std::abs(p.energy + 5.0 / 3.0 * p.kinetic) <= 1e-4 * p.kinetic);

  const double e0 = dilated_energy(p, 1.0, i0);
  CHECK(e0 == doctest::Approx(p.energy).epsilon(1e-13));
  CHECK(dilated_energy(p, 1.0 + 1e-3, i0) > e0);
  CHECK(dilated_energy(p, 1.0 - 1e-3, i0) > e0);

  // The mass constraint binds: scaling Phi -> c Phi lowers the energy for c > 1.
  CHECK(2.0 * p.kinetic - 2.5 * i0 * p.potential < 0.0);
}

TEST_CASE("dyson constant") {
  const double a = dyson_constant();
  CHECK(a > 0.0);
  CHECK(a == doctest::Approx(-phi().energy).epsilon(1e-14));

  ShootingConfig coarse;
  coarse.step = 2e-3;
  CHECK(std::abs(dyson_constant(coarse) - a) <= 1e-4 * a);
}

TEST_CASE("dyson energy and the N^{7/5} scaling identity") {
  const double a = -phi().energy;
  CHECK(dyson_energy(1, phi(), fixtures::kI0).energy == doctest::Approx(-a).epsilon(1e-15));
  for (int n : {8, 32}) {
    const auto check = dyson_energy(n, phi(), fixtures::kI0);
    CHECK(check.energy == doctest::Approx(-a * std::pow(n, 1.4)).epsilon(1e-13));
    CHECK(check.relative_error <= 1e-6);
  }
  CHECK(dyson_energy(64, phi(), fixtures::kI0).energy / dyson_energy(32, phi(), fixtures::kI0).energy ==
        doctest::Approx(std::pow(2.0, 1.4)).epsilon(1e-14));
  CHECK_THROWS_AS(dyson_energy(0), InvalidArgument);
}

TEST_CASE("radial quadrature reproduces closed-form Gaussian integrals") {
  const double width = 1.0;
  RadialProfile g;
  const double amp = std::pow(2.0 * std::numbers::pi * width * width, -0.75);
  for (int i = 0; i <= 20000; ++i) {
    const double r = 1e-3 * i;
    g.r_grid.push_back(r);
    g.values.push_back(amp * std::exp(-r * r / 4.0));
    g.derivatives.push_back(-0.5 * r * amp * std::exp(-r * r / 4.0));
  }
  update_integrals(g, fixtures::kI0);
  const auto exact = gaussian_energy(width, fixtures::kI0);
  CHECK(g.mass == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(g.kinetic - exact.kinetic) <= 1e-6);
  CHECK(std::abs(g.potential - exact.potential) <= 1e-6);
  CHECK(std::abs(g.energy - exact.energy) <= 1e-6);
}

TEST_CASE("gradient flow descends from a Gaussian") {
  const double i0 = fixtures::kI0;
  const double extent = default_flow_extent(i0);
  const double sigma = gaussian_trial_width(i0);
  auto start = sample_radial(extent, 33, [sigma](double r) { return std::exp(-r * r / (4.0 * sigma * sigma)); });
  FlowOptions opts;
  opts.max_steps = 100;
  opts.energy_tol = 0.0;
  const auto res = gradient_flow_minimize(start, i0, opts);
  REQUIRE(res.energy_trace.size() == 100);
  for (std::size_t i = 1; i < res.energy_trace.size(); ++i) CHECK(res.energy_trace[i] < res.energy_trace[i - 1]);
  CHECK(grid_mass(res.field) == doctest::Approx(1.0).epsilon(1e-12));
  for (double v : res.field.values) CHECK(v >= 0.0);
}

TEST_CASE("discrete energy is invariant under zero-padded grid shifts") {
  GridField3D f;
  f.extent = 5.0;
  f.n = 21;
  f.values.assign(f.n * f.n * f.n, 0.0);
  // Lumpy support well inside the box.
  for (std::size_t i = 6; i < 12; ++i)
    for (std::size_t j = 5; j < 11; ++j)
      for (std::size_t k = 7; k < 12; ++k) f.values[f.index(i, j, k)] = 1.0 + std::sin(1.0 * i + 2.0 * j * k);
  GridField3D g = f;
  std::fill(g.values.begin(), g.values.end(), 0.0);
  for (std::size_t i = 0; i + 3 < f.n; ++i)
    for (std::size_t j = 2; j < f.n; ++j)
      for (std::size_t k = 0; k + 1 < f.n; ++k) g.values[g.index(i + 3, j - 2, k + 1)] = f.values[f.index(i, j, k)];
  const auto ef = grid_energy(f, fixtures::kI0);
  const auto eg = grid_energy(g, fixtures::kI0);
  CHECK(ef.kinetic == eg.kinetic);
  CHECK(ef.potential == eg.potential);
  CHECK(grid_mass(f) == grid_mass(g));
}

TEST_CASE("gradient flow agrees with shooting") {
  const double i0 = fixtures::kI0;
  const auto est = flow_dyson_estimate(default_flow_extent(i0), {33, 49, 65}, i0);
  const double a = -phi().energy;
  CHECK(std::abs(-est.extrapolated - a) <= 1e-3 * a);
  // Discrete energies approach from below as the grid refines.
  CHECK(est.energies[0] < est.energies[1]);
  CHECK(est.energies[1] < est.energies[2]);
}

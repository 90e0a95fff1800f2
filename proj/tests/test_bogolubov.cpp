#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "dyson/bogolubov.hpp"
#include "dyson/errors.hpp"
#include "dyson/quadrature.hpp"
#include "fixtures.hpp"

using namespace dyson::bogolubov;

namespace {
constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("bound: closed-form cases") {
  CHECK(bogolubov_bound({1.0, 0.0, 0.0, {0.0, 0.0}}) == 0.0);
  CHECK(bogolubov_bound({1e-14, 1.0, 1.0, {0.0, 0.0}}) == doctest::Approx(-2.0).epsilon(1e-6));
  const double base = bogolubov_bound({3.0, 2.0, 2.0, {0.0, 0.0}});
  CHECK(base == doctest::Approx(-7.0 + std::sqrt(33.0)).epsilon(1e-14));
  CHECK(base == doctest::Approx(-1.255437).epsilon(1e-6));
  CHECK(bogolubov_bound({3.0, 2.0, 2.0, {2.0, 0.0}}) == doctest::Approx(base - 4.0).epsilon(1e-14));
  CHECK_THROWS_AS(bogolubov_bound({0.0, 1.0, 1.0, {0.0, 0.0}}), dyson::InvalidArgument);
}

TEST_CASE("bound is nonincreasing in B at fixed A and kappa") {
  for (double a : {0.1, 1.0, 5.0}) {
    double prev = bogolubov_bound({a, 0.0, 0.0, {0.5, 0.0}});
    for (double b = 0.1; b < 20.0; b += 0.1) {
      const double cur = bogolubov_bound({a, b / 2.0, b / 2.0, {0.5, 0.0}});
      CHECK(cur <= prev);
      prev = cur;
    }
  }
}

TEST_CASE("bracket is nondecreasing in g and lies in [0, g]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double f = std::exp(10.0 * (u(rng) - 0.5));
    const double g1 = std::exp(10.0 * (u(rng) - 0.5));
    const double g2 = g1 * (1.0 + u(rng));
    CHECK(bracket(g2, f) >= bracket(g1, f));
    CHECK(bracket(g1, f) >= 0.0);
    CHECK(bracket(g1, f) <= g1 * (1.0 + 1e-15));
  }
  CHECK(bracket(2.0, 0.0) == 2.0);
}

TEST_CASE("canonical two-mode ground energy at kappa = 0 is the bound") {
  const QuadraticModeParams p{3.0, 2.0, 2.0, {0.0, 0.0}};
  const double e = exact_ground_energy_canonical(p, {2, 60});
  CHECK(std::abs(e - (-7.0 + std::sqrt(33.0))) < 1e-6);
}

TEST_CASE("kappa != 0 matches the completed square and the phase is irrelevant") {
  for (double phase : {0.0, 0.7, 2.5}) {
    const QuadraticModeParams p{3.0, 1.5, 2.5, std::polar(1.2, phase)};
    const double e = exact_ground_energy_canonical(p, {2, 60});
    CHECK(std::abs(e - completed_square_energy(p)) < 1e-6);
    CHECK(e >= bogolubov_bound(p) - 1e-8);
  }
}

TEST_CASE("truncation that is too small is reported") {
  // Strong squeezing with A -> 0 needs far more than 8 quanta per mode.
  CHECK_THROWS_AS(exact_ground_energy_canonical({0.01, 5.0, 5.0, {2.0, 0.0}}, {2, 8}), dyson::TruncationUnconverged);
  CHECK_THROWS_AS(exact_ground_energy_canonical({1.0, 1.0, 1.0, {0.0, 0.0}}, {2, 3}), dyson::InvalidArgument);
}

TEST_CASE("random draws: exact energy never falls below the bound") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 30; ++i) {
    const auto p = random_params(rng);
    const auto e = exact_ground_energy_adaptive(p, 16, 64);
    CHECK(e.energy >= bogolubov_bound(p) - 1e-8);
    if (e.converged) CHECK(std::abs(e.energy - completed_square_energy(p)) < 1e-6);
  }
}

TEST_CASE("foldy energy density power law") {
  CHECK(foldy_energy_density(1.0, 1.0) == doctest::Approx(-fixtures::kI0).epsilon(1e-15));
  CHECK(foldy_energy_density(16.0, 2.0) / foldy_energy_density(1.0, 2.0) == doctest::Approx(32.0).epsilon(1e-14));
  CHECK(foldy_energy_density(1.0, 2.0) == doctest::Approx(-8.0 * fixtures::kI0).epsilon(1e-15));
}

TEST_CASE("lattice mode sum approaches the integral like (rho ell^4)^(-1/4)") {
  // Scaled error measured at 1e4, 1e5, 1e6: 2.439, 2.460, 2.467.
  double prev_err = 1.0;
  for (double x : {1e4, 1e5, 1e6}) {
    const auto r = foldy_lattice_sum(x, 1.0);
    CHECK(r.lattice_sum > r.integral);  // the missing k = 0 mode and coarse low-k sampling both raise the sum
    CHECK(r.relative_error < prev_err);
    CHECK(r.relative_error * std::pow(x, 0.25) == doctest::Approx(2.45).epsilon(0.02));
    prev_err = r.relative_error;
  }
  // Box size and density enter only through rho ell^4.
  const auto a = foldy_lattice_sum(1e4, 1.0);
  const auto b = foldy_lattice_sum(1e4 / 16.0, 2.0);
  CHECK(a.relative_error == doctest::Approx(b.relative_error).epsilon(1e-9));
}

TEST_CASE("screened transform of the cutoff pair") {
  const CutoffPair cut{0.5, 3.0};
  CHECK(v_rr_hat(0.0, cut) == doctest::Approx(4.0 * kPi * (9.0 - 0.25)));
  CHECK(v_rr_hat(2.0, {1.0, 1.0}) == 0.0);
  CHECK_THROWS_AS(v_rr_hat(1.0, {2.0, 1.0}), dyson::InvalidArgument);
}

TEST_CASE("hq density: trivial limits") {
  const CutoffPair equal{1.0, 1.0};
  CHECK(hq_scalar_bound({0.3, 0.1, 0.2}, 10.0, 2.0, equal, 0.5, 0.2) == 0.0);
  const CutoffPair cut{0.1, 4.0};
  for (double k : {0.0, 0.1, 1.0, 10.0}) {
    const double g = 10.0 * v_rr_hat(k, cut);
    CHECK(hq_scalar_bound({k, 0.0, 0.0}, 10.0, 2.0, cut, 0.5, 0.2) >= -0.5 * std::pow(2.0 * kPi, -3) * g);
  }
}

TEST_CASE("hq density with the Coulomb transform integrates to the Foldy law") {
  for (auto [nu, ell, gamma] : {std::tuple{1.0, 1.0, 1.0}, std::tuple{50.0, 2.0, 0.3}, std::tuple{1e3, 0.5, 4.0}}) {
    auto integrand = [&](double k) {
      if (k == 0.0) return 0.0;
      const double g = 4.0 * kPi * nu / (k * k);
      const double f = 0.5 * ell * ell * ell * gamma * k * k;
      return 4.0 * kPi * k * k * hq_density(g, f);
    };
    const double expected = -fixtures::kI0 * std::pow(nu, 1.25) * std::pow(ell, -0.75) * std::pow(gamma, -0.25);
    const double got = dyson::quad::adaptive_semi_infinite(integrand, 0.0, 1e-11 * std::abs(expected)).value;
    CHECK(got == doctest::Approx(expected).epsilon(1e-8));
  }
}

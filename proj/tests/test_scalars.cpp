#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "dyson/scalars.hpp"
#include "fixtures.hpp"

using namespace dyson::scalars;

TEST_CASE("closed form matches the frozen high-precision value") {
  CHECK(std::abs(i0_closed_form() - fixtures::kI0) < 1e-14);
  CHECK(i0_closed_form() > 0.0);
}

TEST_CASE("one-dimensional quadrature reproduces the closed form") {
  CHECK(std::abs(i0_quad_1d(1e-10) - fixtures::kI0) < 1e-8);
}

TEST_CASE("radial form at a = 0 reproduces the closed form") {
  CHECK(std::abs(i_of_a(0.0) - fixtures::kI0) < 1e-6);
  CHECK(std::abs(i_of_a(0.0) - fixtures::kI0) < 1e-10);
}

TEST_CASE("foldy integrand: value at 0 and 1/(2x^4) tail") {
  CHECK(foldy_integrand(0.0) == 1.0);
  for (double x : {1e2, 1e3, 1e5}) {
    CHECK(foldy_integrand(x) * 2.0 * std::pow(x, 4) == doctest::Approx(1.0).epsilon(1.0 / (x * x)));
  }
  // Compare against the naive form where it is still well conditioned.
  for (double x : {0.1, 0.5, 1.0, 2.0}) {
    const double naive = 1.0 + std::pow(x, 4) - x * x * std::sqrt(std::pow(x, 4) + 2.0);
    CHECK(foldy_integrand(x) == doctest::Approx(naive).epsilon(1e-12));
  }
}

TEST_CASE("I(a) is nondecreasing in a and bounded below by I0") {
  std::vector<double> as = {0.0, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0};
  double prev = i_of_a(as[0]);
  for (std::size_t i = 1; i < as.size(); ++i) {
    const double cur = i_of_a(as[i]);
    CHECK(cur >= prev - 1e-12);
    CHECK(cur >= fixtures::kI0 - 1e-12);
    prev = cur;
  }
  CHECK(i_of_a(1e-2) >= i_of_a(1e-3));
}

TEST_CASE("I(a) - I0 obeys the C sqrt(a) upper bound") {
  // C fitted at the largest a must dominate at every smaller a.
  const double c = (i_of_a(1e-2) - fixtures::kI0) / std::sqrt(1e-2);
  for (double a : {1e-3, 1e-4, 1e-5}) {
    CHECK(i_of_a(a) - fixtures::kI0 <= c * std::sqrt(a));
  }
}

TEST_CASE("I-integrand is nonnegative and bounded by g") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> logk(-4.0, 4.0), loga(-8.0, 2.0);
  for (int i = 0; i < 2000; ++i) {
    const double k = std::pow(10.0, logk(rng));
    const double a = std::pow(10.0, loga(rng));
    const double v = i_integrand(k, a);
    CHECK(v >= 0.0);
    CHECK(v <= 4.0 * M_PI / (k * k) * (1.0 + 1e-14));
  }
}

TEST_CASE("i0_all pairwise agreement") {
  const auto r = i0_all(1e-10);
  CHECK(r.max_pairwise_diff() < 1e-8);
  CHECK(std::abs(r.quad_1d - r.closed_form) <= r.abs_error_estimate);
}

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "dyson/errors.hpp"
#include "dyson/potentials.hpp"

using namespace dyson::potentials;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("yukawa values and transform") {
  CHECK(yukawa({1.0, 0.0, 0.0}, 0.0) == 1.0);
  CHECK(yukawa({0.0, 2.0, 0.0}, 1.0) == doctest::Approx(std::exp(-2.0) / 2.0).epsilon(1e-15));
  CHECK_THROWS_AS(yukawa({0.0, 0.0, 0.0}, 1.0), dyson::SingularPoint);
  for (double m : {0.5, 1.0, 2.0})
    for (double k : {0.1, 1.0, 3.0, 10.0})
      CHECK(std::abs(yukawa_hat_numeric(k, m) - yukawa_hat(k, m)) <= 1e-6 * yukawa_hat(k, m));
}

TEST_CASE("cutoff potential") {
  const CutoffPair same{0.7, 0.7};
  for (double k : {0.0, 0.5, 4.0}) CHECK(v_rr_hat(k, same) == 0.0);
  const CutoffPair cut{0.2, 1.5};
  CHECK(v_rr_hat(0.0, cut) == doctest::Approx(4.0 * kPi * (1.5 * 1.5 - 0.2 * 0.2)));
  CHECK(v_rr_integral(cut) == doctest::Approx(v_rr_hat(0.0, cut)));
  CHECK(v_rr(0.0, cut) == doctest::Approx(1.0 / 0.2 - 1.0 / 1.5));
  CHECK(v_rr(1e-7, cut) == doctest::Approx(v_rr(0.0, cut)).epsilon(1e-5));
  double prev = v_rr_hat(0.0, cut);
  for (double k = 0.01; k < 100.0; k *= 1.1) {
    const double v = v_rr_hat(k, cut);
    CHECK(v >= 0.0);
    CHECK(v <= 4.0 * kPi * cut.R * cut.R);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("ramp: endpoints, complementarity, flatness") {
  CHECK(ramp(0.0) == 0.0);
  CHECK(ramp(1.0) == 1.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    CHECK(std::abs(ramp(x) * ramp(x) + ramp(1.0 - x) * ramp(1.0 - x) - 1.0) < 1e-14);
  }
  // Derivatives up to third order vanish at both ends, s^(n)(u) = O(u^(4-n)).
  for (int order = 1; order <= 3; ++order) {
    const double u0 = 1e-4;
    CHECK(std::abs(ramp_derivative(u0, order)) < 2000.0 * std::pow(u0, 4 - order));
    CHECK(std::abs(ramp_derivative(1.0 - u0, order)) < 2000.0 * std::pow(u0, 4 - order));
  }
  // Analytic derivatives against central differences.
  for (double x : {0.2, 0.45, 0.8}) {
    const double e = 1e-5;
    for (int order = 1; order <= 3; ++order) {
      const double fd = (ramp_derivative(x + e, order - 1) - ramp_derivative(x - e, order - 1)) / (2.0 * e);
      CHECK(ramp_derivative(x, order) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("bump profiles: supports, plateaus, symmetry") {
  for (double t : {0.1, 0.2, 0.4}) {
    const auto b = build_bumps(t);
    CHECK(b.theta({0.0, 0.0, 0.0}) == 1.0);
    CHECK(b.theta1((1.0 - t) / 2.0) == 0.0);
    CHECK(b.theta1((1.0 - 2.0 * t) / 2.0) == 1.0);
    CHECK(std::abs(b.Theta1((1.0 + t) / 2.0)) < 1e-50);
    CHECK(b.Theta1((1.0 - t) / 2.0) == 1.0);
    for (double x : {0.05, 0.31, 0.44}) {
      CHECK(b.theta1(x) == b.theta1(-x));
      CHECK(b.Theta1(x) == b.Theta1(-x));
      CHECK(b.theta1(x) >= 0.0);
      CHECK(b.theta1(x) <= 1.0);
      CHECK(b.theta1_complement(x) == doctest::Approx(std::sqrt(1.0 - b.theta1(x) * b.theta1(x))).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(build_bumps(0.0), dyson::InvalidT);
  CHECK_THROWS_AS(build_bumps(0.5), dyson::InvalidT);
}

TEST_CASE("normalization constants sit inside their brackets") {
  for (double t : {0.1, 0.2, 0.4}) {
    const auto b = build_bumps(t);
    // Because s(u)^2 + s(1-u)^2 = 1, the ramp contributes exactly half its width.
    CHECK(b.gamma() == doctest::Approx(std::pow(1.0 - 1.5 * t, -3.0)).epsilon(1e-12));
    CHECK(b.gamma() >= 1.0);
    CHECK(b.gamma() <= std::pow(1.0 - 2.0 * t, -3.0));
    CHECK(b.gamma_tilde() >= std::pow(1.0 + t, -3.0));
    CHECK(b.gamma_tilde() <= std::pow(1.0 - t, -3.0));
    CHECK(b.h({0.0, 0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.h_radial(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("partition of unity") {
  for (double t : {0.1, 0.2, 0.4}) CHECK(partition_of_unity_residual(build_bumps(t), 1000, 7) <= 1e-12);
}

TEST_CASE("derivative bounds scale like t^-m") {
  const double c = BumpFamily::derivative_constant();
  // Frozen from the dense ramp scan.
  CHECK(c == doctest::Approx(954.498).epsilon(1e-5));
  for (double t : {0.1, 0.2, 0.4}) {
    const auto b = build_bumps(t);
    for (int order = 1; order <= 3; ++order) {
      double worst = 0.0;
      for (int i = 0; i <= 20000; ++i) {
        const double x = -0.5 + i / 20000.0;
        worst = std::max({worst, std::abs(b.theta1_derivative(x, order)), std::abs(b.Theta1_derivative(x, order)),
                          std::abs(b.theta1_complement_derivative(x, order))});
      }
      CHECK(worst <= c * std::pow(t, -order));
      CHECK(worst >= 0.1 * std::pow(t, -order));
    }
    // One mixed derivative by finite differences of the 3D profile.
    const double e = 1e-5;
    const double x0 = (1.0 - 1.5 * t) / 2.0;
    const double mixed = (b.theta({x0 + e, x0 + e, 0.0}) - b.theta({x0 + e, x0 - e, 0.0}) -
                          b.theta({x0 - e, x0 + e, 0.0}) + b.theta({x0 - e, x0 - e, 0.0})) /
                         (4.0 * e * e);
    CHECK(std::abs(mixed) <= c * std::pow(t, -2.0));
  }
}

TEST_CASE("radialized transform agrees with the Cartesian one") {
  const auto b = build_bumps(0.2);
  for (double k : {0.5, 5.0, 30.0}) {
    const double r = sliding_transform(b, k, 9.31323, 0.0, 1.0);
    const double c = sliding_transform_cartesian(b, k, 9.31323, 0.0);
    CHECK(std::abs(r - c) <= 1e-8 * std::abs(r));
  }
}

TEST_CASE("omega search: positivity, limit at the origin, large-k tail") {
  const auto b = build_bumps(0.2);
  const auto s = omega_search(b, 0.0, 1.0);
  CHECK(s.min_transform >= -1e-6);
  CHECK(s.previous_min < -1e-6);
  CHECK(s.tail_constant > 0.0);
  CHECK(s.f_zero == doctest::Approx(s.omega).epsilon(1e-4));
  for (double k = 0.01; k < 5000.0; k *= 1.3) CHECK(sliding_transform(b, k, s.omega, 0.0, 1.0) >= -1e-6);

  // lam rescales omega: F_lam(x) = F_1(x / lam) / lam.
  const auto s2 = omega_search(b, 0.0, 2.0);
  CHECK(s2.omega == doctest::Approx(s.omega));
  CHECK(s2.f_zero == doctest::Approx(s.omega / 2.0).epsilon(1e-4));

  // Screening helps: with m > 0 the required omega is no larger.
  CHECK(omega_search(b, 0.5, 1.0).omega <= s.omega);
}

TEST_CASE("charge sums with a certified sliding function") {
  const auto b = build_bumps(0.2);
  const double omega = omega_search(b).omega;
  auto f = [&](const Vec3& x) { return sliding_function(b, x, omega, 0.0, 1.0); };

  const auto single = charge_sum_lower({{0.0, 0.0, 0.0}}, {1}, omega, f);
  CHECK(single.lhs == 0.0);
  CHECK(single.holds);
  const auto pair = charge_sum_lower({{0.0, 0.0, 0.0}, {0.3, 0.1, 0.0}}, {1, 1}, omega, f);
  CHECK(pair.lhs >= -omega);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Vec3> pts;
    std::vector<int> q;
    for (int i = 0; i < 10; ++i) {
      pts.push_back({u(rng), u(rng), u(rng)});
      q.push_back(i % 2 ? 1 : -1);
    }
    const auto r = charge_sum_lower(pts, q, omega, f);
    CHECK(r.holds);
  }
}

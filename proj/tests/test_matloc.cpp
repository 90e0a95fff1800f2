#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "dyson/errors.hpp"
#include "dyson/matloc.hpp"

using namespace dyson::matloc;

TEST_CASE("diagonal sums of the identity and of diagonal matrices") {
  std::mt19937_64 rng(1);
  const auto psi = random_unit_vector(rng, 30);
  const auto d = diagonal_sums(Eigen::MatrixXcd::Identity(30, 30), psi);
  CHECK(d[0] == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t k = 1; k < d.size(); ++k) CHECK(d[k] == 0.0);

  Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(30, 30);
  for (int i = 0; i < 30; ++i) diag(i, i) = 0.1 * i - 1.0;
  const auto dd = diagonal_sums(diag, psi);
  for (std::size_t k = 1; k < dd.size(); ++k) CHECK(dd[k] == 0.0);
}

TEST_CASE("diagonal sums add up to the expectation value") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXcd a(40, 40);
    for (int i = 0; i < 40; ++i)
      for (int j = 0; j < 40; ++j) a(i, j) = {n01(rng), n01(rng)};
    a = (a + a.adjoint()).eval();
    const auto psi = random_unit_vector(rng, 40);
    const auto d = diagonal_sums(a, psi);
    double sum = 0.0;
    for (double x : d) sum += x;
    CHECK(std::abs(sum - psi.dot(a * psi).real()) < 1e-12);
  }
}

TEST_CASE("diagonal sums reject bad input") {
  std::mt19937_64 rng(3);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(5, 5);
  a(0, 1) = 1.0;
  CHECK_THROWS_AS(diagonal_sums(a, random_unit_vector(rng, 5)), dyson::NotHermitian);
  CHECK_THROWS_AS(diagonal_sums(Eigen::MatrixXcd::Identity(5, 5), 2.0 * random_unit_vector(rng, 5)),
                  dyson::NotNormalized);
}

TEST_CASE("taper constant approaches pi^2 / 2 from below") {
  double prev = 0.0;
  for (int m : {2, 5, 10, 20, 40, 100, 400}) {
    const double c = taper_constant(m);
    CHECK(c >= prev);
    CHECK(c <= std::numbers::pi * std::numbers::pi / 2.0);
    prev = c;
  }
  CHECK(taper_constant(400) == doctest::Approx(std::numbers::pi * std::numbers::pi / 2.0).epsilon(0.01));
}

TEST_CASE("short support without taper reproduces lambda") {
  std::mt19937_64 rng(4);
  const auto a = random_band_matrix(rng, 50, 3);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(50);
  psi.segment(10, 8) = random_unit_vector(rng, 8);
  const auto r = localize(a, psi, 8, 10.0, false);
  const double lambda = psi.dot(a * psi).real();
  CHECK(r.lambda == doctest::Approx(lambda).epsilon(1e-12));
  // The window holding the whole support gives exactly lambda, so the minimum cannot exceed it.
  CHECK(r.value <= lambda + 1e-12);
  const auto full = localize(a, psi, 50, 10.0, false);
  CHECK(full.value == doctest::Approx(lambda).epsilon(1e-12));
  CHECK(full.window_start == 0);
}

TEST_CASE("diagonal matrix: the value never exceeds lambda") {
  std::mt19937_64 rng(5);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(60, 60);
  for (int i = 0; i < 60; ++i) a(i, i) = std::sin(0.3 * i);
  for (int trial = 0; trial < 10; ++trial) {
    const auto r = localize(a, random_unit_vector(rng, 60), 7);
    CHECK(r.bound == doctest::Approx(r.lambda).epsilon(1e-14));
    CHECK(r.value <= r.lambda + 1e-12);
    CHECK(r.holds);
  }
}

TEST_CASE("report invariants and the random band ensemble") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_band_matrix(rng, 200, 5);
    const auto psi = random_unit_vector(rng, 200);
    const auto r = localize(a, psi, 20);
    double sum = 0.0;
    for (double x : r.d) sum += x;
    CHECK(std::abs(sum - r.lambda) < 1e-10);
    CHECK(r.phi.norm() == doctest::Approx(1.0).epsilon(1e-12));
    int nonzero = 0;
    for (int j = 0; j < 200; ++j) {
      if (std::abs(r.phi(j)) == 0.0) continue;
      ++nonzero;
      CHECK(j >= r.window_start);
      CHECK(j < r.window_start + 20);
    }
    CHECK(nonzero <= 20);
    CHECK(r.phi.dot(a * r.phi).real() == doctest::Approx(r.value).epsilon(1e-10));
    CHECK(r.value <= r.average + 1e-12);
    CHECK(r.holds);
  }
}

TEST_CASE("median slack shrinks as the window doubles") {
  double prev = 1e300;
  for (int m : {10, 20, 40, 80}) {
    std::mt19937_64 rng(7);
    std::vector<double> slack;
    for (int trial = 0; trial < 40; ++trial) {
      const auto a = random_band_matrix(rng, 200, 5);
      const auto r = localize(a, random_unit_vector(rng, 200), m);
      slack.push_back(r.bound - r.value);
    }
    std::nth_element(slack.begin(), slack.begin() + 20, slack.end());
    CHECK(slack[20] <= prev);
    prev = slack[20];
  }
}

TEST_CASE("shifting indices shifts the chosen window") {
  std::mt19937_64 rng(8);
  const int n = 120;
  const int shift = 7;
  const auto a = random_band_matrix(rng, n, 4);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n);
  psi.segment(20, 70) = random_unit_vector(rng, 70);
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(n);
  for (int i = 0; i < n; ++i) {
    phi((i + shift) % n) = psi(i);
    for (int j = 0; j < n; ++j) b((i + shift) % n, (j + shift) % n) = a(i, j);
  }
  const auto r1 = localize(a, psi, 15);
  const auto r2 = localize(b, phi, 15);
  CHECK(r2.window_start == r1.window_start + shift);
  CHECK(r2.value == doctest::Approx(r1.value).epsilon(1e-12));
  CHECK(r2.lambda == doctest::Approx(r1.lambda).epsilon(1e-12));
}

TEST_CASE("degenerate inputs") {
  std::mt19937_64 rng(9);
  const auto a = random_band_matrix(rng, 10, 2);
  CHECK_THROWS_AS(localize(a, random_unit_vector(rng, 10), 0), dyson::InvalidArgument);
  CHECK_THROWS_AS(localize(a, random_unit_vector(rng, 10), 11), dyson::InvalidArgument);
}

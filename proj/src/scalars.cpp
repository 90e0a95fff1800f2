#include "dyson/scalars.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dyson/errors.hpp"
#include "dyson/quadrature.hpp"

namespace dyson::scalars {

namespace {
constexpr double kPi = std::numbers::pi;
}

double I0Result::max_pairwise_diff() const {
  return std::max({std::abs(closed_form - quad_1d), std::abs(closed_form - quad_radial),
                   std::abs(quad_1d - quad_radial)});
}

double i0_closed_form() {
  return std::pow(2.0, 1.5) * std::tgamma(0.75) / (5.0 * std::pow(kPi, 0.25) * std::tgamma(1.25));
}

double foldy_integrand(double x) {
  const double x2 = x * x;
  const double x4 = x2 * x2;
  return 1.0 / (1.0 + x4 + x2 * std::sqrt(x4 + 2.0));
}

double i0_quad_1d(double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("i0_quad_1d: tol must be positive");
  const double prefactor = std::pow(2.0 / kPi, 0.75);
  const auto est = quad::adaptive_semi_infinite(foldy_integrand, 0.0, tol / prefactor);
  return prefactor * est.value;
}

double i_integrand(double k, double a) {
  if (k <= 0.0) return std::numeric_limits<double>::infinity();
  const double k2 = k * k;
  const double g = 4.0 * kPi / k2;
  const double f = 0.5 * k2 * k2 / (k2 + a);
  // (g + f) - sqrt(f^2 + 2 g f) = g^2 / (g + f + sqrt(f^2 + 2 g f))
  return g * g / (g + f + std::sqrt(f * (f + 2.0 * g)));
}

namespace {

// k^2 * i_integrand(k, a), rewritten so k = 0 is regular (limit 4 pi).
double radial_integrand(double k, double a) {
  const double k2 = k * k;
  const double f = 0.5 * k2 * k2 / (k2 + a);
  const double u = k2 * f;
  return 16.0 * kPi * kPi / (4.0 * kPi + u + std::sqrt(u * (u + 8.0 * kPi)));
}

}  // namespace

double i_of_a(double a, double tol) { return i_of_a_result(a, tol).value; }

IofA i_of_a_result(double a, double tol) {
  if (!(a >= 0.0)) throw InvalidArgument("i_of_a: a must be nonnegative");
  if (!(tol > 0.0)) throw InvalidArgument("i_of_a: tol must be positive");
  const double prefactor = 0.5 * std::pow(2.0 * kPi, -3.0) * 4.0 * kPi;
  auto integrand = [a](double k) { return radial_integrand(k, a); };
  // The cutoff a sets a scale sqrt(a) near the origin; split there so small
  // a is resolved without relying on bisection to find it.
  const double split = std::max(std::sqrt(a), 1e-300);
  double value = 0.0;
  if (a > 0.0) {
    value += quad::adaptive(integrand, 0.0, split, 0.25 * tol / prefactor).value;
    value += quad::adaptive_semi_infinite(integrand, split, 0.75 * tol / prefactor).value;
  } else {
    value = quad::adaptive_semi_infinite(integrand, 0.0, tol / prefactor).value;
  }
  return {a, prefactor * value};
}

I0Result i0_all(double tol) {
  I0Result r;
  r.closed_form = i0_closed_form();
  r.quad_1d = i0_quad_1d(tol);
  r.quad_radial = i_of_a(0.0, tol);
  r.abs_error_estimate = 2.0 * tol + 1e-14;
  return r;
}

}  // namespace dyson::scalars

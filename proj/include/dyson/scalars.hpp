#pragma once

// Foldy's constant I0 and the cutoff-perturbed I-integral.

namespace dyson::scalars {

struct I0Result {
  double closed_form = 0.0;
  double quad_1d = 0.0;
  double quad_radial = 0.0;
  double abs_error_estimate = 0.0;

  double max_pairwise_diff() const;
};

struct IofA {
  double a = 0.0;
  double value = 0.0;
};

/// 2^{3/2} Gamma(3/4) / (5 pi^{1/4} Gamma(5/4)).
double i0_closed_form();

/// 1 + x^4 - x^2 sqrt(x^4 + 2), evaluated through its conjugate
/// 1 / (1 + x^4 + x^2 sqrt(x^4 + 2)) so the tail keeps full precision.
double foldy_integrand(double x);

/// (2/pi)^{3/4} times the integral of foldy_integrand over [0, inf).
double i0_quad_1d(double tol);

/// Per-k integrand of the I-integral,
///   g + f - sqrt((g + f)^2 - g^2),  g = 4 pi / k^2,  f = k^4 / (2 (k^2 + a)).
/// Not multiplied by k^2 or the (2 pi)^{-3}/2 prefactor.
double i_integrand(double k, double a);

/// 1/2 (2 pi)^{-3} times the R^3 integral of i_integrand, reduced to a radial integral.
double i_of_a(double a, double tol = 1e-12);

IofA i_of_a_result(double a, double tol = 1e-12);

/// All three I0 evaluations with the quadratures run at `tol`.
I0Result i0_all(double tol);

}  // namespace dyson::scalars

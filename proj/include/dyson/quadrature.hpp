#pragma once

#include <functional>
#include <span>
#include <vector>

namespace dyson::quad {

using Integrand = std::function<double(double)>;

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod (G7/K15) on a finite interval.
/// Throws NonConvergence when the error estimate stays above `tol`.
Estimate adaptive(const Integrand& f, double a, double b, double tol);

/// Integral over [a, inf) after the substitution x = a + u/(1-u).
Estimate adaptive_semi_infinite(const Integrand& f, double a, double tol);

/// Gauss-Legendre nodes and weights on [a, b].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

Rule gauss_legendre(int order, double a = -1.0, double b = 1.0);

/// Composite Gauss-Legendre rule over consecutive panels [breaks[i], breaks[i+1]].
Rule composite(std::span<const double> breaks, int order);

}  // namespace dyson::quad

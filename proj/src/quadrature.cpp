#include "dyson/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include "dyson/errors.hpp"

namespace dyson::quad {

namespace {

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const Integrand& f, double a, double b) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
  using Gauss = boost::math::quadrature::gauss<double, 7>;
  const auto& xk = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  // Kronrod abscissae are stored for x >= 0; odd indices are the Gauss points.
  const double f0 = f(c);
  double kron = wk[0] * f0;
  double gauss = wg[0] * f0;
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double fx = f(c + h * xk[i]) + f(c - h * xk[i]);
    kron += wk[i] * fx;
    if (i % 2 == 0) gauss += wg[i / 2] * fx;
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace

Estimate adaptive(const Integrand& f, double a, double b, double tol) {
  constexpr int kMaxPanels = 20000;
  std::priority_queue<Panel> heap;
  Panel first = gk15(f, a, b);
  double value = first.value;
  double error = first.error;
  heap.push(first);
  int panels = 1;
  while (error > tol && panels < kMaxPanels) {
    const Panel worst = heap.top();
    if (!std::isfinite(error) || worst.b - worst.a < 1e-15 * (std::abs(worst.a) + 1e-300)) break;
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = gk15(f, worst.a, mid);
    const Panel right = gk15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  if (!(error <= tol)) {
    // Recompute sums from scratch to shed accumulated rounding before giving up.
    double v = 0.0, e = 0.0;
    while (!heap.empty()) {
      v += heap.top().value;
      e += heap.top().error;
      heap.pop();
    }
    if (!(e <= tol) || !std::isfinite(v)) {
      std::ostringstream msg;
      msg << "adaptive quadrature stalled at error " << e << " > tol " << tol;
      throw NonConvergence(msg.str());
    }
    return {v, e};
  }
  return {value, error};
}

Estimate adaptive_semi_infinite(const Integrand& f, double a, double tol) {
  auto mapped = [&](double u) {
    if (u >= 1.0) return 0.0;
    const double one_minus = 1.0 - u;
    const double x = a + u / one_minus;
    return f(x) / (one_minus * one_minus);
  };
  return adaptive(mapped, 0.0, 1.0, tol);
}

Rule gauss_legendre(int order, double a, double b) {
  if (order < 1) throw InvalidArgument("gauss_legendre: order must be positive");
  Rule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int n = order;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = c + h * rule.nodes[i];
    rule.weights[i] *= h;
  }
  return rule;
}

Rule composite(std::span<const double> breaks, int order) {
  Rule out;
  const Rule ref = gauss_legendre(order);
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double c = 0.5 * (breaks[p] + breaks[p + 1]);
    const double h = 0.5 * (breaks[p + 1] - breaks[p]);
    for (int i = 0; i < order; ++i) {
      out.nodes.push_back(c + h * ref.nodes[i]);
      out.weights.push_back(h * ref.weights[i]);
    }
  }
  return out;
}

}  // namespace dyson::quad

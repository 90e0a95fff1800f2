#include "dyson/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "dyson/errors.hpp"
#include "dyson/quadrature.hpp"

namespace dyson::potentials {

namespace {

constexpr double kPi = std::numbers::pi;

double norm3(const Vec3& x) { return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); }

// Integral of f over [a, b] by Gauss-Legendre panels between sorted breakpoints.
template <class F>
double panel_integral(F&& f, std::vector<double> breaks, int order) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  const auto ref = quad::gauss_legendre(order, -1.0, 1.0);
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double lo = breaks[p];
    const double hi = breaks[p + 1];
    if (!(hi > lo)) continue;
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < ref.nodes.size(); ++i) total += half * ref.weights[i] * f(mid + half * ref.nodes[i]);
  }
  return total;
}

}  // namespace

double yukawa(const Vec3& x, double m) {
  const double r = norm3(x);
  if (r == 0.0) throw SingularPoint("yukawa: evaluated at the origin");
  return std::exp(-m * r) / r;
}

double yukawa_hat(double k, double m) { return 4.0 * kPi / (k * k + m * m); }

double yukawa_hat_numeric(double k, double m, double tol) {
  if (!(m > 0.0) || !(k > 0.0)) throw InvalidArgument("yukawa_hat_numeric: need k > 0 and m > 0");
  // Panels of one half-period each until the exponential has died out.
  const double period = kPi / k;
  const double end = 60.0 / m;
  double total = 0.0;
  for (double lo = 0.0; lo < end; lo += period)
    total += quad::adaptive([&](double r) { return std::exp(-m * r) * std::sin(k * r); }, lo, lo + period,
                            tol * period)
                 .value;
  return 4.0 * kPi / k * total;
}

double v_rr(double x_norm, const CutoffPair& cut) {
  cut.validate();
  if (x_norm == 0.0) return 1.0 / cut.r - 1.0 / cut.R;
  return (std::exp(-x_norm / cut.R) - std::exp(-x_norm / cut.r)) / x_norm;
}

double v_rr_integral(const CutoffPair& cut) {
  cut.validate();
  return 4.0 * kPi * (cut.R * cut.R - cut.r * cut.r);
}

double ramp(double u) { return ramp_derivative(u, 0); }

double ramp_derivative(double u, int order) {
  if (order < 0 || order > 3) throw InvalidArgument("ramp_derivative: order must be 0..3");
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return order == 0 ? 1.0 : 0.0;
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double h = 0.5 * kPi;
  const double q = h * u3 * u * (35.0 - 84.0 * u + 70.0 * u2 - 20.0 * u3);
  const double q1 = h * u3 * (140.0 - 420.0 * u + 420.0 * u2 - 140.0 * u3);
  const double q2 = h * u2 * (420.0 - 1680.0 * u + 2100.0 * u2 - 840.0 * u3);
  const double q3 = h * u * (840.0 - 5040.0 * u + 8400.0 * u2 - 4200.0 * u3);
  const double s = std::sin(q);
  const double c = std::cos(q);
  switch (order) {
    case 0:
      return s;
    case 1:
      return c * q1;
    case 2:
      return -s * q1 * q1 + c * q2;
    default:
      return -c * q1 * q1 * q1 - 3.0 * s * q1 * q2 + c * q3;
  }
}

namespace {

// Profile equal to 1 for |x| <= inner and 0 for |x| >= inner + width.
double profile(double x, double inner, double width) { return ramp((inner + width - std::abs(x)) / width); }

double profile_derivative(double x, double inner, double width, int order) {
  const double u = (inner + width - std::abs(x)) / width;
  const double sign = x < 0.0 ? 1.0 : -1.0;
  return ramp_derivative(u, order) * std::pow(sign / width, order);
}

}  // namespace

BumpFamily::BumpFamily(double t) : t_(t) {
  if (!(t > 0.0 && t < 0.5)) throw InvalidT("BumpFamily: t must lie in (0, 1/2)");
  const double in = 0.5 * (1.0 - 2.0 * t);
  const double out = 0.5 * (1.0 - t);
  const double big_in = 0.5 * (1.0 - t);
  const double big_out = 0.5 * (1.0 + t);

  const double theta_sq =
      panel_integral([&](double x) { return theta1(x) * theta1(x); }, {-out, -in, in, out}, 16);
  const double theta_4 =
      panel_integral([&](double x) { return std::pow(Theta1(x), 4); }, {-big_out, -big_in, big_in, big_out}, 16);
  gamma_ = std::pow(theta_sq, -3.0);
  gamma_tilde_ = std::pow(theta_4, -3.0);

  // Autoconvolution of theta1 on [0, 2 out], where it is supported.
  constexpr int kConvNodes = 2001;
  const double span = 2.0 * out;
  const double dx = span / (kConvNodes - 1);
  std::vector<double> conv(kConvNodes);
  for (int i = 0; i < kConvNodes; ++i) {
    const double x = i * dx;
    std::vector<double> breaks{-out, -in, in, out, x - out, x - in, x + in, x + out};
    for (auto& b : breaks) b = std::clamp(b, -out, out);
    conv[i] = panel_integral([&](double y) { return theta1(y) * theta1(x - y); }, breaks, 12);
  }
  conv_ = boost::math::interpolators::cardinal_cubic_b_spline<double>(conv.begin(), conv.end(), 0.0, dx, 0.0, 0.0);

  // Spherical average of h over one octant (h is even in each coordinate).
  constexpr int kRadialNodes = 1201;
  const double rmax = h_support_radius();
  const double dr = rmax / (kRadialNodes - 1);
  const auto mu_rule = quad::gauss_legendre(48, 0.0, 1.0);
  const auto phi_rule = quad::gauss_legendre(48, 0.0, 0.5 * kPi);
  std::vector<double> hr(kRadialNodes);
  for (int i = 0; i < kRadialNodes; ++i) {
    const double r = i * dr;
    double acc = 0.0;
    for (std::size_t a = 0; a < mu_rule.nodes.size(); ++a) {
      const double mu = mu_rule.nodes[a];
      const double st = std::sqrt(1.0 - mu * mu);
      for (std::size_t b = 0; b < phi_rule.nodes.size(); ++b) {
        const Vec3 x{r * st * std::cos(phi_rule.nodes[b]), r * st * std::sin(phi_rule.nodes[b]), r * mu};
        acc += mu_rule.weights[a] * phi_rule.weights[b] * h(x);
      }
    }
    hr[i] = acc / (0.5 * kPi);
  }
  hrad_ = boost::math::interpolators::cardinal_cubic_b_spline<double>(hr.begin(), hr.end(), 0.0, dr, 0.0, 0.0);
}

double BumpFamily::theta1(double x) const { return profile(x, 0.5 * (1.0 - 2.0 * t_), 0.5 * t_); }
double BumpFamily::Theta1(double x) const { return profile(x, 0.5 * (1.0 - t_), t_); }

double BumpFamily::theta1_complement(double x) const {
  // sqrt(1 - s(u)^2) = s(1 - u) for the ramp s.
  const double u = (0.5 * (1.0 - t_) - std::abs(x)) / (0.5 * t_);
  return ramp(1.0 - u);
}

double BumpFamily::theta1_derivative(double x, int order) const {
  return profile_derivative(x, 0.5 * (1.0 - 2.0 * t_), 0.5 * t_, order);
}

double BumpFamily::Theta1_derivative(double x, int order) const {
  return profile_derivative(x, 0.5 * (1.0 - t_), t_, order);
}

double BumpFamily::theta1_complement_derivative(double x, int order) const {
  const double width = 0.5 * t_;
  const double u = (0.5 * (1.0 - t_) - std::abs(x)) / width;
  const double sign = x < 0.0 ? -1.0 : 1.0;
  return ramp_derivative(1.0 - u, order) * std::pow(sign / width, order);
}

double BumpFamily::theta(const Vec3& x) const { return theta1(x[0]) * theta1(x[1]) * theta1(x[2]); }
double BumpFamily::Theta(const Vec3& x) const { return Theta1(x[0]) * Theta1(x[1]) * Theta1(x[2]); }

double BumpFamily::theta1_autoconvolution(double x) const {
  const double a = std::abs(x);
  return a >= 1.0 - t_ ? 0.0 : conv_(a);
}

double BumpFamily::h(const Vec3& x) const {
  return gamma_ * theta1_autoconvolution(x[0]) * theta1_autoconvolution(x[1]) * theta1_autoconvolution(x[2]);
}

double BumpFamily::h_radial(double r) const {
  if (r >= h_support_radius()) return 0.0;
  return hrad_(std::abs(r));
}

double BumpFamily::h_radial_curvature() const {
  const double in = 0.5 * (1.0 - 2.0 * t_);
  const double out = 0.5 * (1.0 - t_);
  const double grad_sq = panel_integral(
      [&](double x) {
        const double d = theta1_derivative(x, 1);
        return d * d;
      },
      {-out, -in, in, out}, 16);
  const double c0 = theta1_autoconvolution(0.0);
  return -gamma_ * c0 * c0 * grad_sq;
}

double BumpFamily::h_support_radius() const { return std::sqrt(3.0) * (1.0 - t_); }

double BumpFamily::derivative_constant() {
  static const double c = [] {
    // S[n] = sup |s^(n)| on [0, 1], sampled densely.
    std::array<double, 4> sup{1.0, 0.0, 0.0, 0.0};
    constexpr int kSamples = 200000;
    for (int i = 0; i <= kSamples; ++i) {
      const double u = static_cast<double>(i) / kSamples;
      for (int n = 1; n <= 3; ++n) sup[n] = std::max(sup[n], std::abs(ramp_derivative(u, n)));
    }
    // theta has ramp width t/2, so each derivative brings 2/t; Theta's width t
    // is covered by the same bound. Mixed derivatives factor over the axes.
    double out = 1.0;
    for (int a = 0; a <= 3; ++a)
      for (int b = 0; a + b <= 3; ++b)
        for (int c3 = 0; a + b + c3 <= 3; ++c3)
          out = std::max(out, std::pow(2.0, a + b + c3) * sup[a] * sup[b] * sup[c3]);
    return out;
  }();
  return c;
}

BumpFamily build_bumps(double t) { return BumpFamily(t); }

double partition_of_unity_residual(const BumpFamily& b, int samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vec3 x{u(rng), u(rng), u(rng)};
    double sum = 0.0;
    for (int i = -4; i <= 4; ++i)
      for (int j = -4; j <= 4; ++j)
        for (int k = -4; k <= 4; ++k) {
          const double v = b.Theta({x[0] - i, x[1] - j, x[2] - k});
          sum += v * v;
        }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

double sliding_function(const BumpFamily& b, const Vec3& x, double omega, double m, double lam) {
  const double r = norm3(x);
  if (r == 0.0) throw SingularPoint("sliding_function: evaluated at the origin");
  const Vec3 y{x[0] / lam, x[1] / lam, x[2] / lam};
  return (std::exp(-m * r) - b.h(y) * std::exp(-(m + omega / lam) * r)) / r;
}

double sliding_transform(const BumpFamily& b, double k, double omega, double m, double lam) {
  if (!(k > 0.0)) throw InvalidArgument("sliding_transform: k must be positive");
  const double a = m + omega / lam;
  const double support = lam * b.h_support_radius();
  // Past 60/a the exponential is below e^-60 and the remaining piece is dropped.
  const double end = std::min(support, 60.0 / a);
  std::vector<double> breaks{0.0, end};
  for (double g = end; g > 1e-4 / a; g *= 0.5) breaks.push_back(g);
  const int uniform = 8 + static_cast<int>(std::ceil(k * end / 2.0));
  for (int i = 1; i < uniform; ++i) breaks.push_back(end * i / uniform);
  const double inner = panel_integral(
      [&](double r) { return (b.h_radial(r / lam) - 1.0) * std::exp(-a * r) * std::sin(k * r); }, breaks, 10);
  // Exact integral of exp(-a r) sin(k r) over [end, inf), where h - 1 = -1
  // (or the exponential is negligible).
  const double tail = std::exp(-a * end) * (a * std::sin(k * end) + k * std::cos(k * end)) / (a * a + k * k);
  // Y_m^ - Y_a^ combined so nothing cancels at large k.
  const double yukawa_difference = 4.0 * kPi * (a * a - m * m) / ((k * k + m * m) * (k * k + a * a));
  return yukawa_difference - 4.0 * kPi / k * (inner - tail);
}

double sliding_transform_cartesian(const BumpFamily& b, double k, double omega, double m) {
  if (!(k > 0.0)) throw InvalidArgument("sliding_transform_cartesian: k must be positive");
  const double a = m + omega;
  const double side = 1.0 - b.t();
  // Graded toward the corner singularity at the origin, uniform elsewhere.
  std::vector<double> breaks{0.0, side};
  for (double g = side / 2.0; g > 1e-5 / std::max(1.0, a); g *= 0.5) breaks.push_back(g);
  const int uniform = 12 + static_cast<int>(std::ceil(k * side / 2.0));
  for (int i = 1; i < uniform; ++i) breaks.push_back(side * i / uniform);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::vector<double> nodes, weights;
  const auto ref = quad::gauss_legendre(8, -1.0, 1.0);
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double mid = 0.5 * (breaks[p] + breaks[p + 1]);
    const double half = 0.5 * (breaks[p + 1] - breaks[p]);
    for (std::size_t i = 0; i < ref.nodes.size(); ++i) {
      nodes.push_back(mid + half * ref.nodes[i]);
      weights.push_back(half * ref.weights[i]);
    }
  }
  std::vector<double> c1(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) c1[i] = b.theta1_autoconvolution(nodes[i]);
  double total = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const double wij = weights[i] * weights[j] * c1[i] * c1[j];
      if (wij == 0.0) continue;
      for (std::size_t l = 0; l < nodes.size(); ++l) {
        const double r = std::sqrt(nodes[i] * nodes[i] + nodes[j] * nodes[j] + nodes[l] * nodes[l]);
        // e^{-ar}/r * sin(kr)/(kr)
        total += wij * weights[l] * c1[l] * std::exp(-a * r) * std::sin(k * r) / (k * r * r);
      }
    }
  const double transform_h = 8.0 * b.gamma() * total;
  return 4.0 * kPi / (k * k + m * m) - transform_h;
}

namespace {

struct ScanResult {
  double min_value = std::numeric_limits<double>::infinity();
  double k_at_min = 0.0;
};

// Minimum of F^(k) (1 + k^2/a^2)^2 over a logarithmic k-grid reaching far
// past both a and 1/t. The weight is >= 1 and keeps the k^-4 tail visible.
ScanResult scan_transform(const BumpFamily& b, double omega, double m, double lam) {
  const double a = m + omega / lam;
  const double k_lo = 1e-2 / lam;
  const double k_hi = 200.0 * std::max(a, 1.0 / (b.t() * lam));
  constexpr int kPoints = 300;
  ScanResult out;
  for (int i = 0; i < kPoints; ++i) {
    const double k = k_lo * std::pow(k_hi / k_lo, static_cast<double>(i) / (kPoints - 1));
    const double w = 1.0 + k * k / (a * a);
    const double v = sliding_transform(b, k, omega, m, lam) * w * w;
    if (v < out.min_value) {
      out.min_value = v;
      out.k_at_min = k;
    }
  }
  return out;
}

}  // namespace

OmegaSearch omega_search(const BumpFamily& b, double m, double lam) {
  if (!(lam > 0.0) || m < 0.0) throw InvalidArgument("omega_search: need lam > 0 and m >= 0");
  constexpr double kTolerance = -1e-6;
  OmegaSearch out;
  out.t = b.t();
  out.m = m;
  out.lam = lam;
  double previous = -std::numeric_limits<double>::infinity();
  for (int j = 0;; ++j) {
    const double omega = std::pow(1.25, j);
    if (omega > 1e8) throw NotFound("omega_search: no omega up to 1e8 gives a nonnegative transform");
    const auto scan = scan_transform(b, omega, m, lam);
    if (scan.min_value >= kTolerance) {
      out.omega = omega;
      out.min_transform = scan.min_value;
      out.k_at_min = scan.k_at_min;
      out.previous_min = previous;
      out.grid_steps = j;
      const double a = m + omega / lam;
      out.tail_constant = a * a - m * m + b.h_radial_curvature() / (lam * lam);
      const double r0 = 1e-6 * lam;
      out.f_zero = sliding_function(b, {r0, 0.0, 0.0}, omega, m, lam);
      return out;
    }
    previous = scan.min_value;
  }
}

ExponentFit fit_omega_exponent(const std::vector<double>& ts, double m) {
  if (ts.size() < 2) throw InvalidArgument("fit_omega_exponent: need at least two t values");
  ExponentFit fit;
  fit.ts = ts;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (double t : ts) {
    const double omega = omega_search(build_bumps(t), m, 1.0).omega;
    fit.omegas.push_back(omega);
    const double x = std::log(t);
    const double y = std::log(omega);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(ts.size());
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

ChargeSum charge_sum_lower(const std::vector<Vec3>& points, const std::vector<int>& charges, double f0,
                           const std::function<double(const Vec3&)>& f) {
  if (points.size() != charges.size()) throw InvalidArgument("charge_sum_lower: size mismatch");
  ChargeSum out;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const Vec3 d{points[i][0] - points[j][0], points[i][1] - points[j][1], points[i][2] - points[j][2]};
      out.lhs += charges[i] * charges[j] * f(d);
    }
  out.bound = -static_cast<double>(points.size()) * f0 / 2.0;
  out.holds = out.lhs >= out.bound;
  return out;
}

}  // namespace dyson::potentials

#pragma once

// Yukawa potentials and the smooth bump family used to decouple boxes. The
// positivity scan for the sliding function F = Y_m - h Y_{m + omega} lives here too.

#include <array>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <functional>
#include <vector>

#include "dyson/bogolubov.hpp"

namespace dyson::potentials {

using Vec3 = std::array<double, 3>;
using bogolubov::CutoffPair;

/// |x|^-1 exp(-m |x|). Throws SingularPoint at x = 0.
double yukawa(const Vec3& x, double m);

/// 4 pi / (k^2 + m^2).
double yukawa_hat(double k, double m);

/// (4 pi / k) * integral_0^inf exp(-m r) sin(k r) dr by adaptive quadrature
/// (m > 0). Independent check of yukawa_hat.
double yukawa_hat_numeric(double k, double m, double tol = 1e-12);

/// 4 pi [(k^2 + R^-2)^-1 - (k^2 + r^-2)^-1].
using bogolubov::v_rr_hat;
/// (exp(-|x|/R) - exp(-|x|/r)) / |x|, with the limit 1/r - 1/R at 0.
double v_rr(double x_norm, const CutoffPair& cut);
/// Integral of V_{r,R} over R^3: 4 pi (R^2 - r^2).
double v_rr_integral(const CutoffPair& cut);

/// Monotone ramp from 0 to 1 on [0, 1]: sin(pi/2 p(u)) with
/// p(u) = 35u^4 - 84u^5 + 70u^6 - 20u^7. Flat to third order at both ends and
/// s(u)^2 + s(1 - u)^2 = 1.
double ramp(double u);
/// d^order ramp / du^order for order 0..3 (0 outside [0, 1]).
double ramp_derivative(double u, int order);

class BumpFamily {
 public:
  explicit BumpFamily(double t);

  double t() const { return t_; }
  double gamma() const { return gamma_; }
  double gamma_tilde() const { return gamma_tilde_; }

  /// One-dimensional factors: theta1 = 1 on |x| <= (1-2t)/2, 0 on |x| >= (1-t)/2;
  /// Theta1 = 1 on |x| <= (1-t)/2, 0 on |x| >= (1+t)/2.
  double theta1(double x) const;
  double Theta1(double x) const;
  /// sqrt(1 - theta1^2).
  double theta1_complement(double x) const;
  /// order-th derivative of the three profiles above (order 0..3).
  double theta1_derivative(double x, int order) const;
  double Theta1_derivative(double x, int order) const;
  double theta1_complement_derivative(double x, int order) const;

  double theta(const Vec3& x) const;
  double Theta(const Vec3& x) const;

  /// (theta1 * theta1)(x), tabulated and interpolated.
  double theta1_autoconvolution(double x) const;
  /// h = gamma theta * theta; h(0) = 1.
  double h(const Vec3& x) const;
  /// Spherical average of h at radius r, tabulated and interpolated.
  double h_radial(double r) const;
  /// Second derivative of h_radial at 0, which is Laplacian(h)(0) / 3 =
  /// -gamma c(0)^2 * integral of theta1'^2.
  double h_radial_curvature() const;
  /// Radius beyond which h vanishes: sqrt(3) (1 - t).
  double h_support_radius() const;

  /// Smallest C with sup |d^alpha f| <= C t^{-|alpha|} for |alpha| <= 3 and
  /// f in {theta, sqrt(1 - theta^2), Theta}. Independent of t by construction.
  static double derivative_constant();

 private:
  double t_;
  double gamma_ = 0.0;
  double gamma_tilde_ = 0.0;
  boost::math::interpolators::cardinal_cubic_b_spline<double> conv_;
  boost::math::interpolators::cardinal_cubic_b_spline<double> hrad_;
};

/// Throws InvalidT unless 0 < t < 1/2.
BumpFamily build_bumps(double t);

/// max over x of |sum_k Theta(x - k)^2 - 1| at `samples` random points.
double partition_of_unity_residual(const BumpFamily& b, int samples, unsigned seed);

/// F(x) = Y_m(x) - h(x / lam) Y_{m + omega / lam}(x).
double sliding_function(const BumpFamily& b, const Vec3& x, double omega, double m, double lam);

/// Fourier transform of F at |k| = k, with h replaced by its spherical average.
double sliding_transform(const BumpFamily& b, double k, double omega, double m, double lam);

/// Same quantity by Cartesian quadrature of h(x) exp(-a|x|)/|x| j0(k|x|) over
/// the support cube, without radializing h first. lam = 1 only.
double sliding_transform_cartesian(const BumpFamily& b, double k, double omega, double m);

struct OmegaSearch {
  double t = 0.0;
  double m = 0.0;
  double lam = 1.0;
  double omega = 0.0;        // smallest grid value with min F^ >= tolerance
  double min_transform = 0.0;  // min over the k-grid of F^(k) (1 + k^2/a^2)^2 at omega
  double k_at_min = 0.0;
  double f_zero = 0.0;       // F at |x| = 1e-6 lam, which tends to omega / lam
  double previous_min = 0.0;   // the same minimum at the grid value just below omega
  /// a^2 - m^2 + h_radial''(0): the limit of F^(k) k^4 / (4 pi) as k -> inf.
  double tail_constant = 0.0;
  int grid_steps = 0;
};

/// Scans omega = 1.25^j (j = 0, 1, ...) upward and returns the first value at
/// which F^(k) (1 + k^2/a^2)^2 >= -1e-6 on a logarithmic k-grid, a = m + omega/lam.
/// The weight is at least 1, so this implies F^ >= -1e-6, and it keeps the
/// sign of the k^-4 tail from hiding under the tolerance. Throws NotFound past 1e8.
OmegaSearch omega_search(const BumpFamily& b, double m = 0.0, double lam = 1.0);

struct ExponentFit {
  std::vector<double> ts;
  std::vector<double> omegas;
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares fit of log omega(t) against log t.
ExponentFit fit_omega_exponent(const std::vector<double>& ts, double m = 0.0);

struct ChargeSum {
  double lhs = 0.0;
  double bound = 0.0;
  bool holds = false;
};

/// lhs = sum_{i<j} e_i e_j F(x_i - x_j), bound = -N F0 / 2.
ChargeSum charge_sum_lower(const std::vector<Vec3>& points, const std::vector<int>& charges, double f0,
                           const std::function<double(const Vec3&)>& f);

}  // namespace dyson::potentials

#include "dyson/matloc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dyson/errors.hpp"

namespace dyson::matloc {

std::vector<double> diagonal_sums(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& psi) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || psi.size() != n || n == 0) throw InvalidArgument("diagonal_sums: size mismatch");
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()))
    throw NotHermitian("diagonal_sums: matrix is not Hermitian");
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw NotNormalized("diagonal_sums: vector is not normalized");
  std::vector<double> d(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index j = 0; j < n; ++j) d[0] += a(j, j).real() * std::norm(psi(j));
  for (Eigen::Index k = 1; k < n; ++k) {
    std::complex<double> s = 0.0;
    for (Eigen::Index j = 0; j + k < n; ++j) s += std::conj(psi(j)) * a(j, j + k) * psi(j + k);
    d[static_cast<std::size_t>(k)] = 2.0 * s.real();
  }
  return d;
}

std::vector<double> half_sine_taper(int m) {
  std::vector<double> w(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) w[i] = std::sin(std::numbers::pi * (i + 1) / (m + 1));
  return w;
}

namespace {

std::vector<double> autocorrelation(const std::vector<double>& w) {
  std::vector<double> c(w.size(), 0.0);
  for (std::size_t k = 0; k < w.size(); ++k)
    for (std::size_t i = 0; i + k < w.size(); ++i) c[k] += w[i] * w[i + k];
  return c;
}

}  // namespace

double taper_constant(int m) {
  if (m < 1) throw InvalidArgument("taper_constant: M must be positive");
  const auto c = autocorrelation(half_sine_taper(m));
  double out = 1.0;
  for (int k = 1; k < m; ++k) out = std::max(out, (1.0 - c[k] / c[0]) * m * m / (static_cast<double>(k) * k));
  return out;
}

LocalizationReport localize(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& psi, int m, double c_work, bool taper) {
  const int n = static_cast<int>(a.rows());
  if (m < 1 || m > n) throw InvalidArgument("localize: need 1 <= M <= N");
  LocalizationReport r;
  r.d = diagonal_sums(a, psi);
  r.window_length = m;
  r.c_work = c_work;
  for (double dk : r.d) r.lambda += dk;
  double near = 0.0;
  double far = 0.0;
  for (int k = 1; k < n; ++k) {
    if (k < m)
      near += static_cast<double>(k) * k * std::abs(r.d[k]);
    else
      far += std::abs(r.d[k]);
  }
  r.bound = r.lambda + c_work / (static_cast<double>(m) * m) * near + c_work * far;

  const std::vector<double> w = taper ? half_sine_taper(m) : std::vector<double>(static_cast<std::size_t>(m), 1.0);
  const int first = taper ? -(m - 1) : 0;
  const int last = taper ? n - 1 : n - m;
  double best = std::numeric_limits<double>::infinity();
  double num_sum = 0.0;
  double den_sum = 0.0;
  Eigen::VectorXcd seg(m);
  for (int s = first; s <= last; ++s) {
    // Work on the unclipped window [lo, lo + m) that contains the clipped support.
    const int lo = std::clamp(s, 0, n - m);
    seg.setZero();
    for (int i = 0; i < m; ++i) {
      const int j = s + i;
      if (j >= 0 && j < n) seg(j - lo) = w[i] * psi(j);
    }
    const double norm2 = seg.squaredNorm();
    if (norm2 == 0.0) continue;
    const double energy = seg.dot(a.block(lo, lo, m, m) * seg).real();
    num_sum += energy;
    den_sum += norm2;
    if (energy / norm2 < best) {
      best = energy / norm2;
      r.phi = Eigen::VectorXcd::Zero(n);
      r.phi.segment(lo, m) = seg / std::sqrt(norm2);
      r.window_start = lo;
    }
  }
  if (!std::isfinite(best)) throw AllWindowsDegenerate("localize: psi vanishes on every window");
  r.value = best;
  r.average = num_sum / den_sum;
  r.holds = r.value <= r.bound;
  return r;
}

Eigen::MatrixXcd random_band_matrix(std::mt19937_64& rng, int n, int band) {
  std::normal_distribution<double> n01;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = n01(rng);
    for (int j = i + 1; j <= std::min(n - 1, i + band); ++j) {
      a(i, j) = {n01(rng), n01(rng)};
      a(j, i) = std::conj(a(i, j));
    }
  }
  return a;
}

Eigen::VectorXcd random_unit_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> n01;
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = {n01(rng), n01(rng)};
  return v / v.norm();
}

}  // namespace dyson::matloc

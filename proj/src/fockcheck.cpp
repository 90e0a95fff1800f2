#include "dyson/fockcheck.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "dyson/errors.hpp"
#include "dyson/fock.hpp"
#include "dyson/quadrature.hpp"

namespace dyson::fockcheck {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRadialCut = 45.0;

}  // namespace

double fs(double p_norm, double s) {
  const double p2 = p_norm * p_norm;
  return p2 / (p2 + 1.0 / (s * s));
}

double fs_convolution(const Vec3& p, double s, int angular_order) {
  const auto ang = quad::gauss_legendre(angular_order, 0.0, 1.0);
  const auto ref = quad::gauss_legendre(12, -1.0, 1.0);
  const double p_norm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  const double pref = 8.0 / (4.0 * kPi * s * s);

  // [0,1]^3 is split into three pyramids by its largest coordinate. In each,
  // x = rho (a, b, 1) up to a permutation, with Jacobian rho^2. The integrand
  // is then smooth in (a, b).
  double total = 0.0;
  for (int apex = 0; apex < 3; ++apex) {
    const int ia = (apex + 1) % 3;
    const int ib = (apex + 2) % 3;
    for (std::size_t i = 0; i < ang.nodes.size(); ++i) {
      for (std::size_t j = 0; j < ang.nodes.size(); ++j) {
        Vec3 w{};
        w[apex] = 1.0;
        w[ia] = ang.nodes[i];
        w[ib] = ang.nodes[j];
        const double len = std::sqrt(1.0 + w[ia] * w[ia] + w[ib] * w[ib]);
        const double rho_max = std::min(1.0, kRadialCut * s / len);
        // Graded at the kernel scale, then split so no panel holds more than
        // about a third of a period of cos(p.x).
        std::vector<double> breaks{0.0};
        for (double q = 0.25 * s / len; q < rho_max; q *= 2.0) breaks.push_back(q);
        breaks.push_back(rho_max);
        double radial = 0.0;
        for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
          const double width = breaks[k + 1] - breaks[k];
          const int pieces = std::max(1, static_cast<int>(std::ceil(width * len * p_norm / 2.0)));
          const double h = width / pieces;
          for (int piece = 0; piece < pieces; ++piece) {
            const double mid = breaks[k] + (piece + 0.5) * h;
            for (std::size_t n = 0; n < ref.nodes.size(); ++n) {
              const double rho = mid + 0.5 * h * ref.nodes[n];
              double val = rho * std::exp(-rho * len / s) / len;
              for (int c = 0; c < 3; ++c) val *= (1.0 - rho * w[c]) * std::cos(p[c] * rho * w[c]);
              radial += 0.5 * h * ref.weights[n] * val;
            }
          }
        }
        total += ang.weights[i] * ang.weights[j] * radial;
      }
    }
  }
  return 1.0 - pref * total;
}

FsSupReport fs_convolution_sup(double s) {
  if (!(s > 0.0 && s < 1.0)) throw InvalidArgument("fs_convolution_sup: need 0 < s < 1");
  FsSupReport out;
  out.s = s;
  const double rc = kRadialCut;
  out.tail_bound = std::exp(-rc) * (1.0 + rc);

  const double zero = fs_convolution({0.0, 0.0, 0.0}, s);
  const double zero_fine = fs_convolution({0.0, 0.0, 0.0}, s, 48);
  if (std::abs(zero - zero_fine) > 1e-10) throw NonConvergence("fs_convolution_sup: angular rule not converged");
  out.at_zero = std::abs(zero);
  out.sup = out.at_zero;

  const std::array<Vec3, 4> dirs{Vec3{1.0, 0.0, 0.0}, Vec3{1.0, 1.0, 0.0}, Vec3{1.0, 1.0, 1.0}, Vec3{1.0, 2.0, 3.0}};
  out.grid_points = 1;
  for (const auto& d : dirs) {
    const double dn = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    for (double m : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
      const double pn = m / s;
      const Vec3 p{d[0] / dn * pn, d[1] / dn * pn, d[2] / dn * pn};
      const double diff = std::abs(fs(pn, s) - fs_convolution(p, s));
      ++out.grid_points;
      if (diff > out.sup) {
        out.sup = diff;
        out.p_at_sup = pn;
      }
    }
  }
  return out;
}

CreationGap creation_difference_gap(int cutoff) {
  if (cutoff < 4) throw InvalidArgument("creation_difference_gap: cutoff must be >= 4");
  using fock::annihilate;
  using fock::create;
  const fock::FockBasis basis(2, cutoff);
  fock::OperatorBuilder builder(basis);
  builder.add(1.0, {create(1), annihilate(1)})
      .add(-1.0, {create(1), annihilate(0)})
      .add(-1.0, {create(0), annihilate(1)})
      .add(1.0, {create(0), annihilate(0)})
      .add_diagonal([](std::span<const int> n) {
        const double d = std::sqrt(n[1] + 0.5) - std::sqrt(n[0] + 0.5);
        return 1.0 - d * d;
      });
  const fock::SparseMatrix m = builder.build();

  CreationGap out;
  out.cutoff = cutoff;
  out.max_total = cutoff / 2;
  std::vector<int> keep;
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    const auto occ = basis.occupations(i);
    if (occ[0] + occ[1] <= out.max_total) keep.push_back(static_cast<int>(i));
  }
  out.dimension = static_cast<int>(keep.size());
  const Eigen::MatrixXd dense = Eigen::MatrixXd(m)(keep, keep);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues()(0);
  return out;
}

double creation_difference_diagonal(int n1, int n2) {
  const double d = std::sqrt(n2 + 0.5) - std::sqrt(n1 + 0.5);
  return n1 + n2 - d * d + 1.0;
}

std::vector<std::array<int, 3>> beta_vectors() {
  std::vector<std::array<int, 3>> out;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b)
      for (int c = -1; c <= 1; ++c) {
        const int n2 = a * a + b * b + c * c;
        if (n2 >= 2) out.push_back({a, b, c});
      }
  return out;
}

BetaIdentity beta_vector_identity(const Vec3& v) {
  double acc = 0.0;
  for (const auto& sg : beta_vectors()) {
    const double dot = v[0] * sg[0] + v[1] * sg[1] + v[2] * sg[2];
    const int weight = (sg[0] * sg[0] + sg[1] * sg[1] + sg[2] * sg[2] == 2) ? 2 : 1;
    acc += weight * dot * dot;
  }
  return {acc / 24.0, v[0] * v[0] + v[1] * v[1] + v[2] * v[2]};
}

namespace {

void check_mode(const std::array<int, 3>& n, double ell) {
  if (!(ell > 0.0)) throw InvalidArgument("neumann mode: ell must be positive");
  for (int k : n)
    if (k < 0) throw InvalidArgument("neumann mode: indices must be nonnegative");
}

double mode_constant(const std::array<int, 3>& n) {
  int nonzero = 0;
  for (int k : n) nonzero += (k != 0);
  return std::sqrt(static_cast<double>(1 << nonzero));
}

// Gauss rule on [-ell/2, ell/2] accurate for cosines up to index `top`.
quad::Rule cube_rule(int top, double ell) {
  const int panels = std::max(1, top);
  std::vector<double> breaks;
  for (int i = 0; i <= panels; ++i) breaks.push_back(-ell / 2.0 + ell * i / panels);
  return quad::composite(breaks, 16);
}

}  // namespace

double neumann_mode(const std::array<int, 3>& n, double ell, const Vec3& x) {
  double v = mode_constant(n) * std::pow(ell, -1.5);
  for (int j = 0; j < 3; ++j) v *= std::cos(kPi * n[j] / ell * (x[j] + ell / 2.0));
  return v;
}

NeumannMode neumann_mode_check(const std::array<int, 3>& n, double ell) {
  check_mode(n, ell);
  NeumannMode out;
  out.n = n;
  out.ell = ell;
  out.c_p = mode_constant(n);
  const double k = kPi / ell;
  for (int j = 0; j < 3; ++j) out.eigenvalue += k * n[j] * k * n[j];

  const auto rule = cube_rule(*std::max_element(n.begin(), n.end()), ell);
  // The mode is a product, so its 3D integrals factor into 1D ones; the
  // factors are still evaluated by quadrature rather than in closed form.
  std::array<double, 3> val{}, der{};
  for (int j = 0; j < 3; ++j) {
    const double pj = k * n[j];
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double y = rule.nodes[i] + ell / 2.0;
      val[j] += rule.weights[i] * std::pow(std::cos(pj * y), 2);
      der[j] += rule.weights[i] * std::pow(pj * std::sin(pj * y), 2);
    }
  }
  const double scale = out.c_p * out.c_p * std::pow(ell, -3.0);
  const double norm_sq = scale * val[0] * val[1] * val[2];
  const double grad_sq =
      scale * (der[0] * val[1] * val[2] + val[0] * der[1] * val[2] + val[0] * val[1] * der[2]);
  out.norm = std::sqrt(norm_sq);
  out.rayleigh = grad_sq / norm_sq;
  return out;
}

double neumann_orthogonality_defect(int k, double ell) {
  if (k < 1 || !(ell > 0.0)) throw InvalidArgument("neumann_orthogonality_defect: bad arguments");
  // Full 3D product rule here, so that the check does not lean on factorization.
  const auto rule = cube_rule(2 * k, ell);
  const std::size_t q = rule.nodes.size();
  std::vector<std::array<int, 3>> modes;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c) modes.push_back({a, b, c});

  Eigen::MatrixXd values(modes.size(), q * q * q);
  Eigen::VectorXd weights(q * q * q);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j)
      for (std::size_t l = 0; l < q; ++l) {
        const std::size_t col = (i * q + j) * q + l;
        weights(col) = rule.weights[i] * rule.weights[j] * rule.weights[l];
        const Vec3 x{rule.nodes[i], rule.nodes[j], rule.nodes[l]};
        for (std::size_t m = 0; m < modes.size(); ++m) values(m, col) = neumann_mode(modes[m], ell, x);
      }
  const Eigen::MatrixXd gram = values * weights.asDiagonal() * values.transpose();
  return (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

}  // namespace dyson::fockcheck

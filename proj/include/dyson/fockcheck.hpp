#pragma once

// Small numerical checks behind the kinetic energy localization. They cover a
// Fourier convolution estimate and an operator inequality for two commuting
// modes, plus two exact identities (a lattice quadrature rule and the Neumann
// eigenbasis of a cube).

#include <array>
#include <vector>

namespace dyson::fockcheck {

using Vec3 = std::array<double, 3>;

/// f_s(p) = p^2 / (p^2 + s^-2).
double fs(double p_norm, double s);

/// (2 pi)^-3 (f_s * |X^|^2)(p), where X is the unit cube centred at 0.
///
/// Evaluated through its position-space form 1 - int K_s(x) g(x) cos(p.x) dx
/// with K_s(x) = e^{-|x|/s} / (4 pi s^2 |x|) and g = prod (1 - |x_i|)_+, the
/// autocorrelation of the cube. The integral runs over one octant, split
/// into three pyramids, radially truncated at |x| = 45 s.
double fs_convolution(const Vec3& p, double s, int angular_order = 32);

struct FsSupReport {
  double s = 0.0;
  double sup = 0.0;        // max over the p-grid of |f_s(p) - convolution(p)|
  double p_at_sup = 0.0;   // |p| where it is attained
  double at_zero = 0.0;    // |difference| at p = 0
  double tail_bound = 0.0; // mass of K_s beyond the radial truncation
  int grid_points = 0;
};

/// Throws InvalidArgument unless 0 < s < 1, NonConvergence if the p = 0 value
/// moves by more than 1e-10 when the angular rule is refined.
FsSupReport fs_convolution_sup(double s);

struct CreationGap {
  int cutoff = 0;
  int max_total = 0;   // states kept: n1 + n2 <= cutoff / 2
  int dimension = 0;
  double min_eigenvalue = 0.0;
};

/// Lowest eigenvalue of
///   (a2* - a1*)(a2 - a1) - (sqrt(n2 + 1/2) - sqrt(n1 + 1/2))^2 + 1
/// on two modes, over states of total occupation <= cutoff / 2. The operator
/// conserves n1 + n2, so the restriction is exact and independent of the
/// truncation. Throws InvalidArgument if cutoff < 4.
CreationGap creation_difference_gap(int cutoff);

/// Expectation of the same operator in |n1, n2>, straight from the formula.
double creation_difference_diagonal(int n1, int n2);

struct BetaIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// The 12 vectors of length sqrt 2 and 8 of length sqrt 3 in {-1,0,1}^3.
std::vector<std::array<int, 3>> beta_vectors();

/// lhs = sum_{|sigma|^2=2} (v.sigma)^2 / 12 + sum_{|sigma|^2=3} (v.sigma)^2 / 24,
/// rhs = |v|^2. The two sums are accumulated with integer weights 2 and 1 and
/// divided by 24 once.
BetaIdentity beta_vector_identity(const Vec3& v);

struct NeumannMode {
  std::array<int, 3> n{};  // p = (pi / ell) n
  double ell = 1.0;
  double c_p = 1.0;
  double eigenvalue = 0.0;      // |p|^2
  double norm = 0.0;            // quadrature L2 norm
  double rayleigh = 0.0;        // quadrature (grad u, grad u) / (u, u)
};

/// u_p(x) = c_p ell^{-3/2} prod cos(p_j (x_j + ell / 2)) on [-ell/2, ell/2]^3.
double neumann_mode(const std::array<int, 3>& n, double ell, const Vec3& x);

/// Builds the mode and checks its norm and Rayleigh quotient by product Gauss
/// quadrature. Throws InvalidArgument for negative indices or ell <= 0.
NeumannMode neumann_mode_check(const std::array<int, 3>& n, double ell);

/// Gram matrix of the modes with indices in {0, .., k-1}^3, by quadrature.
/// Returns max |<u_p, u_q> - delta_pq|.
double neumann_orthogonality_defect(int k, double ell);

}  // namespace dyson::fockcheck

#pragma once

// Lower bound for a single pair of quadratic boson modes, the exact ground
// energy of the matching canonical Hamiltonian on a truncated Fock space, and
// the Foldy energy density together with its finite-box lattice sum.

#include <array>
#include <complex>
#include <random>
#include <vector>

#include "dyson/fock.hpp"

namespace dyson::bogolubov {

struct QuadraticModeParams {
  double A = 1.0;
  double B_plus = 0.0;
  double B_minus = 0.0;
  std::complex<double> kappa{0.0, 0.0};

  double b_bar() const { return B_plus + B_minus; }
  /// Throws InvalidArgument unless A > 0 and B_plus + B_minus >= 0.
  void validate() const;
};

/// Inner and outer cutoff lengths r <= R of the screened interaction.
struct CutoffPair {
  double r = 1.0;
  double R = 1.0;

  void validate() const;
};

struct FockTruncation {
  int modes = 2;
  int cutoff = 60;

  void validate() const;
};

/// -(A + B) + sqrt((A + B)^2 - B^2) - |kappa|^2 with B = B_plus + B_minus.
double bogolubov_bound(const QuadraticModeParams& p);

/// Random draw used by the ensembles: A = 10(1-u), B+- = 10u,
/// kappa = 3 sqrt(u) e^{2 pi i u}, with independent uniforms u.
QuadraticModeParams random_params(std::mt19937_64& rng);

/// Ground energy of the canonical two-mode Hamiltonian in closed form:
/// -(A + B) + sqrt(A (A + 2B)) - 2 |kappa|^2 B / (A + 2B).
double completed_square_energy(const QuadraticModeParams& p);

/// Truncated matrix of
///   A (n+ + n-) + B (n+ + n- + d+* d-* + d+ d-) + sqrt(B) (|kappa| (d+* + d-) + h.c.)
/// with the phase of kappa rotated away. Mode 0 is d+, mode 1 is d-.
fock::SparseMatrix canonical_hamiltonian(const QuadraticModeParams& p, int cutoff);

/// Smallest eigenvalue at t.cutoff. Throws TruncationUnconverged if the value
/// at 2 * t.cutoff differs by more than 1e-8.
double exact_ground_energy_canonical(const QuadraticModeParams& p, const FockTruncation& t);

struct ExactGround {
  double energy = 0.0;   // at the largest cutoff tried
  int cutoff = 0;        // that cutoff
  double last_shift = 0.0;
  bool converged = false;
};

/// Doubles the cutoff from `start_cutoff` until the eigenvalue moves by at most
/// `shift_tol` or `max_cutoff` is reached. Never throws on non-convergence.
/// Because the truncated space is a subspace, every reported energy is an upper
/// bound on the untruncated ground energy.
ExactGround exact_ground_energy_adaptive(const QuadraticModeParams& p, int start_cutoff, int max_cutoff,
                                         double shift_tol = 1e-8);

/// g + f - sqrt((g + f)^2 - g^2) in a form that is stable for f >> g.
double bracket(double g, double f);

/// -I0 rho^{5/4} ell^3.
double foldy_energy_density(double rho, double ell);

struct FoldyLatticeSum {
  double rho = 0.0;
  double ell = 0.0;
  double lattice_sum = 0.0;  // sum over k in (2 pi / ell) Z^3 \ {0}
  double integral = 0.0;     // foldy_energy_density(rho, ell)
  double relative_error = 0.0;
};

/// Replaces the k-integral by the sum over the box's momentum lattice of
/// -1/2 bracket(4 pi rho / k^2, k^2 / 2). The part beyond the summation sphere
/// is added from its asymptotic form.
FoldyLatticeSum foldy_lattice_sum(double rho, double ell);

/// 4 pi [(k^2 + R^-2)^-1 - (k^2 + r^-2)^-1].
double v_rr_hat(double k, const CutoffPair& cut);

/// -1/2 (2 pi)^-3 bracket(g, f).
double hq_density(double g, double f);

/// hq_density with g = nu * v_rr_hat(|k|) and
/// f = (ell^3 gamma / 2) |k|^4 / (|k|^2 + (ell t^6)^-2).
double hq_scalar_bound(const std::array<double, 3>& k, double nu, double ell, const CutoffPair& cut, double gamma,
                       double tpar);

}  // namespace dyson::bogolubov

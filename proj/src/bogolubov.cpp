#include "dyson/bogolubov.hpp"

#include <cmath>
#include <numbers>

#include "dyson/errors.hpp"
#include "dyson/scalars.hpp"

namespace dyson::bogolubov {

namespace {
constexpr double kPi = std::numbers::pi;
// A Ritz residual r bounds the eigenvalue error by r^2 / gap, far below 1e-8.
constexpr double kResidualTol = 1e-7;
}

void QuadraticModeParams::validate() const {
  if (!(A > 0.0)) throw InvalidArgument("QuadraticModeParams: A must be positive");
  if (!(B_plus + B_minus >= 0.0)) throw InvalidArgument("QuadraticModeParams: B_plus + B_minus must be nonnegative");
}

void CutoffPair::validate() const {
  if (!(r > 0.0) || !(R >= r)) throw InvalidArgument("CutoffPair: need 0 < r <= R");
}

void FockTruncation::validate() const {
  if (modes != 2) throw InvalidArgument("FockTruncation: the canonical oracle uses two modes");
  if (cutoff < 4) throw InvalidArgument("FockTruncation: cutoff must be at least 4");
}

double bogolubov_bound(const QuadraticModeParams& p) {
  p.validate();
  const double b = p.b_bar();
  const double s = p.A + b;
  // s - sqrt(s^2 - b^2) written as b^2 / (s + sqrt(...)) to avoid cancellation.
  return -(b * b) / (s + std::sqrt(p.A * (p.A + 2.0 * b))) - std::norm(p.kappa);
}

QuadraticModeParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  QuadraticModeParams p;
  p.A = 10.0 * (1.0 - u(rng));
  p.B_plus = 10.0 * u(rng);
  p.B_minus = 10.0 * u(rng);
  p.kappa = std::polar(3.0 * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
  return p;
}

double completed_square_energy(const QuadraticModeParams& p) {
  p.validate();
  const double b = p.b_bar();
  const double s = p.A + b;
  return -(b * b) / (s + std::sqrt(p.A * (p.A + 2.0 * b))) - 2.0 * std::norm(p.kappa) * b / (p.A + 2.0 * b);
}

fock::SparseMatrix canonical_hamiltonian(const QuadraticModeParams& p, int cutoff) {
  p.validate();
  using fock::annihilate;
  using fock::create;
  const fock::FockBasis basis(2, cutoff);
  const double b = p.b_bar();
  const double lin = std::abs(p.kappa) * std::sqrt(b);
  fock::OperatorBuilder h(basis);
  h.add_diagonal([&](std::span<const int> n) { return (p.A + b) * (n[0] + n[1]); });
  h.add(b, {create(0), create(1)}).add(b, {annihilate(0), annihilate(1)});
  if (lin != 0.0) {
    h.add(lin, {create(0)}).add(lin, {annihilate(1)});
    h.add(lin, {annihilate(0)}).add(lin, {create(1)});
  }
  return h.build();
}

namespace {

// Embeds a vector from the (c+1)^2 basis into the (c'+1)^2 basis, c' >= c.
Eigen::VectorXd embed(const Eigen::VectorXd& v, int from, int to) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(to + 1) * (to + 1));
  for (int i = 0; i <= from; ++i)
    for (int j = 0; j <= from; ++j) out(i * (to + 1) + j) = v(i * (from + 1) + j);
  return out;
}

}  // namespace

double exact_ground_energy_canonical(const QuadraticModeParams& p, const FockTruncation& t) {
  t.validate();
  const auto coarse = fock::lowest_eigenpair(canonical_hamiltonian(p, t.cutoff), kResidualTol);
  const auto fine =
      fock::lowest_eigenpair(canonical_hamiltonian(p, 2 * t.cutoff), kResidualTol, embed(coarse.vector, t.cutoff, 2 * t.cutoff));
  if (std::abs(fine.value - coarse.value) > 1e-8)
    throw TruncationUnconverged("canonical ground energy moved by more than 1e-8 when the cutoff was doubled");
  return coarse.value;
}

ExactGround exact_ground_energy_adaptive(const QuadraticModeParams& p, int start_cutoff, int max_cutoff,
                                         double shift_tol) {
  if (start_cutoff < 4 || max_cutoff < start_cutoff) throw InvalidArgument("exact_ground_energy_adaptive: bad cutoffs");
  ExactGround out;
  int c = start_cutoff;
  auto pair = fock::lowest_eigenpair(canonical_hamiltonian(p, c), kResidualTol);
  out.energy = pair.value;
  out.cutoff = c;
  while (2 * c <= max_cutoff) {
    const auto next = fock::lowest_eigenpair(canonical_hamiltonian(p, 2 * c), kResidualTol, embed(pair.vector, c, 2 * c));
    out.last_shift = std::abs(next.value - pair.value);
    out.energy = next.value;
    out.cutoff = 2 * c;
    pair = next;
    c *= 2;
    if (out.last_shift <= shift_tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

double bracket(double g, double f) {
  if (g == 0.0) return 0.0;
  return g * g / (g + f + std::sqrt(f * (f + 2.0 * g)));
}

double foldy_energy_density(double rho, double ell) {
  if (!(rho > 0.0) || !(ell > 0.0)) throw InvalidArgument("foldy_energy_density: rho and ell must be positive");
  return -scalars::i0_closed_form() * std::pow(rho, 1.25) * ell * ell * ell;
}

FoldyLatticeSum foldy_lattice_sum(double rho, double ell) {
  FoldyLatticeSum out;
  out.rho = rho;
  out.ell = ell;
  out.integral = foldy_energy_density(rho, ell);
  const double dk = 2.0 * kPi / ell;
  // Crossover of g and f sits near |k| = (8 pi rho)^{1/4}; sum well past it.
  const double k_star = std::pow(8.0 * kPi * rho, 0.25);
  const int nmax = static_cast<int>(std::ceil(12.0 * k_star / dk)) + 20;
  const double nmax2 = static_cast<double>(nmax) * nmax;
  double sum = 0.0;
  for (int i = -nmax; i <= nmax; ++i)
    for (int j = -nmax; j <= nmax; ++j)
      for (int l = -nmax; l <= nmax; ++l) {
        const double n2 = static_cast<double>(i) * i + static_cast<double>(j) * j + static_cast<double>(l) * l;
        if (n2 == 0.0 || n2 > nmax2) continue;
        const double k2 = dk * dk * n2;
        sum += -0.5 * bracket(4.0 * kPi * rho / k2, 0.5 * k2);
      }
  // Beyond |k| = K the summand is -(4 pi rho)^2 / (2 k^6) to leading order.
  const double kcut = dk * nmax;
  const double g2 = 16.0 * kPi * kPi * rho * rho;
  sum += -std::pow(ell / (2.0 * kPi), 3) * 4.0 * kPi * g2 / (6.0 * kcut * kcut * kcut);
  out.lattice_sum = sum;
  out.relative_error = std::abs(sum - out.integral) / std::abs(out.integral);
  return out;
}

double v_rr_hat(double k, const CutoffPair& cut) {
  cut.validate();
  const double k2 = k * k;
  return 4.0 * kPi * (1.0 / (k2 + 1.0 / (cut.R * cut.R)) - 1.0 / (k2 + 1.0 / (cut.r * cut.r)));
}

double hq_density(double g, double f) { return -0.5 * std::pow(2.0 * kPi, -3) * bracket(g, f); }

double hq_scalar_bound(const std::array<double, 3>& k, double nu, double ell, const CutoffPair& cut, double gamma,
                       double tpar) {
  const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
  const double g = nu * v_rr_hat(std::sqrt(k2), cut);
  const double m = 1.0 / (ell * std::pow(tpar, 6));
  const double f = 0.5 * ell * ell * ell * gamma * k2 * k2 / (k2 + m * m);
  return hq_density(g, f);
}

}  // namespace dyson::bogolubov

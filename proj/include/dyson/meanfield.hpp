#pragma once

// Dyson's mean-field problem
//
//   -A = inf { 1/2 int |grad Phi|^2 - I0 int Phi^{5/2} : Phi >= 0, int Phi^2 <= 1 },
//
// solved two ways: radial shooting on the scale-free Lane-Emden equation
//   -Lap psi - psi^{3/2} + psi = 0
// followed by an exact rescaling, and a projected gradient flow on a 3D grid.

#include <cmath>
#include <cstddef>
#include <vector>

namespace dyson::meanfield {

/// Radial function sampled on a uniform grid starting at r = 0.
struct RadialProfile {
  std::vector<double> r_grid;
  std::vector<double> values;
  std::vector<double> derivatives;  // dPhi/dr at the grid nodes
  double coupling = 1.0;            // coefficient c in -Lap Phi - c Phi^{3/2} + mu Phi = 0
  double mu = 1.0;
  double mass = 0.0;       // 4 pi int r^2 Phi^2
  double kinetic = 0.0;    // 1/2 int |grad Phi|^2
  double potential = 0.0;  // int Phi^{5/2}
  double energy = 0.0;     // kinetic - I0 * potential

  double step() const { return r_grid.at(1) - r_grid.at(0); }
  double max_value() const;
};

/// Fills mass, kinetic, potential and energy from values and derivatives
/// (composite Simpson on the uniform grid; the grid must have an odd node count).
void update_integrals(RadialProfile& p, double i0);

/// max over interior nodes of |-Lap Phi - coupling Phi^{3/2} + mu Phi| with
/// second-order central differences. Throws GridTooCoarse below 64 nodes.
double el_residual(const RadialProfile& p);

struct ShootingConfig {
  double psi0_lo = 1.0;   // bracket for psi(0)
  double psi0_hi = 10.0;
  double step = 1e-3;     // output grid spacing
  double r_max = 60.0;    // integration horizon for shot classification
  double rtol = 1e-13;
  double tail_floor = 1e-14;  // grid ends once the attached tail drops below this times psi(0)
};

enum class ShotOutcome { Overshoot, Undershoot };

/// Integrates from r = 0 with psi(0) = psi0, psi'(0) = 0. Overshoot: psi crosses zero.
/// Undershoot: psi' turns positive while psi > 0.
ShotOutcome shoot(double psi0, const ShootingConfig& cfg = {});

struct NormalizedSolution {
  RadialProfile profile;  // coupling = 1, mu = 1
  double psi0 = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double match_radius = 0.0;  // where the exp(-r)/r tail is attached
};

/// Positive decaying solution of -Lap psi - psi^{3/2} + psi = 0 by bisection shooting.
NormalizedSolution solve_normalized(const ShootingConfig& cfg = {});

/// Phi(x) = b psi(c x) with c^2 = mu, b = 4 mu^2 / (25 I0^2),
/// mu = (625 I0^4 / (16 int psi^2))^{2/5}; the result has unit mass and
/// solves -Lap Phi - (5/2) I0 Phi^{3/2} + mu Phi = 0.
RadialProfile rescale_to_unit_mass(const RadialProfile& psi, double i0);

/// Minimizer of the mean-field functional via shooting.
RadialProfile minimizer(const ShootingConfig& cfg = {});

/// A = -energy of the shooting minimizer.
double dyson_constant(const ShootingConfig& cfg = {});

/// Energy of the mass-preserving dilation Phi_l(x) = l^{3/2} Phi(l x).
double dilated_energy(const RadialProfile& p, double lambda, double i0);

struct ScalingCheck {
  double n = 1.0;
  double energy = 0.0;          // -A N^{7/5}
  double quadrature_lhs = 0.0;  // 1/2 int |grad sqrt(rho)|^2 - I0 int rho^{5/4}
  double relative_error = 0.0;
};

/// -A N^{7/5}, with the scaling identity checked on rho(x) = N^{8/5} Phi(N^{1/5} x)^2
/// by adaptive quadrature of a Hermite interpolant of Phi.
ScalingCheck dyson_energy(int n, const RadialProfile& phi, double i0);
double dyson_energy(int n);

// ---------------------------------------------------------------------------
// 3D gradient-flow oracle

/// Nonnegative field on the cube [-extent, extent]^3 with n nodes per axis,
/// zero outside. Nodes on the faces are held at zero.
struct GridField3D {
  double extent = 1.0;
  std::size_t n = 0;
  std::vector<double> values;

  double spacing() const { return 2.0 * extent / static_cast<double>(n - 1); }
  double coord(std::size_t i) const { return -extent + spacing() * static_cast<double>(i); }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return (i * n + j) * n + k; }
};

/// Field sampled from a radial function f(|x|).
template <class F>
GridField3D sample_radial(double extent, std::size_t n, F&& f);

double grid_mass(const GridField3D& f);

struct GridEnergy {
  double kinetic = 0.0;
  double potential = 0.0;
  double energy = 0.0;
};

/// Discrete functional: 1/2 h^3 sum over grid edges ((Phi_a - Phi_b)/h)^2 - I0 h^3 sum Phi^{5/2}.
GridEnergy grid_energy(const GridField3D& f, double i0);

struct FlowOptions {
  std::size_t max_steps = 20000;
  double dt = 0.0;            // 0: start at 0.95 h^2 / 6
  double energy_tol = 1e-13;  // relative energy change that counts as converged
  int max_rejections = 10;    // consecutive energy increases tolerated before Diverged
};

struct FlowResult {
  GridField3D field;
  std::vector<double> energy_trace;  // energy after each accepted step
  std::size_t steps = 0;
  bool converged = false;
};

/// Projected gradient descent on the discrete functional with mass
/// renormalization and a positivity clamp after every step.
FlowResult gradient_flow_minimize(GridField3D start, double i0, const FlowOptions& opts = {});

/// Trilinear resampling onto a grid with a different node count (same extent).
GridField3D resample(const GridField3D& f, std::size_t n);

struct FlowEstimate {
  std::vector<std::size_t> grid_sizes;
  std::vector<double> energies;  // converged discrete energies per grid
  double extrapolated = 0.0;     // Richardson extrapolation in h^2 over the two finest grids
};

/// Coarse-to-fine gradient flow from a Gaussian start; returns -A estimates.
FlowEstimate flow_dyson_estimate(double extent, const std::vector<std::size_t>& sizes, double i0);

/// Closed-form kinetic, potential and energy of the unit-mass Gaussian
/// Phi = (2 pi s^2)^{-3/4} exp(-|x|^2 / (4 s^2)).
GridEnergy gaussian_energy(double width, double i0);

/// Width minimizing gaussian_energy; sets the length scale of the flow box.
double gaussian_trial_width(double i0);

/// Box half-width used by default for the flow oracle (9 Gaussian trial widths).
double default_flow_extent(double i0);

// ---------------------------------------------------------------------------

template <class F>
GridField3D sample_radial(double extent, std::size_t n, F&& f) {
  GridField3D g;
  g.extent = extent;
  g.n = n;
  g.values.assign(n * n * n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i)
    for (std::size_t j = 1; j + 1 < n; ++j)
      for (std::size_t k = 1; k + 1 < n; ++k) {
        const double x = g.coord(i), y = g.coord(j), z = g.coord(k);
        g.values[g.index(i, j, k)] = f(std::sqrt(x * x + y * y + z * z));
      }
  return g;
}

}  // namespace dyson::meanfield

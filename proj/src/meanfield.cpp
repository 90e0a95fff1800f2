#include "dyson/meanfield.hpp"

#include <algorithm>
#include <array>
#include <boost/math/interpolators/cubic_hermite.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dyson/errors.hpp"
#include "dyson/quadrature.hpp"
#include "dyson/scalars.hpp"

namespace dyson::meanfield {

namespace {

constexpr double kPi = std::numbers::pi;
using State = std::array<double, 2>;

double pow32(double x) { return x > 0.0 ? x * std::sqrt(x) : 0.0; }
double pow52(double x) { return x > 0.0 ? x * x * std::sqrt(x) : 0.0; }

// Composite Simpson over a uniform grid with an odd number of nodes.
template <class F>
double simpson(const std::vector<double>& r, F&& f) {
  const std::size_t n = r.size();
  const double h = r[1] - r[0];
  double s = f(0) + f(n - 1);
  for (std::size_t i = 1; i + 1 < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i);
  return s * h / 3.0;
}

struct LaneEmden {
  void operator()(const State& y, State& dy, double r) const {
    dy[0] = y[1];
    dy[1] = -2.0 * y[1] / r - pow32(y[0]) + y[0];
  }
};

// Series start off the r = 0 coordinate singularity.
constexpr double kStartRadius = 1e-4;

State series_start(double psi0) {
  const double curvature = (psi0 - pow32(psi0)) / 3.0;  // psi''(0)
  return {psi0 + 0.5 * curvature * kStartRadius * kStartRadius, curvature * kStartRadius};
}

auto make_stepper(double rtol) {
  using namespace boost::numeric::odeint;
  return make_dense_output(rtol, rtol, runge_kutta_dopri5<State>());
}

struct Trajectory {
  std::vector<double> values;
  std::vector<double> derivatives;
};

// Samples psi on r_i = i*h until the shot classifies itself or r_limit is reached.
Trajectory sample_shot(double psi0, double h, double r_limit, double rtol) {
  Trajectory t;
  t.values.push_back(psi0);
  t.derivatives.push_back(0.0);
  auto stepper = make_stepper(rtol);
  stepper.initialize(series_start(psi0), kStartRadius, 1e-5);
  LaneEmden sys;
  std::size_t next = 1;
  while (stepper.current_time() < r_limit) {
    stepper.do_step(sys);
    while (static_cast<double>(next) * h <= stepper.current_time()) {
      State y;
      stepper.calc_state(static_cast<double>(next) * h, y);
      if (y[0] <= 0.0 || y[1] > 0.0) return t;
      t.values.push_back(y[0]);
      t.derivatives.push_back(y[1]);
      ++next;
    }
    const State& y = stepper.current_state();
    if (y[0] <= 0.0 || y[1] > 0.0) return t;
  }
  return t;
}

// Decaying solution on nodes first..last (spacing h), integrated inward from
// last*h with psi = B e^{-r}/r, B chosen by secant so psi(first*h) = target.
Trajectory inward_tail(std::size_t first, std::size_t last, double h, double target, double guess, double rtol) {
  using namespace boost::numeric::odeint;
  std::vector<double> times;
  for (std::size_t i = last + 1; i-- > first;) times.push_back(static_cast<double>(i) * h);
  auto run = [&](double amplitude) {
    Trajectory t;
    t.values.assign(last - first + 1, 0.0);
    t.derivatives.assign(last - first + 1, 0.0);
    const double r0 = times.front();
    const double v0 = amplitude * std::exp(-r0) / r0;
    State y{v0, -v0 * (1.0 + 1.0 / r0)};
    std::size_t slot = last - first;
    integrate_times(make_dense_output(rtol * 1e-3, rtol, runge_kutta_dopri5<State>()), LaneEmden{}, y, times.begin(), times.end(), -h,
                    [&](const State& s, double) {
                      t.values[slot] = s[0];
                      t.derivatives[slot] = s[1];
                      if (slot > 0) --slot;
                    });
    return t;
  };
  double b0 = guess, b1 = guess * 1.01;
  Trajectory t0 = run(b0), t1 = run(b1);
  for (int it = 0; it < 50; ++it) {
    const double f0 = t0.values.front() - target, f1 = t1.values.front() - target;
    if (std::abs(f1) <= 1e-14 * target || f1 == f0) break;
    const double b2 = b1 - f1 * (b1 - b0) / (f1 - f0);
    b0 = b1;
    t0 = std::move(t1);
    b1 = b2;
    t1 = run(b1);
  }
  return t1;
}

}  // namespace

double RadialProfile::max_value() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

void update_integrals(RadialProfile& p, double i0) {
  const auto& r = p.r_grid;
  if (r.size() < 3 || r.size() % 2 == 0) throw InvalidArgument("update_integrals: need an odd node count >= 3");
  p.mass = 4.0 * kPi * simpson(r, [&](std::size_t i) { return r[i] * r[i] * p.values[i] * p.values[i]; });
  p.kinetic = 2.0 * kPi * simpson(r, [&](std::size_t i) { return r[i] * r[i] * p.derivatives[i] * p.derivatives[i]; });
  p.potential = 4.0 * kPi * simpson(r, [&](std::size_t i) { return r[i] * r[i] * pow52(p.values[i]); });
  p.energy = p.kinetic - i0 * p.potential;
}

double el_residual(const RadialProfile& p) {
  const std::size_t n = p.r_grid.size();
  if (n < 64) throw GridTooCoarse("el_residual: need at least 64 nodes");
  const double h = p.step();
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double r = p.r_grid[i];
    const double second = (p.values[i + 1] - 2.0 * p.values[i] + p.values[i - 1]) / (h * h);
    const double first = (p.values[i + 1] - p.values[i - 1]) / (2.0 * h);
    const double lap = second + 2.0 * first / r;
    worst = std::max(worst, std::abs(-lap - p.coupling * pow32(p.values[i]) + p.mu * p.values[i]));
  }
  return worst;
}

ShotOutcome shoot(double psi0, const ShootingConfig& cfg) {
  auto stepper = make_stepper(cfg.rtol);
  stepper.initialize(series_start(psi0), kStartRadius, 1e-5);
  LaneEmden sys;
  while (stepper.current_time() < cfg.r_max) {
    stepper.do_step(sys);
    const State& y = stepper.current_state();
    if (y[0] < 0.0) return ShotOutcome::Overshoot;
    if (y[1] > 0.0) return ShotOutcome::Undershoot;
  }
  // Neither event before the horizon: the trajectory never crossed zero.
  return ShotOutcome::Undershoot;
}

NormalizedSolution solve_normalized(const ShootingConfig& cfg) {
  double lo = cfg.psi0_lo, hi = cfg.psi0_hi;
  if (shoot(lo, cfg) != ShotOutcome::Undershoot || shoot(hi, cfg) != ShotOutcome::Overshoot) {
    std::ostringstream msg;
    msg << "solve_normalized: psi(0) in [" << lo << ", " << hi << "] does not bracket the decaying solution";
    throw BracketNotFound(msg.str());
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (shoot(mid, cfg) == ShotOutcome::Overshoot ? hi : lo) = mid;
  }

  const double h = cfg.step;
  const auto below = sample_shot(lo, h, cfg.r_max, cfg.rtol);
  const auto above = sample_shot(hi, h, cfg.r_max, cfg.rtol);
  const std::size_t common = std::min(below.values.size(), above.values.size());

  // The bracketing shots agree until the growing mode e^{r}/r takes over;
  // keep the mean trajectory while they agree to 1e-9 relative.
  std::size_t match = 1;
  for (std::size_t i = 1; i < common; ++i) {
    const double mean = 0.5 * (below.values[i] + above.values[i]);
    if (std::abs(below.values[i] - above.values[i]) > 1e-9 * mean) break;
    match = i;
  }
  if (match < 64) throw BracketNotFound("solve_normalized: shots separate before the profile is resolved");

  NormalizedSolution out;
  out.psi0 = 0.5 * (lo + hi);
  out.bracket_lo = lo;
  out.bracket_hi = hi;
  out.match_radius = static_cast<double>(match) * h;

  RadialProfile& p = out.profile;
  p.coupling = 1.0;
  p.mu = 1.0;
  for (std::size_t i = 0; i <= match; ++i) {
    p.r_grid.push_back(static_cast<double>(i) * h);
    p.values.push_back(0.5 * (below.values[i] + above.values[i]));
    p.derivatives.push_back(0.5 * (below.derivatives[i] + above.derivatives[i]));
  }
  // Far field. Integrating the decaying branch inward is stable, so start
  // from B e^{-r}/r far out and tune B until it meets the shot at the match radius.
  const double rm = out.match_radius;
  const double target = p.values.back();
  const double guess = target * rm * std::exp(rm);
  double r_far = rm;
  while (guess * std::exp(-r_far) / r_far > cfg.tail_floor * out.psi0) r_far += 1.0;
  std::size_t last = static_cast<std::size_t>(std::ceil(r_far / h));
  if ((last + 1) % 2 == 0) ++last;  // odd node count for Simpson
  const auto tail = inward_tail(match, last, h, target, guess, cfg.rtol);
  for (std::size_t i = match + 1; i <= last; ++i) {
    p.r_grid.push_back(static_cast<double>(i) * h);
    p.values.push_back(tail.values[i - match]);
    p.derivatives.push_back(tail.derivatives[i - match]);
  }
  update_integrals(p, scalars::i0_closed_form());
  return out;
}

RadialProfile rescale_to_unit_mass(const RadialProfile& psi, double i0) {
  const double psi_mass = psi.mass;
  const double mu = std::pow(625.0 * std::pow(i0, 4) / (16.0 * psi_mass), 0.4);
  const double c = std::sqrt(mu);
  const double b = 4.0 * mu * mu / (25.0 * i0 * i0);
  RadialProfile phi;
  phi.coupling = 2.5 * i0;
  phi.mu = mu;
  phi.r_grid.reserve(psi.r_grid.size());
  for (std::size_t i = 0; i < psi.r_grid.size(); ++i) {
    phi.r_grid.push_back(psi.r_grid[i] / c);
    phi.values.push_back(b * psi.values[i]);
    phi.derivatives.push_back(b * c * psi.derivatives[i]);
  }
  update_integrals(phi, i0);
  return phi;
}

RadialProfile minimizer(const ShootingConfig& cfg) {
  return rescale_to_unit_mass(solve_normalized(cfg).profile, scalars::i0_closed_form());
}

double dyson_constant(const ShootingConfig& cfg) { return -minimizer(cfg).energy; }

double dilated_energy(const RadialProfile& p, double lambda, double i0) {
  RadialProfile d = p;
  const double amp = std::pow(lambda, 1.5);
  for (std::size_t i = 0; i < d.r_grid.size(); ++i) {
    d.r_grid[i] = p.r_grid[i] / lambda;
    d.values[i] = amp * p.values[i];
    d.derivatives[i] = amp * lambda * p.derivatives[i];
  }
  update_integrals(d, i0);
  return d.energy;
}

ScalingCheck dyson_energy(int n, const RadialProfile& phi, double i0) {
  if (n < 1) throw InvalidArgument("dyson_energy: N must be positive");
  ScalingCheck out;
  out.n = n;
  const double nn = static_cast<double>(n);
  out.energy = phi.energy * std::pow(nn, 1.4);

  auto x = phi.r_grid;
  auto y = phi.values;
  auto dy = phi.derivatives;
  const double r_end = x.back();
  boost::math::interpolators::cubic_hermite<std::vector<double>> spline(std::move(x), std::move(y), std::move(dy));

  // sqrt(rho)(y) = N^{4/5} Phi(N^{1/5} y)
  const double stretch = std::pow(nn, 0.2);
  const double amp = std::pow(nn, 0.8);
  const double y_end = r_end / stretch;
  auto kinetic_density = [&](double r) {
    const double d = amp * stretch * spline.prime(r * stretch);
    return 2.0 * kPi * r * r * d * d;
  };
  auto potential_density = [&](double r) {
    const double s = amp * spline(r * stretch);
    return 4.0 * kPi * r * r * pow52(s);  // rho^{5/4} = sqrt(rho)^{5/2}
  };
  const double scale = std::abs(out.energy);
  const double kin = quad::adaptive(kinetic_density, 0.0, y_end, 1e-11 * scale).value;
  const double pot = quad::adaptive(potential_density, 0.0, y_end, 1e-11 * scale / i0).value;
  out.quadrature_lhs = kin - i0 * pot;
  out.relative_error = std::abs(out.quadrature_lhs - out.energy) / scale;
  return out;
}

double dyson_energy(int n) {
  if (n < 1) throw InvalidArgument("dyson_energy: N must be positive");
  return -dyson_constant() * std::pow(static_cast<double>(n), 1.4);
}

// ---------------------------------------------------------------------------

double grid_mass(const GridField3D& f) {
  const double h = f.spacing();
  double s = 0.0;
  for (double v : f.values) s += v * v;
  return s * h * h * h;
}

GridEnergy grid_energy(const GridField3D& f, double i0) {
  const std::size_t n = f.n;
  const double h = f.spacing();
  double grad = 0.0, pot = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const double v = f.values[f.index(i, j, k)];
        pot += pow52(v);
        if (i + 1 < n) grad += std::pow(f.values[f.index(i + 1, j, k)] - v, 2);
        if (j + 1 < n) grad += std::pow(f.values[f.index(i, j + 1, k)] - v, 2);
        if (k + 1 < n) grad += std::pow(f.values[f.index(i, j, k + 1)] - v, 2);
      }
  GridEnergy e;
  e.kinetic = 0.5 * grad * h;  // h^3 * (diff / h)^2
  e.potential = pot * h * h * h;
  e.energy = e.kinetic - i0 * e.potential;
  return e;
}

namespace {

void normalize(GridField3D& f) {
  const double m = grid_mass(f);
  if (!(m > 0.0)) throw Diverged("gradient flow: field collapsed to zero");
  const double s = 1.0 / std::sqrt(m);
  for (double& v : f.values) v *= s;
}

}  // namespace

FlowResult gradient_flow_minimize(GridField3D start, double i0, const FlowOptions& opts) {
  const std::size_t n = start.n;
  if (n < 5) throw InvalidArgument("gradient_flow_minimize: need at least 5 nodes per axis");
  const double h = start.spacing();
  const double dt_max = 0.99 * h * h / 6.0;
  double dt = opts.dt > 0.0 ? std::min(opts.dt, dt_max) : 0.95 * h * h / 6.0;

  FlowResult out;
  out.field = std::move(start);
  for (double& v : out.field.values) v = std::max(v, 0.0);
  normalize(out.field);
  double energy = grid_energy(out.field, i0).energy;

  std::vector<double> gradient(out.field.values.size(), 0.0);
  GridField3D trial = out.field;
  const double inv_h2 = 1.0 / (h * h);
  int rejections = 0;

  while (out.steps < opts.max_steps) {
    const auto& v = out.field.values;
    for (std::size_t i = 1; i + 1 < n; ++i)
      for (std::size_t j = 1; j + 1 < n; ++j)
        for (std::size_t k = 1; k + 1 < n; ++k) {
          const std::size_t c = out.field.index(i, j, k);
          const double lap = (v[c + n * n] + v[c - n * n] + v[c + n] + v[c - n] + v[c + 1] + v[c - 1] - 6.0 * v[c]) * inv_h2;
          gradient[c] = -lap - 2.5 * i0 * pow32(v[c]);
        }

    for (;;) {
      for (std::size_t c = 0; c < v.size(); ++c) trial.values[c] = std::max(0.0, v[c] - dt * gradient[c]);
      normalize(trial);
      const double e_new = grid_energy(trial, i0).energy;
      if (e_new <= energy) {
        const double change = energy - e_new;
        std::swap(out.field.values, trial.values);
        energy = e_new;
        out.energy_trace.push_back(energy);
        ++out.steps;
        rejections = 0;
        dt = std::min(dt * 1.05, dt_max);
        if (change <= opts.energy_tol * std::abs(energy)) {
          out.converged = true;
          return out;
        }
        break;
      }
      if (++rejections >= opts.max_rejections) throw Diverged("gradient flow: energy increased after repeated step halving");
      dt *= 0.5;
    }
  }
  return out;
}

GridField3D resample(const GridField3D& f, std::size_t n) {
  GridField3D g;
  g.extent = f.extent;
  g.n = n;
  g.values.assign(n * n * n, 0.0);
  const double hf = f.spacing();
  auto at = [&](std::size_t i, std::size_t j, std::size_t k) { return f.values[f.index(i, j, k)]; };
  for (std::size_t i = 1; i + 1 < n; ++i)
    for (std::size_t j = 1; j + 1 < n; ++j)
      for (std::size_t k = 1; k + 1 < n; ++k) {
        const double p[3] = {(g.coord(i) + f.extent) / hf, (g.coord(j) + f.extent) / hf, (g.coord(k) + f.extent) / hf};
        std::size_t base[3];
        double frac[3];
        for (int d = 0; d < 3; ++d) {
          base[d] = std::min(static_cast<std::size_t>(p[d]), f.n - 2);
          frac[d] = p[d] - static_cast<double>(base[d]);
        }
        double s = 0.0;
        for (int c = 0; c < 8; ++c) {
          const int a = c >> 2 & 1, b = c >> 1 & 1, e = c & 1;
          const double w = (a ? frac[0] : 1 - frac[0]) * (b ? frac[1] : 1 - frac[1]) * (e ? frac[2] : 1 - frac[2]);
          s += w * at(base[0] + a, base[1] + b, base[2] + e);
        }
        g.values[g.index(i, j, k)] = s;
      }
  return g;
}

FlowEstimate flow_dyson_estimate(double extent, const std::vector<std::size_t>& sizes, double i0) {
  if (sizes.size() < 2) throw InvalidArgument("flow_dyson_estimate: need at least two grids");
  FlowEstimate est;
  est.grid_sizes = sizes;
  const double sigma = extent / 8.0;
  GridField3D field = sample_radial(extent, sizes.front(), [sigma](double r) { return std::exp(-r * r / (4.0 * sigma * sigma)); });
  FlowOptions opts;
  opts.max_steps = 200000;
  opts.energy_tol = 1e-12;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    if (s > 0) field = resample(field, sizes[s]);
    auto res = gradient_flow_minimize(std::move(field), i0, opts);
    if (!res.converged) throw NonConvergence("flow_dyson_estimate: gradient flow hit the step limit");
    field = std::move(res.field);
    est.energies.push_back(grid_energy(field, i0).energy);
  }
  const std::size_t m = sizes.size();
  const double h1 = 2.0 * extent / static_cast<double>(sizes[m - 2] - 1);
  const double h2 = 2.0 * extent / static_cast<double>(sizes[m - 1] - 1);
  est.extrapolated = (h1 * h1 * est.energies[m - 1] - h2 * h2 * est.energies[m - 2]) / (h1 * h1 - h2 * h2);
  return est;
}

GridEnergy gaussian_energy(double width, double i0) {
  const double s2 = width * width;
  const double amp = std::pow(2.0 * kPi * s2, -0.75);
  GridEnergy e;
  e.kinetic = 3.0 / (8.0 * s2);
  e.potential = std::pow(amp, 2.5) * std::pow(8.0 * kPi * s2 / 5.0, 1.5);
  e.energy = e.kinetic - i0 * e.potential;
  return e;
}

double gaussian_trial_width(double i0) {
  // energy = 3/(8 s^2) - i0 K s^{-3/4}; stationary at s^{-5/4} = i0 K.
  const double k = std::pow(2.0 * kPi, -15.0 / 8.0) * std::pow(8.0 * kPi / 5.0, 1.5);
  return std::pow(i0 * k, -0.8);
}

double default_flow_extent(double i0) { return 9.0 * gaussian_trial_width(i0); }

}  // namespace dyson::meanfield

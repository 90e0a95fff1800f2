#include "dyson/lattice.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "dyson/errors.hpp"
#include "dyson/quadrature.hpp"

namespace dyson::lattice {

LatticeField::LatticeField(Site origin_, std::array<int, 3> dims_, double fill) : origin(origin_), dims(dims_) {
  for (int d : dims)
    if (d < 1) throw InvalidArgument("LatticeField: dims must be positive");
  values.assign(static_cast<std::size_t>(dims[0]) * dims[1] * dims[2], fill);
}

bool LatticeField::contains(const Site& s) const {
  for (int i = 0; i < 3; ++i)
    if (s[i] < origin[i] || s[i] >= origin[i] + dims[i]) return false;
  return true;
}

std::size_t LatticeField::flat(const Site& s) const {
  return (static_cast<std::size_t>(s[0] - origin[0]) * dims[1] + static_cast<std::size_t>(s[1] - origin[1])) * dims[2] +
         static_cast<std::size_t>(s[2] - origin[2]);
}

Site LatticeField::site(std::size_t f) const {
  const int z = static_cast<int>(f % dims[2]);
  f /= dims[2];
  const int y = static_cast<int>(f % dims[1]);
  const int x = static_cast<int>(f / dims[1]);
  return {origin[0] + x, origin[1] + y, origin[2] + z};
}

double LatticeField::at(const Site& s) const { return contains(s) ? values[flat(s)] : 0.0; }

double& LatticeField::ref(const Site& s) {
  if (!contains(s)) throw InvalidArgument("LatticeField::ref: site outside the box");
  return values[flat(s)];
}

LatticeField delta_field() { return LatticeField({0, 0, 0}, {1, 1, 1}, 1.0); }

namespace {

// Calls f(sigma) for every site of the box grown by `pad` on every side.
template <class F>
void for_each_padded(const LatticeField& s, int pad, F&& f) {
  for (int x = s.origin[0] - pad; x < s.origin[0] + s.dims[0] + pad; ++x)
    for (int y = s.origin[1] - pad; y < s.origin[1] + s.dims[1] + pad; ++y)
      for (int z = s.origin[2] - pad; z < s.origin[2] + s.dims[2] + pad; ++z) f(Site{x, y, z});
}

double ordered_pair_sum(const LatticeField& s, int norm2) {
  double total = 0.0;
  for_each_padded(s, 1, [&](const Site& a) {
    const double va = s.at(a);
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dz = -1; dz <= 1; ++dz) {
          if (dx * dx + dy * dy + dz * dz != norm2) continue;
          const double d = va - s.at({a[0] + dx, a[1] + dy, a[2] + dz});
          total += d * d;
        }
  });
  return total;
}

}  // namespace

double lattice_energy(const LatticeField& s, PairConvention convention) {
  const double ordered = ordered_pair_sum(s, 2) / 12.0 + ordered_pair_sum(s, 3) / 24.0;
  return convention == PairConvention::Ordered ? ordered : 0.5 * ordered;
}

double nearest_neighbor_energy(const LatticeField& s) { return ordered_pair_sum(s, 1); }

const std::array<std::array<int, 3>, 8>& corner_offsets() {
  static const std::array<std::array<int, 3>, 8> taus = [] {
    std::array<std::array<int, 3>, 8> t{};
    for (int b = 0; b < 8; ++b) t[b] = {2 * ((b >> 2) & 1) - 1, 2 * ((b >> 1) & 1) - 1, 2 * (b & 1) - 1};
    return t;
  }();
  return taus;
}

double corner_weight(const std::array<int, 3>& tau, const std::array<double, 3>& x) {
  return (0.5 + tau[0] * x[0]) * (0.5 + tau[1] * x[1]) * (0.5 + tau[2] * x[2]);
}

TrilinearInterpolant::TrilinearInterpolant(LatticeField s) : s_(std::move(s)) {}

std::array<double, 8> TrilinearInterpolant::cube_values(const Site& low) const {
  std::array<double, 8> v{};
  for (int b = 0; b < 8; ++b) v[b] = s_.at({low[0] + ((b >> 2) & 1), low[1] + ((b >> 1) & 1), low[2] + (b & 1)});
  return v;
}

namespace {

struct Local {
  Site low;
  std::array<double, 3> y;  // position relative to the cube centre
};

Local locate(const std::array<double, 3>& x) {
  Local l{};
  for (int i = 0; i < 3; ++i) {
    l.low[i] = static_cast<int>(std::floor(x[i]));
    l.y[i] = x[i] - l.low[i] - 0.5;
  }
  return l;
}

}  // namespace

double TrilinearInterpolant::operator()(const std::array<double, 3>& x) const {
  const auto [low, y] = locate(x);
  const auto v = cube_values(low);
  double out = 0.0;
  for (int b = 0; b < 8; ++b) out += corner_weight(corner_offsets()[b], y) * v[b];
  return out;
}

std::array<double, 3> TrilinearInterpolant::gradient(const std::array<double, 3>& x) const {
  const auto [low, y] = locate(x);
  const auto v = cube_values(low);
  std::array<double, 3> g{0.0, 0.0, 0.0};
  for (int b = 0; b < 8; ++b) {
    const auto& t = corner_offsets()[b];
    const std::array<double, 3> f{0.5 + t[0] * y[0], 0.5 + t[1] * y[1], 0.5 + t[2] * y[2]};
    g[0] += t[0] * f[1] * f[2] * v[b];
    g[1] += f[0] * t[1] * f[2] * v[b];
    g[2] += f[0] * f[1] * t[2] * v[b];
  }
  return g;
}

std::vector<Site> TrilinearInterpolant::cubes() const {
  std::vector<Site> out;
  const auto& o = s_.origin;
  const auto& d = s_.dims;
  for (int x = o[0] - 1; x < o[0] + d[0]; ++x)
    for (int y = o[1] - 1; y < o[1] + d[1]; ++y)
      for (int z = o[2] - 1; z < o[2] + d[2]; ++z) out.push_back({x, y, z});
  return out;
}

TrilinearInterpolant interpolate(const LatticeField& s) { return TrilinearInterpolant(s); }

namespace {

// Exact element matrices of the unit cube for the corner order of corner_offsets().
// 1D: stiffness [[1,-1],[-1,1]], mass [[1/3,1/6],[1/6,1/3]].
Eigen::Matrix<double, 8, 8> make_stiffness() {
  const double k1[2][2] = {{1.0, -1.0}, {-1.0, 1.0}};
  const double m1[2][2] = {{1.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 1.0 / 3.0}};
  Eigen::Matrix<double, 8, 8> k;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      const int ca[3] = {(a >> 2) & 1, (a >> 1) & 1, a & 1};
      const int cb[3] = {(b >> 2) & 1, (b >> 1) & 1, b & 1};
      double sum = 0.0;
      for (int i = 0; i < 3; ++i) {
        double term = k1[ca[i]][cb[i]];
        for (int j = 0; j < 3; ++j)
          if (j != i) term *= m1[ca[j]][cb[j]];
        sum += term;
      }
      k(a, b) = sum;
    }
  return k;
}

const Eigen::Matrix<double, 8, 8>& stiffness() {
  static const Eigen::Matrix<double, 8, 8> k = make_stiffness();
  return k;
}

// Laplacian of a graph on the 8 corners; `edge` decides which pairs are joined.
template <class Pred>
Eigen::Matrix<double, 8, 8> corner_graph(Pred edge) {
  Eigen::Matrix<double, 8, 8> q = Eigen::Matrix<double, 8, 8>::Zero();
  for (int a = 0; a < 8; ++a)
    for (int b = a + 1; b < 8; ++b) {
      if (!edge(a, b)) continue;
      q(a, a) += 1.0;
      q(b, b) += 1.0;
      q(a, b) -= 1.0;
      q(b, a) -= 1.0;
    }
  return q;
}

// Generalized eigenvalues of (num, den) restricted to vectors orthogonal to constants.
Eigen::VectorXd restricted_eigenvalues(const Eigen::Matrix<double, 8, 8>& num, const Eigen::Matrix<double, 8, 8>& den) {
  Eigen::Matrix<double, 8, 8> full = Eigen::Matrix<double, 8, 8>::Identity();
  full.col(0).setConstant(1.0);
  const Eigen::HouseholderQR<Eigen::Matrix<double, 8, 8>> qr(full);
  const Eigen::Matrix<double, 8, 8> q = qr.householderQ();
  const Eigen::Matrix<double, 8, 7> p = q.rightCols<7>();
  const Eigen::MatrixXd a = p.transpose() * num * p;
  const Eigen::MatrixXd b = p.transpose() * den * p;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b);
  return es.eigenvalues();
}

}  // namespace

double cube_dirichlet_energy(const std::array<double, 8>& corners) {
  const Eigen::Map<const Eigen::Matrix<double, 8, 1>> v(corners.data());
  return v.dot(stiffness() * v);
}

double dirichlet_energy(const TrilinearInterpolant& phi) {
  double total = 0.0;
  for (const auto& c : phi.cubes()) total += cube_dirichlet_energy(phi.cube_values(c));
  return total;
}

double phi_power_integral(const TrilinearInterpolant& phi, double beta, int order) {
  const auto rule = quad::gauss_legendre(order, -0.5, 0.5);
  const std::size_t n = rule.nodes.size();
  double total = 0.0;
  for (const auto& c : phi.cubes()) {
    const auto v = phi.cube_values(c);
    if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) continue;
    for (double x : v)
      if (x < 0.0) throw InvalidArgument("phi_power_integral: field must be nonnegative");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          const std::array<double, 3> y{rule.nodes[i], rule.nodes[j], rule.nodes[k]};
          double val = 0.0;
          for (int b = 0; b < 8; ++b) val += corner_weight(corner_offsets()[b], y) * v[b];
          total += rule.weights[i] * rule.weights[j] * rule.weights[k] * std::pow(std::max(val, 0.0), beta);
        }
  }
  return total;
}

double power_sum(const LatticeField& s, double p) {
  double total = 0.0;
  for (double v : s.values) total += std::pow(std::abs(v), p);
  return total;
}

double jensen_constant(double beta) { return 2.0 * beta; }

JensenGap jensen_gap(std::span<const double> values, std::span<const double> weights, double beta) {
  if (values.size() != weights.size() || values.empty()) throw InvalidArgument("jensen_gap: size mismatch");
  if (beta < 1.0) throw InvalidArgument("jensen_gap: beta must be at least 1");
  double wsum = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (values[j] < 0.0 || weights[j] < 0.0) throw InvalidArgument("jensen_gap: negative entries");
    wsum += weights[j];
  }
  if (std::abs(wsum - 1.0) > 1e-12) throw InvalidArgument("jensen_gap: weights must sum to 1");

  JensenGap g;
  double y = 0.0;
  double powsum = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    y += weights[j] * values[j];
    g.mid += weights[j] * std::pow(values[j], beta);
    powsum += std::pow(values[j], beta - 1.0);
  }
  double spread2 = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j) spread2 += (values[i] - values[j]) * (values[i] - values[j]);
  g.lhs = std::pow(y, beta);
  g.spread = std::sqrt(spread2);
  g.constant = jensen_constant(beta);
  g.rhs = g.lhs + g.constant * g.spread * powsum;
  return g;
}

double corner_spread_constant() {
  static const double k = [] {
    const auto all_pairs = corner_graph([](int, int) { return true; });
    return restricted_eigenvalues(all_pairs, stiffness()).maxCoeff();
  }();
  return k;
}

double Equivalence::constant() const { return std::max(c_hi, 1.0 / c_lo); }

Equivalence nearest_neighbor_equivalence() {
  // Corners a and b share a cube edge when their binary labels differ in one bit.
  const auto edges = corner_graph([](int a, int b) { return std::popcount(static_cast<unsigned>(a ^ b)) == 1; });
  const auto ev = restricted_eigenvalues(stiffness(), edges);
  // Every lattice edge lies in 4 cubes and the ordered sum counts it twice,
  // so NN(S) = (1/2) sum over cubes of the per-cube edge form.
  return {2.0 * ev.minCoeff(), 2.0 * ev.maxCoeff()};
}

double lower_chain_constant(double beta) {
  if (beta < 2.0) throw InvalidArgument("lower_chain_constant: beta must be at least 2");
  const double p = beta / (beta - 1.0);
  return 8.0 * std::pow(2.0 * beta, beta) / beta * std::pow(8.0 / p, beta - 1.0) *
         std::pow(corner_spread_constant(), beta / 2.0);
}

double five_halves_constant() { return 400.0 * corner_spread_constant(); }

double five_halves_sobolev_constant(double c_sob) {
  return 13.5 * std::pow(five_halves_constant(), 4) * c_sob * c_sob * c_sob;
}

LpBoundsReport lattice_lp_bounds(const LatticeField& s, double beta, double delta, double c_sob) {
  if (beta < 2.0) throw InvalidArgument("lattice_lp_bounds: beta must be at least 2");
  if (!(delta > 0.0)) throw InvalidArgument("lattice_lp_bounds: delta must be positive");
  for (double v : s.values)
    if (v < 0.0) throw InvalidArgument("lattice_lp_bounds: field must be nonnegative");
  const auto phi = interpolate(s);
  LpBoundsReport r;
  r.beta = beta;
  r.delta = delta;
  r.sum_beta = power_sum(s, beta);
  r.integral = phi_power_integral(phi, beta, 8);
  r.integral_refined = phi_power_integral(phi, beta, 12);
  r.energy = lattice_energy(s);
  r.sum2 = power_sum(s, 2.0);
  r.sum6 = power_sum(s, 6.0);
  r.upper_slack = r.sum_beta - r.integral;

  const double chain_scale = std::pow(delta, -(beta - 1.0)) * std::pow(r.energy, beta / 2.0);
  r.chain_constant = lower_chain_constant(beta);
  r.chain_lower = (1.0 - delta) * r.sum_beta - r.chain_constant * chain_scale;
  r.chain_slack = r.integral - r.chain_lower;
  r.chain_needed = chain_scale > 0.0 ? std::max(0.0, ((1.0 - delta) * r.sum_beta - r.integral) / chain_scale) : 0.0;

  if (std::abs(beta - 2.5) < 1e-12) {
    r.five_halves = true;
    const double base = r.sum_beta - delta * r.energy;
    const double cs_scale = std::pow(r.sum6, 0.25) * std::pow(r.sum2, 0.75) / delta;
    r.cs_constant = five_halves_constant();
    r.cs_lower = base - r.cs_constant * cs_scale;
    r.cs_slack = r.integral - r.cs_lower;
    r.cs_needed = cs_scale > 0.0 ? std::max(0.0, (base - r.integral) / cs_scale) : 0.0;

    const double sob_scale = std::pow(delta, -7.0) * r.sum2 * r.sum2 * r.sum2;
    r.sobolev_constant = c_sob;
    r.sob_constant = five_halves_sobolev_constant(c_sob);
    r.sob_lower = base - r.sob_constant * sob_scale;
    r.sob_slack = r.integral - r.sob_lower;
    r.sob_needed = sob_scale > 0.0 ? std::max(0.0, (base - r.integral) / sob_scale) : 0.0;
  }
  return r;
}

double sobolev_ratio(const LatticeField& s) {
  const double t = lattice_energy(s);
  if (!(t > 0.0)) throw DegenerateField("sobolev_ratio: T(S) vanishes");
  return std::cbrt(power_sum(s, 6.0)) / t;
}

LatticeField random_field(std::mt19937_64& rng, int max_side, FieldKind kind) {
  std::uniform_int_distribution<int> side(1, max_side);
  std::uniform_int_distribution<int> shift(-3, 3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> n01;
  LatticeField f({shift(rng), shift(rng), shift(rng)}, {side(rng), side(rng), side(rng)});
  const double fill = 0.2 + 0.8 * u(rng);
  if (kind == FieldKind::Smooth) {
    const double width = 0.7 + 1.8 * u(rng);
    const double amp = 0.1 + 3.0 * u(rng);
    std::array<double, 3> c{};
    for (int i = 0; i < 3; ++i) c[i] = f.origin[i] + u(rng) * (f.dims[i] - 1);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const auto s = f.site(i);
      double r2 = 0.0;
      for (int d = 0; d < 3; ++d) r2 += (s[d] - c[d]) * (s[d] - c[d]);
      f.values[i] = amp * std::exp(-r2 / (2.0 * width * width)) + 0.05 * std::abs(n01(rng));
    }
  } else {
    for (auto& v : f.values) {
      if (u(rng) > fill) continue;
      if (kind == FieldKind::Gaussian) {
        v = std::abs(n01(rng));
      } else {
        v = std::min(1e3, std::abs(std::tan(3.141592653589793 * (u(rng) - 0.5))));
      }
    }
  }
  // Keep every field nonzero.
  if (std::all_of(f.values.begin(), f.values.end(), [](double v) { return v == 0.0; })) f.values[0] = 1.0;
  return f;
}

LatticeField ensemble_field(std::mt19937_64& rng, int index, int max_side) {
  static constexpr FieldKind kinds[3] = {FieldKind::Gaussian, FieldKind::HeavyTailed, FieldKind::Smooth};
  return random_field(rng, max_side, kinds[index % 3]);
}

namespace {

// Multiplicative hill-climb on the Sobolev ratio, one site at a time, on the
// field's box grown by one site on each side.
double ascend(LatticeField f, std::mt19937_64& rng, int sweeps) {
  LatticeField g({f.origin[0] - 1, f.origin[1] - 1, f.origin[2] - 1}, {f.dims[0] + 2, f.dims[1] + 2, f.dims[2] + 2});
  for (std::size_t i = 0; i < f.size(); ++i) g.ref(f.site(i)) = f.values[i];
  std::normal_distribution<double> n01;
  double best = sobolev_ratio(g);
  double scale = 0.3;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    const double top = *std::max_element(g.values.begin(), g.values.end());
    for (auto& v : g.values) {
      const double old = v;
      v = std::max(0.0, old + scale * top * n01(rng));
      const double trial = sobolev_ratio(g);
      if (trial > best) {
        best = trial;
      } else {
        v = old;
      }
    }
    scale = std::max(0.01, scale * 0.97);
  }
  return best;
}

}  // namespace

SobolevCalibration calibrate_sobolev(int fields, std::uint64_t seed) {
  if (fields < 1) throw InvalidArgument("calibrate_sobolev: need at least one field");
  std::mt19937_64 rng(seed);
  std::vector<std::pair<double, LatticeField>> scored;
  scored.reserve(static_cast<std::size_t>(fields));
  for (int i = 0; i < fields; ++i) {
    auto f = ensemble_field(rng, i);
    scored.emplace_back(sobolev_ratio(f), std::move(f));
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  SobolevCalibration out;
  out.fields = fields;
  out.ensemble_max = scored.front().first;
  out.constant = out.ensemble_max;
  const std::size_t climbs = std::min<std::size_t>(4, scored.size());
  for (std::size_t i = 0; i < climbs; ++i) out.constant = std::max(out.constant, ascend(scored[i].second, rng, 60));
  return out;
}

LatticeField occupancy_to_field(const LatticeField& n, double ell) {
  if (!(ell > 0.0)) throw InvalidArgument("occupancy_to_field: ell must be positive");
  LatticeField s = n;
  for (auto& v : s.values) {
    if (v < 0.0) throw InvalidArgument("occupancy_to_field: counts must be nonnegative");
    v = (std::sqrt(v + 1.0) - 1.0) / ell;
  }
  return s;
}

}  // namespace dyson::lattice

#include "dyson/fock.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "dyson/errors.hpp"

namespace dyson::fock {

FockBasis::FockBasis(int modes, int cutoff) : modes_(modes), cutoff_(cutoff), dimension_(1) {
  if (modes < 1) throw InvalidArgument("FockBasis: need at least one mode");
  if (cutoff < 0) throw InvalidArgument("FockBasis: cutoff must be nonnegative");
  for (int m = 0; m < modes; ++m) dimension_ *= static_cast<std::size_t>(cutoff + 1);
}

std::vector<int> FockBasis::occupations(std::size_t index) const {
  std::vector<int> occ(modes_);
  for (int m = modes_ - 1; m >= 0; --m) {
    occ[m] = static_cast<int>(index % static_cast<std::size_t>(cutoff_ + 1));
    index /= static_cast<std::size_t>(cutoff_ + 1);
  }
  return occ;
}

std::size_t FockBasis::index(std::span<const int> occupations) const {
  std::size_t idx = 0;
  for (int m = 0; m < modes_; ++m) idx = idx * static_cast<std::size_t>(cutoff_ + 1) + static_cast<std::size_t>(occupations[m]);
  return idx;
}

OperatorBuilder::OperatorBuilder(const FockBasis& basis) : basis_(basis) {}

OperatorBuilder& OperatorBuilder::add(double coeff, std::initializer_list<Ladder> ops) {
  const std::vector<Ladder> factors(ops);
  for (const auto& f : factors)
    if (f.mode < 0 || f.mode >= basis_.modes()) throw InvalidArgument("OperatorBuilder: mode out of range");
  for (std::size_t col = 0; col < basis_.dimension(); ++col) {
    auto occ = basis_.occupations(col);
    double amp = coeff;
    for (auto it = factors.rbegin(); it != factors.rend() && amp != 0.0; ++it) {
      int& n = occ[it->mode];
      if (it->dagger) {
        amp *= std::sqrt(static_cast<double>(n + 1));
        ++n;
      } else {
        amp *= std::sqrt(static_cast<double>(n));
        --n;
      }
    }
    if (amp == 0.0) continue;
    bool inside = true;
    for (int n : occ) inside = inside && n >= 0 && n <= basis_.cutoff();
    if (inside) entries_.emplace_back(static_cast<int>(basis_.index(occ)), static_cast<int>(col), amp);
  }
  return *this;
}

OperatorBuilder& OperatorBuilder::add_diagonal(std::function<double(std::span<const int>)> f) {
  for (std::size_t i = 0; i < basis_.dimension(); ++i) {
    const auto occ = basis_.occupations(i);
    const double v = f(occ);
    if (v != 0.0) entries_.emplace_back(static_cast<int>(i), static_cast<int>(i), v);
  }
  return *this;
}

SparseMatrix OperatorBuilder::build() const {
  const auto n = static_cast<Eigen::Index>(basis_.dimension());
  SparseMatrix m(n, n);
  m.setFromTriplets(entries_.begin(), entries_.end());
  m.makeCompressed();
  return m;
}

namespace {

Eigenpair dense_lowest(const SparseMatrix& h) {
  const Eigen::MatrixXd dense = Eigen::MatrixXd(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
  if (es.info() != Eigen::Success) throw NonConvergence("dense eigensolver failed");
  return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

Eigenpair lanczos_lowest(const SparseMatrix& h, double tol, const Eigen::VectorXd& seed) {
  const Eigen::Index n = h.rows();
  constexpr int kKrylov = 80;
  constexpr int kMaxRestarts = 400;
  // Deterministic start with support on every basis state.
  Eigen::VectorXd start(n);
  for (Eigen::Index i = 0; i < n; ++i) start(i) = 1.0 / (1.0 + 0.01 * static_cast<double>(i));
  if (seed.size() == n && seed.norm() > 0.0) start = seed + 1e-3 * start / start.norm();
  start.normalize();

  Eigen::MatrixXd basis(n, kKrylov + 1);
  for (int restart = 0; restart < kMaxRestarts; ++restart) {
    basis.col(0) = start;
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(kKrylov);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(kKrylov);
    int m = 0;
    for (; m < kKrylov; ++m) {
      Eigen::VectorXd w = h * basis.col(m);
      alpha(m) = basis.col(m).dot(w);
      // Two passes of classical Gram-Schmidt against the whole Krylov basis.
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd c = basis.leftCols(m + 1).transpose() * w;
        w.noalias() -= basis.leftCols(m + 1) * c;
      }
      beta(m) = w.norm();
      if (beta(m) < 1e-14) {
        ++m;
        break;
      }
      basis.col(m + 1) = w / beta(m);
    }
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      t(i, i) = alpha(i);
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta(i);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const double theta = es.eigenvalues()(0);
    const Eigen::VectorXd y = es.eigenvectors().col(0);
    Eigen::VectorXd ritz = basis.leftCols(m) * y;
    ritz.normalize();
    const double residual = (h * ritz - theta * ritz).norm();
    if (residual < tol) return {theta, ritz};
    start = ritz;
  }
  throw NonConvergence("lanczos: lowest eigenpair did not converge");
}

}  // namespace

Eigenpair lowest_eigenpair(const SparseMatrix& h, double tol, const Eigen::VectorXd& start) {
  if (h.rows() != h.cols() || h.rows() == 0) throw InvalidArgument("lowest_eigenpair: need a nonempty square matrix");
  if (static_cast<std::size_t>(h.rows()) <= kDenseLimit) return dense_lowest(h);
  return lanczos_lowest(h, tol, start);
}

double lowest_eigenvalue(const SparseMatrix& h, double tol) { return lowest_eigenpair(h, tol).value; }

}  // namespace dyson::fock

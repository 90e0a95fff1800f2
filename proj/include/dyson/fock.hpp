#pragma once

// Truncated bosonic Fock spaces with per-mode occupation cutoffs, and sparse
// matrices of operators built from normal- or anti-normal-ordered monomials.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace dyson::fock {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct Ladder {
  int mode = 0;
  bool dagger = false;
};

inline Ladder create(int mode) { return {mode, true}; }
inline Ladder annihilate(int mode) { return {mode, false}; }

/// Product basis |n_0, ..., n_{m-1}> with 0 <= n_i <= cutoff.
class FockBasis {
 public:
  FockBasis(int modes, int cutoff);

  int modes() const { return modes_; }
  int cutoff() const { return cutoff_; }
  std::size_t dimension() const { return dimension_; }

  /// Occupations of basis state `index` (mode 0 is the most significant digit).
  std::vector<int> occupations(std::size_t index) const;
  std::size_t index(std::span<const int> occupations) const;

 private:
  int modes_;
  int cutoff_;
  std::size_t dimension_;
};

/// Accumulates P O P for O a real combination of ladder monomials, with P the
/// projection onto the truncated basis. Intermediate occupations inside a
/// monomial are not truncated; only the final state is.
class OperatorBuilder {
 public:
  explicit OperatorBuilder(const FockBasis& basis);

  /// coeff * ops[0] ops[1] ... ops[k-1]; the rightmost factor acts first.
  OperatorBuilder& add(double coeff, std::initializer_list<Ladder> ops);

  /// Diagonal term f(occupations).
  OperatorBuilder& add_diagonal(std::function<double(std::span<const int>)> f);

  SparseMatrix build() const;

 private:
  const FockBasis& basis_;
  std::vector<Eigen::Triplet<double>> entries_;
};

struct Eigenpair {
  double value = 0.0;
  Eigen::VectorXd vector;
};

/// Smallest eigenvalue of a real symmetric matrix. Small matrices go through a
/// dense solver; larger ones through restarted Lanczos with full
/// reorthogonalization (residual norm below `tol`). A nonempty `start` seeds
/// the Lanczos iteration, which pays off when a nearby problem is already solved.
Eigenpair lowest_eigenpair(const SparseMatrix& h, double tol = 1e-9, const Eigen::VectorXd& start = {});
double lowest_eigenvalue(const SparseMatrix& h, double tol = 1e-9);

/// Size above which lowest_eigenpair switches from dense to Lanczos.
inline constexpr std::size_t kDenseLimit = 400;

}  // namespace dyson::fock

#pragma once

// Localization of a trial vector of a large Hermitian matrix to a window of
// M consecutive indices, at an energy cost controlled by the diagonal sums d_k.

#include <Eigen/Dense>
#include <random>
#include <vector>

namespace dyson::matloc {

struct LocalizationReport {
  double lambda = 0.0;
  std::vector<double> d;  // d_k = (psi, A^k psi), k = 0..N-1
  int window_start = 0;   // phi vanishes outside [window_start, window_start + M), 0-based
  int window_length = 0;
  Eigen::VectorXcd phi;
  double value = 0.0;  // (phi, A phi)
  double c_work = 0.0;
  double bound = 0.0;  // lambda + C/M^2 sum_{k<M} k^2 |d_k| + C sum_{k>=M} |d_k|
  double average = 0.0;  // taper-weighted window average, an upper bound on value
  bool holds = false;    // value <= bound
};

/// d_k = 2 Re sum_j conj(psi_j) A_{j, j+k} psi_{j+k} for k >= 1, and the
/// diagonal term for k = 0. Throws NotHermitian / NotNormalized.
std::vector<double> diagonal_sums(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& psi);

/// sin(pi m / (M + 1)) for m = 1..M.
std::vector<double> half_sine_taper(int m);

/// Smallest C with 1 - c(k)/c(0) <= C k^2 / M^2 for 1 <= k < M, where c is the
/// taper autocorrelation. For k >= M, c(k) = 0 and the factor is 1 <= C.
double taper_constant(int m);

/// Searches all windows of length M (with the half-sine taper, also the ones
/// clipped by the ends, which sit inside an unclipped window) and returns the
/// one with the lowest normalized energy. With taper = false only unclipped
/// rectangular windows are tried. Throws AllWindowsDegenerate, InvalidArgument.
LocalizationReport localize(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& psi, int m, double c_work = 10.0,
                            bool taper = true);

/// Random Hermitian band matrix with |i - j| <= band, entries N(0,1) + i N(0,1)
/// off the diagonal and N(0,1) on it.
Eigen::MatrixXcd random_band_matrix(std::mt19937_64& rng, int n, int band);

/// Random unit vector with complex Gaussian entries.
Eigen::VectorXcd random_unit_vector(std::mt19937_64& rng, int n);

}  // namespace dyson::matloc

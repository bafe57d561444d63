#pragma once

#include <cmath>
#include <random>

#include "esc/numerics.hpp"

namespace esc::test {

inline MatrixXd random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = n(rng);
  return m;
}

inline VectorXd random_vector(std::mt19937_64& rng, int n) { return random_matrix(rng, n, 1); }

inline SymMatrix random_symmetric(std::mt19937_64& rng, int n) {
  const MatrixXd a = random_matrix(rng, n, n);
  return SymMatrix(0.5 * (a + a.transpose()));
}

// Eigenvalues drawn uniformly from [lo, hi] in a random orthonormal basis.
inline SymMatrix random_spd(std::mt19937_64& rng, int n, double lo = 0.1, double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::HouseholderQR<MatrixXd> qr(random_matrix(rng, n, n));
  const MatrixXd q = qr.householderQ();
  VectorXd d(n);
  for (int i = 0; i < n; ++i) d(i) = u(rng);
  const MatrixXd m = q * d.asDiagonal() * q.transpose();
  return SymMatrix(0.5 * (m + m.transpose()));
}

inline double rel_diff(const MatrixXd& a, const MatrixXd& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

}  // namespace esc::test

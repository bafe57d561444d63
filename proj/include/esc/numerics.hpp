#pragma once

#include <Eigen/Dense>

namespace esc {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Dense real symmetric matrix.
///
/// Construction rejects non-square, empty, non-finite or visibly asymmetric
/// input (asymmetry above 1e-12 relative to the largest entry) and stores the
/// exact symmetric part, so downstream eigen-solvers always see a symmetric
/// matrix.
class SymMatrix {
 public:
  explicit SymMatrix(const MatrixXd& m);

  static SymMatrix identity(int n);
  static SymMatrix zero(int n);
  static SymMatrix scalar(int n, double value);
  static SymMatrix diagonal(const VectorXd& d);

  int dim() const { return static_cast<int>(m_.rows()); }
  const MatrixXd& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  /// Weighted norm sqrt(v' M v); negative quadratic forms (round-off on a PSD
  /// matrix) clamp to zero.
  double weighted_norm(const VectorXd& v) const;

  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
  friend SymMatrix operator*(double s, const SymMatrix& a);

 private:
  MatrixXd m_;
};

struct SymEigen {
  VectorXd values;   // ascending
  MatrixXd vectors;  // columns are orthonormal eigenvectors
};

SymEigen sym_eigen(const SymMatrix& m);

double min_eigenvalue(const SymMatrix& m);
double max_eigenvalue(const SymMatrix& m);

/// Induced 2-norm, i.e. the largest absolute eigenvalue.
double spectral_norm(const SymMatrix& m);

/// 1e-9 * ||M||, floored so the zero matrix still gets a positive tolerance.
double default_psd_tol(const SymMatrix& m);

bool is_psd(const SymMatrix& m, double tol);
bool is_psd(const SymMatrix& m);

/// Symmetric PSD square root via eigendecomposition. Throws
/// std::domain_error if M has an eigenvalue below -tol.
SymMatrix sym_sqrt(const SymMatrix& m, double tol);
SymMatrix sym_sqrt(const SymMatrix& m);

/// Inverse of a positive definite matrix via eigendecomposition.
SymMatrix sym_inverse(const SymMatrix& m);

/// Sum of the negative (resp. positive) eigenvalues.
double tr_minus(const SymMatrix& m);
double tr_plus(const SymMatrix& m);

/// Largest eigenvalue modulus of a general square matrix.
double spectral_radius(const MatrixXd& a);

/// Solves A' P A - P = -Q for P. Throws std::domain_error when A is not
/// Schur stable (spectral radius >= 1).
SymMatrix solve_discrete_lyapunov(const MatrixXd& a, const SymMatrix& q);

}  // namespace esc

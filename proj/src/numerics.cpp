#include "esc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace esc {

namespace {

constexpr double kSymmetryTol = 1e-12;

}  // namespace

SymMatrix::SymMatrix(const MatrixXd& m) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    std::ostringstream msg;
    msg << "SymMatrix: expected a non-empty square matrix, got " << m.rows()
        << "x" << m.cols();
    throw std::invalid_argument(msg.str());
  }
  if (!m.allFinite()) {
    throw std::invalid_argument("SymMatrix: non-finite entry");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol * scale) {
    std::ostringstream msg;
    msg << "SymMatrix: asymmetry " << asym << " exceeds tolerance";
    throw std::invalid_argument(msg.str());
  }
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(int n) { return SymMatrix(MatrixXd::Identity(n, n)); }

SymMatrix SymMatrix::zero(int n) { return SymMatrix(MatrixXd::Zero(n, n)); }

SymMatrix SymMatrix::scalar(int n, double value) {
  return SymMatrix(value * MatrixXd::Identity(n, n));
}

SymMatrix SymMatrix::diagonal(const VectorXd& d) {
  return SymMatrix(MatrixXd(d.asDiagonal()));
}

double SymMatrix::weighted_norm(const VectorXd& v) const {
  return std::sqrt(std::max(0.0, v.dot(m_ * v)));
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
  return SymMatrix(a.m_ + b.m_);
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
  return SymMatrix(a.m_ - b.m_);
}

SymMatrix operator*(double s, const SymMatrix& a) { return SymMatrix(s * a.m_); }

SymEigen sym_eigen(const SymMatrix& m) {
  // Householder tridiagonalization followed by implicit symmetric QL/QR.
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("sym_eigen: eigen-solver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const SymMatrix& m) { return sym_eigen(m).values(0); }

double max_eigenvalue(const SymMatrix& m) {
  const auto e = sym_eigen(m);
  return e.values(e.values.size() - 1);
}

double spectral_norm(const SymMatrix& m) {
  return sym_eigen(m).values.cwiseAbs().maxCoeff();
}

double default_psd_tol(const SymMatrix& m) {
  return 1e-9 * std::max(spectral_norm(m), 1e-300);
}

bool is_psd(const SymMatrix& m, double tol) { return min_eigenvalue(m) >= -tol; }

bool is_psd(const SymMatrix& m) { return is_psd(m, default_psd_tol(m)); }

SymMatrix sym_sqrt(const SymMatrix& m, double tol) {
  const auto e = sym_eigen(m);
  if (e.values(0) < -tol) {
    std::ostringstream msg;
    msg << "sym_sqrt: matrix is indefinite (min eigenvalue " << e.values(0) << ")";
    throw std::domain_error(msg.str());
  }
  const VectorXd roots = e.values.cwiseMax(0.0).cwiseSqrt();
  return SymMatrix(e.vectors * roots.asDiagonal() * e.vectors.transpose());
}

SymMatrix sym_sqrt(const SymMatrix& m) { return sym_sqrt(m, default_psd_tol(m)); }

SymMatrix sym_inverse(const SymMatrix& m) {
  const auto e = sym_eigen(m);
  if (!(e.values(0) > 0.0)) {
    throw std::domain_error("sym_inverse: matrix is not positive definite");
  }
  return SymMatrix(e.vectors * e.values.cwiseInverse().asDiagonal() *
                   e.vectors.transpose());
}

double tr_minus(const SymMatrix& m) {
  return sym_eigen(m).values.cwiseMin(0.0).sum();
}

double tr_plus(const SymMatrix& m) {
  return sym_eigen(m).values.cwiseMax(0.0).sum();
}

double spectral_radius(const MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw std::invalid_argument("spectral_radius: matrix must be square");
  }
  Eigen::EigenSolver<MatrixXd> solver(a, false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("spectral_radius: eigen-solver did not converge");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

SymMatrix solve_discrete_lyapunov(const MatrixXd& a, const SymMatrix& q) {
  const int n = q.dim();
  if (a.rows() != n || a.cols() != n) {
    throw std::invalid_argument("solve_discrete_lyapunov: A and Q sizes differ");
  }
  const double rho = spectral_radius(a);
  if (rho >= 1.0) {
    std::ostringstream msg;
    msg << "solve_discrete_lyapunov: A is not Schur stable (spectral radius "
        << rho << ")";
    throw std::domain_error(msg.str());
  }
  // Column-major vec: vec(A' P A) = (A' (x) A') vec(P).
  const int nn = n * n;
  MatrixXd lhs(nn, nn);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      lhs.block(i * n, j * n, n, n) = a(j, i) * a.transpose();
    }
  }
  lhs -= MatrixXd::Identity(nn, nn);
  const VectorXd rhs = -Eigen::Map<const VectorXd>(q.matrix().data(), nn);
  const VectorXd p = lhs.fullPivLu().solve(rhs);
  const MatrixXd pm = Eigen::Map<const MatrixXd>(p.data(), n, n);
  return SymMatrix(0.5 * (pm + pm.transpose()));
}

}  // namespace esc

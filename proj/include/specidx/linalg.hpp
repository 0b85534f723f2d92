#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace specidx {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using Complex = std::complex<double>;

/// Eigenvalues of a real symmetric matrix, ascending.
VectorXd sym_eigenvalues(const MatrixXd& m);

/// Full symmetric eigendecomposition (ascending eigenvalues).
struct SymEig {
  VectorXd values;
  MatrixXd vectors;
};
SymEig sym_eigensystem(const MatrixXd& m);

/// Spectral norm of a symmetric matrix (max |eigenvalue|).
double operator_norm_sym(const MatrixXd& m);

/// Spectral norm of a general complex matrix.
double operator_norm(const MatrixXcd& m);

/// Number of entries of `eigs` (sorted or not) strictly below `x`.
int count_below(const VectorXd& eigs, double x);

/// Number of negative eigenvalues of a symmetric matrix, via the
/// Bunch-Kaufman factorization (Sylvester inertia).  Much cheaper than a
/// full eigensolve when only the count is needed.
int negative_inertia(MatrixXd m);

/// Solver for (T - z) x = b with T symmetric tridiagonal, using banded LU
/// with partial pivoting (one extra superdiagonal of fill-in).  Stable for
/// arbitrary complex shifts, including shifts inside the spectrum.
class TridiagSolver {
 public:
  // diag has size n, offdiag size n-1; solves (tridiag(offdiag,diag,offdiag) - z) x = b.
  TridiagSolver(const VectorXd& diag, const VectorXd& offdiag, Complex z);

  VectorXcd solve(const VectorXcd& rhs) const;
  VectorXcd solve_real(const VectorXd& rhs) const;

  int size() const { return n_; }

 private:
  int n_;
  // Factorized bands: lower multipliers and the 3 upper bands of U.
  std::vector<Complex> l_;           // multiplier applied at step i
  std::vector<int> pivoted_;         // 1 if rows i,i+1 swapped
  std::vector<Complex> u0_, u1_, u2_;  // main, first, second superdiagonal of U
};

/// True if the matrix is tridiagonal up to `tol` relative to its max entry.
bool is_tridiagonal(const MatrixXd& m, double tol = 0.0);

}  // namespace specidx

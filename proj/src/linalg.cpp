#include "specidx/linalg.hpp"

#include <lapacke.h>

#include <cmath>
#include <stdexcept>

namespace specidx {

VectorXd sym_eigenvalues(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("symmetric eigensolver failed");
  return es.eigenvalues();
}

SymEig sym_eigensystem(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("symmetric eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

double operator_norm_sym(const MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  VectorXd ev = sym_eigenvalues(m);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

double operator_norm(const MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  // sqrt of the largest eigenvalue of m* m (Hermitian PSD).
  MatrixXcd g = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(g, Eigen::EigenvaluesOnly);
  double top = es.eigenvalues()(es.eigenvalues().size() - 1);
  return std::sqrt(std::max(0.0, top));
}

int count_below(const VectorXd& eigs, double x) {
  int c = 0;
  for (Eigen::Index i = 0; i < eigs.size(); ++i)
    if (eigs(i) < x) ++c;
  return c;
}

int negative_inertia(MatrixXd m) {
  const int n = static_cast<int>(m.rows());
  if (n == 0) return 0;
  std::vector<lapack_int> ipiv(n);
  lapack_int info = LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', n, m.data(), n,
                                   ipiv.data());
  if (info < 0) throw std::runtime_error("dsytrf: bad argument");
  // info > 0 means an exactly singular D block; zero eigenvalues are not
  // counted as negative, so proceed with the factor as computed.
  int neg = 0;
  for (int k = 0; k < n;) {
    if (ipiv[k] > 0) {
      if (m(k, k) < 0.0) ++neg;
      ++k;
    } else {
      // 2x2 block: eigenvalues d+- with d+ d- = det < 0 in the generic
      // Bunch-Kaufman case, but handle degenerate blocks by inertia of the
      // explicit 2x2.
      double a = m(k, k), b = m(k + 1, k), c = m(k + 1, k + 1);
      double tr = a + c, det = a * c - b * b;
      double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
      double e1 = tr / 2.0 + disc, e2 = tr / 2.0 - disc;
      if (e1 < 0.0) ++neg;
      if (e2 < 0.0) ++neg;
      k += 2;
    }
  }
  return neg;
}

TridiagSolver::TridiagSolver(const VectorXd& diag, const VectorXd& offdiag,
                             Complex z)
    : n_(static_cast<int>(diag.size())) {
  if (offdiag.size() != diag.size() - 1 && !(n_ == 1 && offdiag.size() == 0))
    throw std::invalid_argument("TridiagSolver: band size mismatch");
  // Banded LU with partial pivoting.  Row i of the working matrix holds
  // (sub, main, sup, sup2); pivoting with the next row adds fill in sup2.
  std::vector<Complex> a(n_), b(n_), c(n_), d(n_, Complex(0.0, 0.0));
  for (int i = 0; i < n_; ++i) {
    b[i] = Complex(diag(i), 0.0) - z;
    a[i] = (i > 0) ? Complex(offdiag(i - 1), 0.0) : Complex(0.0, 0.0);
    c[i] = (i < n_ - 1) ? Complex(offdiag(i), 0.0) : Complex(0.0, 0.0);
  }
  l_.assign(std::max(0, n_ - 1), Complex(0.0, 0.0));
  pivoted_.assign(std::max(0, n_ - 1), 0);
  u0_.resize(n_);
  u1_.assign(std::max(0, n_ - 1), Complex(0.0, 0.0));
  u2_.assign(std::max(0, n_ - 2), Complex(0.0, 0.0));

  for (int i = 0; i < n_ - 1; ++i) {
    if (std::abs(a[i + 1]) > std::abs(b[i])) {
      pivoted_[i] = 1;
      std::swap(b[i], a[i + 1]);          // main(i) <-> sub(i+1)
      std::swap(c[i], b[i + 1]);          // sup(i) <-> main(i+1)
      std::swap(d[i], c[i + 1]);          // sup2(i) <-> sup(i+1)
    }
    if (b[i] == Complex(0.0, 0.0))
      throw std::runtime_error("TridiagSolver: exactly singular pivot");
    Complex m = a[i + 1] / b[i];
    l_[i] = m;
    b[i + 1] -= m * c[i];
    c[i + 1] -= m * d[i];
    u0_[i] = b[i];
    u1_[i] = c[i];
    if (i < n_ - 2) u2_[i] = d[i];
  }
  u0_[n_ - 1] = b[n_ - 1];
  if (n_ >= 2) u1_[n_ - 2] = c[n_ - 2];
  if (u0_[n_ - 1] == Complex(0.0, 0.0))
    throw std::runtime_error("TridiagSolver: exactly singular pivot");
}

VectorXcd TridiagSolver::solve(const VectorXcd& rhs) const {
  if (rhs.size() != n_) throw std::invalid_argument("TridiagSolver: rhs size");
  VectorXcd y = rhs;
  for (int i = 0; i < n_ - 1; ++i) {
    if (pivoted_[i]) std::swap(y(i), y(i + 1));
    y(i + 1) -= l_[i] * y(i);
  }
  // Back substitution on the 3-band upper factor.
  VectorXcd x(n_);
  for (int i = n_ - 1; i >= 0; --i) {
    Complex s = y(i);
    if (i + 1 < n_) s -= u1_[i] * x(i + 1);
    if (i + 2 < n_) s -= u2_[i] * x(i + 2);
    x(i) = s / u0_[i];
  }
  return x;
}

VectorXcd TridiagSolver::solve_real(const VectorXd& rhs) const {
  return solve(rhs.cast<Complex>());
}

bool is_tridiagonal(const MatrixXd& m, double tol) {
  const Eigen::Index n = m.rows();
  double scale = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
  double thr = tol * scale;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::abs(i - j) > 1 && std::abs(m(i, j)) > thr) return false;
  return true;
}

}  // namespace specidx

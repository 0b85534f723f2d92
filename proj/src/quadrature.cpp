#include "specidx/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace specidx {

QuadRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  if (!(b > a)) throw std::invalid_argument("gauss_legendre: b must exceed a");
  // Jacobi matrix of the Legendre recurrence; nodes are its eigenvalues,
  // weights come from the first components of the eigenvectors.
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int j = 1; j < n; ++j) {
    double bj = j / std::sqrt(4.0 * j * j - 1.0);
    jac(j, j - 1) = bj;
    jac(j - 1, j) = bj;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.nodes(i) = mid + half * es.eigenvalues()(i);
    double v0 = es.eigenvectors()(0, i);
    rule.weights(i) = 2.0 * v0 * v0 * half;
  }
  return rule;
}

}  // namespace specidx

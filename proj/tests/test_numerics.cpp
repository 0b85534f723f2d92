#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "specidx/bessel.hpp"
#include "specidx/linalg.hpp"
#include "specidx/quadrature.hpp"

using namespace specidx;

TEST_CASE("gauss-legendre integrates polynomials and analytic functions") {
  QuadRule q = gauss_legendre(12, 0.0, 2.0);
  CHECK(q.weights.minCoeff() > 0.0);
  CHECK(q.weights.sum() == doctest::Approx(2.0).epsilon(1e-14));
  double cubic = 0.0, expo = 0.0;
  for (int i = 0; i < q.nodes.size(); ++i) {
    cubic += q.weights(i) * std::pow(q.nodes(i), 3);
    expo += q.weights(i) * std::exp(q.nodes(i));
  }
  CHECK(cubic == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(expo == doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-13));
}

TEST_CASE("riccati-bessel values match the standard library") {
  for (double x : {0.02, 0.5, 3.0, 9.7, 42.0, 310.0, 1000.0}) {
    auto s = riccati_s(20, x);
    auto c = riccati_c(20, x);
    for (int l = 0; l <= 20; ++l) {
      double sj = x * std::sph_bessel(l, x);
      double cy = -x * std::sph_neumann(l, x);
      double scale = std::max({std::abs(sj), std::abs(cy), 1e-280});
      CHECK(std::abs(s[l] - sj) <= 1e-12 * std::max(std::abs(sj), 1e-3 * scale));
      CHECK(std::abs(c[l] - cy) <= 1e-12 * std::max(std::abs(cy), 1e-3 * scale));
    }
  }
}

TEST_CASE("riccati recurrence is consistent across the direction switch") {
  // Values just below and above the upward/downward threshold must agree.
  for (double x : {10.5, 12.0, 17.9}) {
    auto s_lo = riccati_s(8, x);    // upward (x > lmax + 10 for lmax = 8 iff x > 18)
    auto s_hi = riccati_s(30, x);   // downward
    for (int l = 0; l <= 8; ++l)
      CHECK(s_lo[l] == doctest::Approx(s_hi[l]).epsilon(1e-12));
  }
}

TEST_CASE("tridiagonal shifted solver agrees with a dense solve") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 8; ++trial) {
    int n = 5 + trial * 13;
    VectorXd diag(n), off(n - 1);
    for (int i = 0; i < n; ++i) diag(i) = 2.0 + 0.3 * gauss(rng);
    for (int i = 0; i < n - 1; ++i) off(i) = -1.0 + 0.2 * gauss(rng);
    Complex z(0.37 * trial - 1.0, trial % 3 == 0 ? 0.0 : 0.4);
    if (trial % 3 == 0) z -= Complex(3.0, 0.0);  // keep real shifts off-spectrum
    TridiagSolver solver(diag, off, z);
    VectorXcd rhs(n);
    for (int i = 0; i < n; ++i) rhs(i) = Complex(gauss(rng), gauss(rng));
    VectorXcd x = solver.solve(rhs);
    MatrixXcd dense = MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) dense(i, i) = diag(i) - z;
    for (int i = 0; i < n - 1; ++i) {
      dense(i, i + 1) = off(i);
      dense(i + 1, i) = off(i);
    }
    CHECK((dense * x - rhs).norm() <= 1e-11 * (rhs.norm() + x.norm()));
  }
}

TEST_CASE("tridiagonal solver survives a shift inside the spectrum") {
  // Free lattice Laplacian; real shift between eigenvalues exercises the
  // pivoting path.
  const int n = 200;
  VectorXd diag = VectorXd::Constant(n, 2.0), off = VectorXd::Constant(n - 1, -1.0);
  double inside = 2.0 - 2.0 * std::cos(10.5 * M_PI / (n + 1));
  TridiagSolver solver(diag, off, Complex(inside, 0.0));
  VectorXd rhs = VectorXd::Zero(n);
  rhs(3) = 1.0;
  VectorXcd x = solver.solve_real(rhs);
  MatrixXd dense = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) dense(i, i) = diag(i) - inside;
  for (int i = 0; i < n - 1; ++i) {
    dense(i, i + 1) = off(i);
    dense(i + 1, i) = off(i);
  }
  VectorXcd resid = dense.cast<Complex>() * x - rhs.cast<Complex>();
  CHECK(resid.norm() <= 1e-9 * x.norm());
}

TEST_CASE("negative inertia equals the eigenvalue count") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 1 + trial * 3;
    MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = gauss(rng);
    VectorXd ev = sym_eigenvalues(a);
    CHECK(negative_inertia(a) == count_below(ev, 0.0));
  }
}

TEST_CASE("operator norms") {
  MatrixXd m(2, 2);
  m << 3.0, 0.0, 0.0, -5.0;
  CHECK(operator_norm_sym(m) == doctest::Approx(5.0));
  MatrixXcd c(2, 2);
  c << Complex(0, 2), Complex(0, 0), Complex(0, 0), Complex(1, 0);
  CHECK(operator_norm(c) == doctest::Approx(2.0).epsilon(1e-12));
}

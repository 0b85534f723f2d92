#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "specidx/errors.hpp"
#include "specidx/lattice.hpp"

using namespace specidx;

namespace {

double free_mode(const Grid1D& g, int j) {  // j = 1..n
  double s = std::sin(j * M_PI / (2.0 * (g.n + 1)));
  return 4.0 * s * s / (g.h * g.h);
}

}  // namespace

TEST_CASE("free hamiltonian spectrum") {
  Grid1D tiny = Grid1D::make(0.0, 4.0, 3);  // h = 1
  DenseSelfAdjoint h0 = build_h0(tiny);
  VectorXd ev = sym_eigenvalues(h0.matrix);
  CHECK(ev(0) == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
  CHECK(ev(1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(ev(2) == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
  CHECK(ev(0) > 0.0);

  Grid1D box = Grid1D::make(-20.0, 20.0, 200);
  VectorXd evb = sym_eigenvalues(build_h0(box).matrix);
  double continuum = std::pow(M_PI / 40.0, 2);
  CHECK(std::abs(evb(0) - continuum) < 0.01 * continuum);
}

TEST_CASE("build_h adds the potential") {
  Grid1D g = Grid1D::make(-10.0, 10.0, 64);
  DenseSelfAdjoint h0 = build_h0(g);
  CHECK((build_h(g, zero_potential()).matrix - h0.matrix).isZero(0.0));

  // Constant well on the whole box shifts the spectrum exactly.  A genuine
  // constant is not short range, so build the shifted matrix directly.
  DenseSelfAdjoint shifted = DenseSelfAdjoint::make(
      h0.matrix - 0.7 * MatrixXd::Identity(g.n, g.n), g, "shifted");
  VectorXd ev0 = sym_eigenvalues(h0.matrix);
  VectorXd evs = sym_eigenvalues(shifted.matrix);
  for (int i = 0; i < g.n; ++i)
    CHECK(evs(i) == doctest::Approx(ev0(i) - 0.7).epsilon(1e-12));

  CHECK_THROWS_AS(build_h(Grid1D::make(-2.0, 2.0, 16), square_well(1.0, 3.0)),
                  SupportExceedsBox);
}

TEST_CASE("square well has exactly the continuum number of levels") {
  Grid1D g = Grid1D::make(-20.0, 20.0, 800);
  PotentialSpec v = square_well(2.0, 1.0);
  DenseSelfAdjoint hd = build_h(g, v);
  VectorXd ev = sym_eigenvalues(hd.matrix);
  auto oracle = oracles::square_well_levels(2.0, 1.0);
  CHECK(oracle.size() == 1);
  CHECK(count_below(ev, 0.0) == 1);
  CHECK(std::abs(ev(0) - oracle[0]) < 5e-3);  // O(h^2) discretization
}

TEST_CASE("counting") {
  Grid1D g = Grid1D::make(-5.0, 5.0, 40);
  DenseSelfAdjoint h0 = build_h0(g);
  VectorXd ev = sym_eigenvalues(h0.matrix);
  CHECK(counting(h0, ev(0) - 1.0) == 0);
  CHECK(counting(h0, ev(g.n - 1) + 1.0) == g.n);

  double lam = 3.0 / (g.h * g.h);
  int expected = 0;
  for (int j = 1; j <= g.n; ++j)
    if (free_mode(g, j) < lam) ++expected;
  CHECK(counting(h0, lam) == expected);

  CHECK_THROWS_AS(counting(h0, ev(2)), EigenvalueAtThreshold);
}

TEST_CASE("spectral projection against brute-force assembly") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  MatrixXd a(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = gauss(rng);
  DenseSelfAdjoint m = DenseSelfAdjoint::make(a, std::nullopt, "random");
  SymEig es = sym_eigensystem(a);
  double lam = 0.5 * (es.values(3) + es.values(4));
  OrthProjection p = spectral_projection(m, lam);
  CHECK(p.rank() == 4);
  MatrixXd brute = MatrixXd::Zero(8, 8);
  for (int t = 0; t < 4; ++t)
    brute += es.vectors.col(t) * es.vectors.col(t).transpose();
  CHECK((p.matrix - brute).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("xi_direct") {
  Grid1D g = Grid1D::make(-20.0, 20.0, 400);
  DenseSelfAdjoint h0 = build_h0(g);
  CHECK(xi_direct(h0, h0, 1.0) == 0);

  PotentialSpec v = square_well(2.0, 1.0);
  DenseSelfAdjoint hd = build_h(g, v);
  auto oracle = oracles::square_well_levels(2.0, 1.0);
  CHECK(xi_direct(h0, hd, -1e-6) == -static_cast<int>(oracle.size()));

  // Repulsive potential pushes levels up: xi >= 0 at every valid lam.
  PotentialSpec vp = PotentialSpec::make(
      [](double x) { return 0.8 * std::exp(-x * x); }, 100.0, 5.75, "bump");
  DenseSelfAdjoint hp = build_h(g, vp);
  VectorXd ev0 = sym_eigenvalues(h0.matrix);
  for (double lam : {0.01, 0.1, 0.5, 2.0}) {
    double probe = lam;
    // keep clear of both spectra
    while (true) {
      try {
        counting(h0, probe);
        counting(hp, probe);
        break;
      } catch (const EigenvalueAtThreshold&) {
        probe += 1e-4;
      }
    }
    CHECK(xi_direct(h0, hp, probe) >= 0);
  }
}

TEST_CASE("interval identity is exact at finite dimension") {
  Grid1D g = Grid1D::make(-20.0, 20.0, 300);
  DenseSelfAdjoint h0 = build_h0(g);
  DenseSelfAdjoint hd = build_h(g, gaussian_well(1.5, 1.0));
  VectorXd e0 = sym_eigenvalues(h0.matrix), ed = sym_eigenvalues(hd.matrix);
  double a = 0.071, b = 1.337;
  int lhs = xi_direct(h0, hd, b) - xi_direct(h0, hd, a);
  int rhs = (counting(e0, b) - counting(e0, a)) - (counting(ed, b) - counting(ed, a));
  CHECK(lhs == rhs);
}

TEST_CASE("sandwiched resolvents") {
  Grid1D g = Grid1D::make(-20.0, 20.0, 200);
  DenseSelfAdjoint h0 = build_h0(g);

  SandwichedResolvent empty = t0_matrix(h0, zero_potential(), Complex(0, 1));
  CHECK(empty.dim() == 0);

  // Rank-one potential: single support point, scalar T0.
  std::vector<double> xs = {g.point(99) - g.h / 2, g.point(99), g.point(99) + g.h / 2};
  PotentialSpec rank1 = table_potential(xs, {0.0, -2.0, 0.0}, 3.0);
  Complex z(0.3, 0.7);
  SandwichedResolvent t0 = t0_matrix(h0, rank1, z);
  REQUIRE(t0.dim() == 1);
  MatrixXcd dense = h0.matrix.cast<Complex>();
  dense.diagonal().array() -= z;
  VectorXcd e = VectorXcd::Zero(g.n);
  e(99) = 1.0;
  VectorXcd col = dense.partialPivLu().solve(e);
  CHECK(std::abs(t0.matrix(0, 0) - 2.0 * col(99)) < 1e-10);

  // Below the spectrum T0 built from |V|^{1/2} is positive semidefinite.
  PotentialSpec v = gaussian_well(1.0, 1.0);
  SandwichedResolvent below = t0_matrix(h0, v, Complex(-1.0, 0.0));
  VectorXd ev = sym_eigenvalues(below.matrix.real());
  CHECK(ev.minCoeff() > -1e-12);

  // t_matrix mirrors t0_matrix for the perturbed operator.
  DenseSelfAdjoint hd = build_h(g, v);
  SandwichedResolvent t = t_matrix(hd, v, z);
  CHECK(t.dim() == t0.dim() + below.dim() - 1);  // same support as below
}

TEST_CASE("resolvent identity holds and fails off-model") {
  Grid1D g = Grid1D::make(-20.0, 20.0, 200);
  DenseSelfAdjoint h0 = build_h0(g);

  // Scalar algebra case: one-point potential.
  std::vector<double> xs = {g.point(99) - g.h / 2, g.point(99), g.point(99) + g.h / 2};
  PotentialSpec rank1 = table_potential(xs, {0.0, -1.0, 0.0}, 3.0);
  DenseSelfAdjoint hd1 = build_h(g, rank1);
  CHECK(resolvent_identity_residual(h0, hd1, rank1, Complex(0, 1)) < 1e-10);

  std::mt19937_64 rng(99);
  PotentialSpec v = random_potential(rng, false);
  DenseSelfAdjoint hd = build_h(g, v);
  for (Complex z : {Complex(0, 1), Complex(1, 1), Complex(-2, 0)})
    CHECK(resolvent_identity_residual(h0, hd, v, z) < 1e-8);

  DenseSelfAdjoint corrupted = hd;
  corrupted.matrix(4, 4) += 0.25;
  CHECK(resolvent_identity_residual(h0, corrupted, v, Complex(0, 1)) > 1e-4);
}

TEST_CASE("birman-schwinger bound states") {
  Grid1D g = Grid1D::make(-20.0, 20.0, 800);
  DenseSelfAdjoint h0 = build_h0(g);

  CHECK(bs_bound_states(h0, zero_potential()).empty());

  // Poschl-Teller -2 sech^2: exactly one state near the continuum value -1.
  Grid1D gp = Grid1D::make(-18.0, 18.0, 899);
  DenseSelfAdjoint h0p = build_h0(gp);
  PotentialSpec pt = poschl_teller(2.0, 1.0);
  std::vector<double> states = bs_bound_states(h0p, pt);
  REQUIRE(states.size() == 1);
  CHECK(std::abs(states[0] + 1.0) < 5e-3);
  VectorXd ev = sym_eigenvalues(build_h(gp, pt).matrix);
  CHECK(std::abs(states[0] - ev(0)) < 1e-6);

  // Square-well family: counts match the spectral count below 0.
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> depth(0.5, 3.0), halfw(0.5, 2.5);
  for (int trial = 0; trial < 20; ++trial) {
    PotentialSpec v = square_well(depth(rng), halfw(rng));
    std::vector<double> bs = bs_bound_states(h0, v);
    VectorXd evs = sym_eigenvalues(build_h(g, v).matrix);
    CHECK(static_cast<int>(bs.size()) == count_below(evs, -1e-9));
  }

  // Mixed-sign potential exercises the dense-scan fallback.
  std::mt19937_64 rng2(77);
  PotentialSpec mixed = random_potential(rng2, false);
  Grid1D gm = Grid1D::make(-20.0, 20.0, 400);
  DenseSelfAdjoint h0m = build_h0(gm);
  std::vector<double> bsm = bs_bound_states(h0m, mixed);
  VectorXd evm = sym_eigenvalues(build_h(gm, mixed).matrix);
  CHECK(static_cast<int>(bsm.size()) == count_below(evm, -1e-9));
  for (size_t i = 0; i < bsm.size(); ++i)
    CHECK(std::abs(bsm[i] - evm(static_cast<int>(i))) < 1e-6);
}

TEST_CASE("classical birman-schwinger count for attractive potentials") {
  Grid1D g = Grid1D::make(-20.0, 20.0, 400);
  DenseSelfAdjoint h0 = build_h0(g);
  PotentialSpec v = gaussian_well(2.0, 1.2);
  DenseSelfAdjoint hd = build_h(g, v);
  VectorXd ed = sym_eigenvalues(hd.matrix);
  for (double lam : {-0.9, -0.3, -0.05}) {
    SandwichedResolvent t0 = t0_matrix(h0, v, Complex(lam, 0.0));
    VectorXd ev = sym_eigenvalues(t0.matrix.real());
    int above_one = 0;
    for (int i = 0; i < ev.size(); ++i)
      if (ev(i) > 1.0) ++above_one;
    CHECK(counting(ed, lam) == above_one);  // N((-inf,lam);H) = N((1,inf);T0)
  }
}

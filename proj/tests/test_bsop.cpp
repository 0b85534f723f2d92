#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "specidx/bsop.hpp"
#include "specidx/errors.hpp"

using namespace specidx;

namespace {

// Sup-difference of sorted spectra, the discretization-independent way to
// compare Nystrom matrices of different order.
double spectral_gap(const MatrixXd& small, const MatrixXd& big) {
  VectorXd ea = sym_eigenvalues(small), eb = sym_eigenvalues(big);
  // compare the extreme ends where the physical spectrum lives
  double worst = 0.0;
  for (int t = 0; t < 8; ++t) {
    worst = std::max(worst, std::abs(ea(ea.size() - 1 - t) - eb(eb.size() - 1 - t)));
    worst = std::max(worst, std::abs(ea(t) - eb(t)));
  }
  return worst;
}

}  // namespace

TEST_CASE("a0_b0_1d structure") {
  CHECK_THROWS_AS(a0_b0_1d(1.0, gaussian_well(1.0), 16), BadQuadrature);
  CHECK_THROWS_AS(a0_b0_1d(-1.0, gaussian_well(1.0), 64), OutOfRange);

  BSOperator z = a0_b0_1d(1.0, zero_potential(), 64);
  CHECK(z.a0.isZero(0.0));
  CHECK(z.b0.isZero(0.0));

  // The d=1 A0 kernel vanishes on the diagonal (sin(0) = 0).
  PotentialSpec bump = PotentialSpec::make(
      [](double x) { return -std::exp(-x * x / 1e-4); }, 100.0, 0.1, "spike");
  BSOperator nb = a0_b0_1d(1.0, bump, 64);
  CHECK(nb.a0.diagonal().cwiseAbs().maxCoeff() == 0.0);

  BSOperator op = a0_b0_1d(1.0, gaussian_well(1.0), 96);
  CHECK((op.a0 - op.a0.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  VectorXd evb = sym_eigenvalues(op.b0);
  CHECK(evb.minCoeff() > -1e-10);  // B0 >= 0
  // cos(k(x-y)) kernel separates into two products: rank two exactly.
  CHECK(std::abs(evb(evb.size() - 3)) < 1e-10);
}

TEST_CASE("quadrature self-convergence on an analytic kernel") {
  PotentialSpec v = gaussian_well(1.0);
  BSOperator a64 = a0_b0_1d(1.0, v, 64);
  BSOperator a128 = a0_b0_1d(1.0, v, 128);
  CHECK(spectral_gap(a64.a0, a128.a0) < 1e-8);
  CHECK(spectral_gap(a64.b0, a128.b0) < 1e-8);
}

TEST_CASE("radial d3 channels") {
  BSOperator z = a0_b0_radial_d3(1.0, zero_potential(), 0, 64);
  CHECK(z.a0.isZero(0.0));

  PotentialSpec v = exponential_well(1.0, 2.0);
  BSOperator op = a0_b0_radial_d3(1.0, v, 0, 128);
  REQUIRE(op.channel.has_value());
  CHECK(*op.channel == 0);

  // s-wave B0 is rank one with eigenvalue (1/k) int |V| sin^2(k r) dr.
  VectorXd ev = sym_eigenvalues(op.b0);
  double top = ev(ev.size() - 1);
  double quad = 0.0;
  for (int i = 0; i < op.nodes.size(); ++i) {
    double s = std::sin(op.nodes(i));
    quad += op.weights(i) * std::abs(v(op.nodes(i))) * s * s;
  }
  CHECK(std::abs(top - quad) < 1e-10);
  CHECK(std::abs(ev(ev.size() - 2)) < 1e-10);
  CHECK(ev.minCoeff() > -1e-10);

  // Higher channels keep B0 >= 0 and decay with ell.
  double prev = 1e300;
  for (int ell : {0, 2, 4, 8}) {
    BSOperator ch = a0_b0_radial_d3(0.5, v, ell, 96);
    CHECK(sym_eigenvalues(ch.b0).minCoeff() > -1e-10);
    double norm = operator_norm_sym(ch.a0);
    CHECK(norm < prev * 1.001);
    prev = norm;
  }
}

TEST_CASE("assemble_bsmat") {
  PotentialSpec v = gaussian_well(1.0);
  BSOperator op = a0_b0_1d(1.0, v, 64);
  VectorXd jdiag = j_sign_nodes(v, op.nodes);
  CHECK(jdiag.maxCoeff() < 0.0);  // attractive: J = -I

  BSOperator zero_op = a0_b0_1d(1.0, zero_potential(), 64);
  VectorXd jz = VectorXd::Ones(64);
  DenseSelfAdjoint jonly = assemble_bsmat(jz, zero_op);
  VectorXd ev = sym_eigenvalues(jonly.matrix);
  CHECK(ev.cwiseAbs().minCoeff() == doctest::Approx(1.0));
  CHECK(ev.cwiseAbs().maxCoeff() == doctest::Approx(1.0));

  DenseSelfAdjoint at_pi = assemble_bsmat(jdiag, op, M_PI);
  DenseSelfAdjoint plain = assemble_bsmat(jdiag, op);
  CHECK((at_pi.matrix - plain.matrix).cwiseAbs().maxCoeff() < 1e-14);

  DenseSelfAdjoint at_half = assemble_bsmat(jdiag, op, M_PI / 2.0);
  CHECK((at_half.matrix - (plain.matrix + op.b0)).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(assemble_bsmat(jdiag, op, 1e-14), ThetaDegenerate);
}

TEST_CASE("eps oracle agrees with the closed-form kernels") {
  PotentialSpec v = gaussian_well(1.0);
  // Tight parameters for the 1e-4 comparison at lam = 1.
  EpsOracleParams params;
  params.box = 1160.0;
  params.n = 330000;
  MatrixXcd oracle = t0_eps_oracle(1.0, 0.04, v, 96, params);
  BSOperator op = a0_b0_1d(1.0, v, 96);
  CHECK(operator_norm_sym(op.a0 - oracle.real()) < 1e-4);
  CHECK(operator_norm_sym(op.b0 - oracle.imag()) < 1e-4);

  MatrixXcd zero = t0_eps_oracle(1.0, 0.1, zero_potential(), 64, {});
  CHECK(zero.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("eps oracle radial s-wave") {
  PotentialSpec v = exponential_well(1.0, 2.0);
  EpsOracleParams params;
  params.box = 1180.0;
  params.n = 160000;
  MatrixXcd oracle = t0_eps_oracle_radial_s(1.0, 0.04, v, 128, params);
  BSOperator op = a0_b0_radial_d3(1.0, v, 0, 128);
  CHECK(operator_norm_sym(op.a0 - oracle.real()) < 1e-4);
  CHECK(operator_norm_sym(op.b0 - oracle.imag()) < 1e-4);
}

TEST_CASE("box sensitivity probe raises BoxTooSmall") {
  PotentialSpec v = gaussian_well(1.0);
  EpsOracleParams params;
  params.box = 12.0;  // far too small for eps_min = 0.05
  params.n = 4000;
  CHECK_THROWS_AS(t0_eps_oracle(1.0, 0.2, v, 64, params), BoxTooSmall);
}

TEST_CASE("singular set scan") {
  std::vector<double> grid;
  for (int i = 0; i < 12; ++i) grid.push_back(0.5 + 0.5 * i);
  SingularSet zero_scan = scan_singular_set(zero_potential(), grid, 64, 1e-6);
  for (double s : zero_scan.min_singvals) CHECK(s == doctest::Approx(1.0));
  for (bool f : zero_scan.singular) CHECK(!f);

  // Once ||A0|| < 1 no flags can appear.
  PotentialSpec v = gaussian_well(1.0);
  std::vector<double> high = {50.0, 100.0, 200.0};
  SingularSet hs = scan_singular_set(v, high, 96, 1e-6);
  for (size_t i = 0; i < high.size(); ++i) {
    CHECK(operator_norm_sym(a0_b0_1d(high[i], v, 96).a0) < 1.0);
    CHECK(!hs.singular[i]);
  }
}

TEST_CASE("high-energy decay of the limiting operators") {
  PotentialSpec v = gaussian_well(2.0);
  double prev_a = 1e300, prev_b = 1e300;
  for (double lam : {10.0, 40.0, 160.0}) {
    BSOperator op = a0_b0_1d(lam, v, 96);
    double na = operator_norm_sym(op.a0), nb = operator_norm_sym(op.b0);
    CHECK(na < prev_a);
    CHECK(nb < prev_b);
    prev_a = na;
    prev_b = nb;
  }
  CHECK(prev_a < 0.1);
}

TEST_CASE("norm continuity in lambda (frozen regression bound)") {
  PotentialSpec v = gaussian_well(1.0);
  const double kLip = 2.0;  // measured ~0.5 on this window, frozen with slack
  for (double lam : {0.5, 1.0, 2.0, 3.5}) {
    BSOperator a = a0_b0_1d(lam, v, 96);
    BSOperator b = a0_b0_1d(lam + 0.05, v, 96);
    CHECK(operator_norm_sym(a.a0 - b.a0) <= kLip * 0.05);
  }
}

TEST_CASE("hilbert-schmidt bound") {
  CHECK(hs_bound_d3(zero_potential(), 256) == 0.0);

  // Radial indicator of depth c has the closed form c^2 / 4.
  PotentialSpec ind = square_well(3.0, 1.0);
  double bound = hs_bound_d3(ind, 1024);
  CHECK(bound == doctest::Approx(9.0 / 4.0).epsilon(2e-4));

  PotentialSpec slow = table_potential({0.0, 1.0, 2.0}, {-1.0, -0.5, 0.0}, 1.5);
  CHECK_THROWS_AS(hs_bound_d3(slow, 128), DivergentBound);
}

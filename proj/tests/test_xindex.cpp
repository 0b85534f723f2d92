#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "specidx/errors.hpp"
#include "specidx/lattice.hpp"
#include "specidx/xindex.hpp"

using namespace specidx;

namespace {

std::vector<double> linear_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
  return g;
}

PotentialSpec repulsive_gaussian(double height) {
  return PotentialSpec::make(
      [height](double x) { return height * std::exp(-x * x); }, 100.0,
      std::sqrt(-std::log(1e-14)) * 1.01, "repulsive");
}

}  // namespace

TEST_CASE("xi_essential sign structure") {
  // Attractive: J = -I and xi = -N((1,inf); A0).
  PotentialSpec v = gaussian_well(4.0);
  for (double lam : {0.3, 1.0, 3.0}) {
    XiPoint pt = xi_essential(lam, v, 96);
    if (!pt.xi) continue;
    BSOperator op = a0_b0_1d(lam, v, 96);
    VectorXd ev = sym_eigenvalues(op.a0);
    int above = 0;
    for (int i = 0; i < ev.size(); ++i)
      if (ev(i) > 1.0) ++above;
    CHECK(*pt.xi == -above);
    CHECK(*pt.xi <= 0);
  }

  // Repulsive: J = +I and xi = N((-inf,-1); A0).
  PotentialSpec vp = repulsive_gaussian(4.0);
  for (double lam : {0.3, 1.0, 3.0}) {
    XiPoint pt = xi_essential(lam, vp, 96);
    if (!pt.xi) continue;
    BSOperator op = a0_b0_1d(lam, vp, 96);
    VectorXd ev = sym_eigenvalues(op.a0);
    int below = 0;
    for (int i = 0; i < ev.size(); ++i)
      if (ev(i) < -1.0) ++below;
    CHECK(*pt.xi == below);
    CHECK(*pt.xi >= 0);
  }

  // Large lambda: ||A0|| < 1 forces xi = 0.
  XiPoint hi = xi_essential(200.0, v, 128);
  CHECK(hi.a0_norm < 1.0);
  REQUIRE(hi.xi.has_value());
  CHECK(*hi.xi == 0);

  CHECK_THROWS_AS(xi_essential(-1.0, v, 96), OutOfRange);
}

TEST_CASE("counting route equals the projection-pair route") {
  PotentialSpec v = gaussian_well(6.0);
  for (double lam : {0.2, 0.9, 2.2, 7.0}) {
    XiPoint pt = xi_essential(lam, v, 64);
    auto via_proj = xi_essential_via_projections(lam, v, 64);
    CHECK(pt.xi.has_value() == via_proj.has_value());
    if (pt.xi && via_proj) CHECK(*pt.xi == *via_proj);
  }
}

TEST_CASE("xi_curve trivial and weak-coupling cases") {
  XiCurve zero = xi_curve(zero_potential(), linear_grid(0.1, 5.0, 20), 64);
  for (auto x : zero.xi) {
    REQUIRE(x.has_value());
    CHECK(*x == 0);
  }
  CHECK(zero.jumps.empty());

  PotentialSpec weak = gaussian_well(0.1);
  XiCurve wc = xi_curve(weak, linear_grid(0.1, 5.0, 24), 96);
  for (size_t i = 0; i < wc.lambdas.size(); ++i) {
    CHECK(operator_norm_sym(a0_b0_1d(wc.lambdas[i], weak, 96).a0) < 1.0);
    REQUIRE(wc.xi[i].has_value());
    CHECK(*wc.xi[i] == 0);
  }
  CHECK(wc.jumps.empty());
}

TEST_CASE("deep well: nonpositive staircase ascending to zero") {
  PotentialSpec v = gaussian_well(8.0);
  XiCurve curve = xi_curve(v, linear_grid(0.05, 25.0, 80), 96);
  CHECK(!curve.jumps.empty());
  int defined = 0;
  for (auto x : curve.xi)
    if (x) {
      CHECK(*x <= 0);
      ++defined;
    }
  CHECK(defined >= 70);
  // last defined value at the top of the window is 0
  for (int i = static_cast<int>(curve.xi.size()) - 1; i >= 0; --i) {
    if (curve.xi[i]) {
      CHECK(*curve.xi[i] == 0);
      break;
    }
  }
  for (const auto& j : curve.jumps) {
    CHECK(j.jump > 0);  // steps ascend
    CHECK(j.hi - j.lo <= 1e-4 * 1.0001);
  }
}

TEST_CASE("piecewise constancy between refined brackets") {
  PotentialSpec v = gaussian_well(8.0);
  XiCurve curve = xi_curve(v, linear_grid(0.05, 25.0, 40), 96);
  REQUIRE(!curve.jumps.empty());
  std::vector<double> edges = {0.05};
  for (const auto& j : curve.jumps) {
    edges.push_back(j.lo);
    edges.push_back(j.hi);
  }
  edges.push_back(25.0);
  for (size_t seg = 0; seg + 1 < edges.size(); seg += 2) {
    double lo = edges[seg] * 1.001 + 1e-4, hi = edges[seg + 1] * 0.999 - 1e-4;
    if (hi <= lo) continue;
    std::optional<int> ref;
    for (int t = 0; t < 10; ++t) {
      double lam = lo + (hi - lo) * t / 9.0;
      XiPoint pt = xi_essential(lam, v, 96);
      if (!pt.xi) continue;
      if (!ref) ref = pt.xi;
      CHECK(*pt.xi == *ref);
    }
  }
}

TEST_CASE("bracket count is stable under grid refinement") {
  PotentialSpec v = gaussian_well(8.0);  // super-exponential decay
  XiCurve coarse = xi_curve(v, linear_grid(0.05, 25.0, 40), 96);
  XiCurve fine = xi_curve(v, linear_grid(0.05, 25.0, 160), 96);
  CHECK(fine.jumps.size() == coarse.jumps.size());
}

TEST_CASE("lattice antisymmetry under swapping the pair") {
  Grid1D g = Grid1D::make(-20.0, 20.0, 300);
  DenseSelfAdjoint h0 = build_h0(g);
  DenseSelfAdjoint hd = build_h(g, square_well(2.0, 1.0));
  for (double lam : {-0.5, 0.234, 1.618}) {
    CHECK(xi_direct(h0, hd, lam) == -xi_direct(hd, h0, lam));
  }
}

TEST_CASE("general-J principle on the lattice") {
  // xi_direct agrees with the index of the pair of negative spectral
  // projections of (J^{-1} + T0, J^{-1}) for lam below both spectra.
  Grid1D g = Grid1D::make(-20.0, 20.0, 400);
  DenseSelfAdjoint h0 = build_h0(g);
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 4; ++trial) {
    PotentialSpec v = random_potential(rng, trial % 2 == 0);
    DenseSelfAdjoint hd = build_h(g, v);
    std::vector<int> support = support_indices(g, v);
    VectorXd jdiag = j_sign_on_support(g, v, support);
    MatrixXd jmat = jdiag.asDiagonal();
    for (double lam : {-0.7, -0.2}) {
      SandwichedResolvent t0 = t0_matrix(h0, v, Complex(lam, 0.0));
      auto bs = negative_count_index(t0.matrix.real() + jmat, jmat, 1e-11);
      REQUIRE(bs.has_value());
      CHECK(xi_direct(h0, hd, lam) == *bs);
    }
  }
}

TEST_CASE("bound report") {
  PotentialSpec v = gaussian_well(8.0);
  XiCurve curve = xi_curve(v, linear_grid(0.05, 20.0, 30), 96);
  BoundReport rep = bound_report(curve, v, 96);
  CHECK(rep.violations().empty());
  for (const auto& e : rep.entries) {
    CHECK(e.rank_hi == 0);  // V <= 0: no positive part
    CHECK(e.xi <= 0);
  }

  XiCurve zc = xi_curve(zero_potential(), linear_grid(0.5, 2.0, 5), 64);
  BoundReport zr = bound_report(zc, zero_potential(), 64);
  for (const auto& e : zr.entries) {
    CHECK(e.xi == 0);
    CHECK(e.c17_lo == 0);
    CHECK(e.c17_hi == 0);
  }

  // Mixed-sign potential: bounds hold across a 50-point sample.
  std::mt19937_64 rng(51);
  PotentialSpec mixed = random_potential(rng, false);
  XiCurve mc = xi_curve(mixed, linear_grid(0.05, 10.0, 50), 96);
  CHECK(bound_report(mc, mixed, 96).violations().empty());
}

TEST_CASE("radial channel truncation") {
  PotentialSpec weak = gaussian_well(0.2);
  RadialXi rx = xi_radial_truncated(1.0, weak, 4, 96);
  REQUIRE(rx.total.has_value());
  CHECK(*rx.total == 0);
  CHECK(rx.tail_a0_norm < 0.5);

  PotentialSpec deep = gaussian_well(8.0);
  RadialXi rd = xi_radial_truncated(0.5, deep, 6, 96);
  if (rd.total) {
    CHECK(*rd.total <= 0);
    for (auto ch : rd.per_channel)
      if (ch) CHECK(*ch <= 0);
  }
}

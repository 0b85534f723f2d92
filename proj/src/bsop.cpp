#include "specidx/bsop.hpp"

#include <algorithm>
#include <cmath>

#include "specidx/bessel.hpp"
#include "specidx/errors.hpp"
#include "specidx/parallel.hpp"
#include "specidx/quadrature.hpp"

namespace specidx {

namespace {

constexpr double kSupportCut = 1e-14;

void require_quadrature(double lam, int nquad) {
  if (!(lam > 0.0)) throw OutOfRange("BS operator: lam must be positive");
  if (nquad < 32) throw BadQuadrature("BS operator: nquad must be >= 32");
}

VectorXd sqrt_weighted_g(const PotentialSpec& v, const QuadRule& q) {
  VectorXd g(q.nodes.size());
  for (int i = 0; i < q.nodes.size(); ++i)
    g(i) = std::sqrt(q.weights(i)) * std::sqrt(std::abs(v(q.nodes(i))));
  return g;
}

}  // namespace

BSOperator a0_b0_1d(double lam, const PotentialSpec& v, int nquad) {
  require_quadrature(lam, nquad);
  const double k = std::sqrt(lam);
  const double r = v.support_radius;
  QuadRule q = gauss_legendre(nquad, -r, r);
  BSOperator op;
  op.lam = lam;
  op.k = k;
  op.nodes = q.nodes;
  op.weights = q.weights;
  VectorXd g = sqrt_weighted_g(v, q);
  op.a0.resize(nquad, nquad);
  op.b0.resize(nquad, nquad);
  for (int i = 0; i < nquad; ++i) {
    for (int j = 0; j <= i; ++j) {
      double d = std::abs(q.nodes(i) - q.nodes(j));
      double re = -std::sin(k * d) / (2.0 * k);
      double im = std::cos(k * d) / (2.0 * k);
      op.a0(i, j) = op.a0(j, i) = g(i) * re * g(j);
      op.b0(i, j) = op.b0(j, i) = g(i) * im * g(j);
    }
  }
  return op;
}

BSOperator a0_b0_radial_d3(double lam, const PotentialSpec& v_radial, int ell,
                           int nquad) {
  require_quadrature(lam, nquad);
  if (ell < 0) throw OutOfRange("a0_b0_radial_d3: ell must be >= 0");
  const double k = std::sqrt(lam);
  const double r = v_radial.support_radius;
  QuadRule q = gauss_legendre(nquad, 0.0, r);
  BSOperator op;
  op.lam = lam;
  op.k = k;
  op.nodes = q.nodes;
  op.weights = q.weights;
  op.channel = ell;
  VectorXd g = sqrt_weighted_g(v_radial, q);
  VectorXd sl(nquad), cl(nquad);
  for (int i = 0; i < nquad; ++i) {
    sl(i) = riccati_s(ell, k * q.nodes(i))[ell];
    cl(i) = riccati_c(ell, k * q.nodes(i))[ell];
  }
  op.a0.resize(nquad, nquad);
  op.b0.resize(nquad, nquad);
  for (int i = 0; i < nquad; ++i) {
    for (int j = 0; j <= i; ++j) {
      // nodes ascend, so j indexes r_< and i indexes r_>.
      double re = sl(j) * cl(i) / k;
      double im = sl(j) * sl(i) / k;
      op.a0(i, j) = op.a0(j, i) = g(i) * re * g(j);
      op.b0(i, j) = op.b0(j, i) = g(i) * im * g(j);
    }
  }
  return op;
}

VectorXd j_sign_nodes(const PotentialSpec& v, const VectorXd& nodes) {
  VectorXd j(nodes.size());
  for (int i = 0; i < nodes.size(); ++i)
    j(i) = v(nodes(i)) >= 0.0 ? 1.0 : -1.0;
  return j;
}

DenseSelfAdjoint assemble_bsmat(const VectorXd& jdiag, const BSOperator& op,
                                std::optional<double> theta) {
  if (jdiag.size() != op.a0.rows())
    throw NumericalError("assemble_bsmat: J dimension mismatch");
  MatrixXd m = op.a0;
  m += MatrixXd(jdiag.asDiagonal());  // J^{-1} = J for a +-1 diagonal
  std::string label = "Jinv+A0";
  if (theta) {
    if (!(*theta > 0.0 && *theta < 2.0 * M_PI))
      throw ThetaDegenerate("assemble_bsmat: theta outside (0, 2 pi)");
    double c = std::tan(0.5 * *theta);
    if (c == 0.0 || std::abs(1.0 / c) > 1e12)
      throw ThetaDegenerate("assemble_bsmat: cot(theta/2) blows up");
    m += (1.0 / c) * op.b0;
    label = "Jinv+A0+cot(theta/2)B0";
  }
  return DenseSelfAdjoint::make(std::move(m), std::nullopt, label);
}

namespace {

// Lattice free resolvent kernel at the Nystrom nodes via hat-function
// sources and linear interpolation of the solutions; one banded solve per
// node.  `lo` is the left Dirichlet endpoint.
MatrixXcd hat_resolvent_on_nodes(double lo, double hi, int n, Complex z,
                                 const VectorXd& nodes) {
  const double h = (hi - lo) / (n + 1);
  VectorXd diag = VectorXd::Constant(n, 2.0 / (h * h));
  VectorXd off = VectorXd::Constant(n - 1, -1.0 / (h * h));
  TridiagSolver solver(diag, off, z);
  const int m = static_cast<int>(nodes.size());

  struct Hat {
    int j0;      // left interior index; -1 if the node hugs the boundary
    double th;   // fractional position within the cell
  };
  std::vector<Hat> hats(m);
  for (int a = 0; a < m; ++a) {
    double t = (nodes(a) - lo) / h;  // in (0, n+1)
    int cell = static_cast<int>(std::floor(t));
    double th = t - cell;
    hats[a] = {cell - 1, th};  // interior point j has t = j+1
  }

  MatrixXcd out(m, m);
  VectorXcd rhs = VectorXcd::Zero(n);
  for (int b = 0; b < m; ++b) {
    const auto& s = hats[b];
    if (s.j0 >= 0) rhs(s.j0) = Complex((1.0 - s.th) / h, 0.0);
    if (s.j0 + 1 < n) rhs(s.j0 + 1) = Complex(s.th / h, 0.0);
    VectorXcd u = solver.solve(rhs);
    if (s.j0 >= 0) rhs(s.j0) = Complex(0.0, 0.0);
    if (s.j0 + 1 < n) rhs(s.j0 + 1) = Complex(0.0, 0.0);
    for (int a = 0; a < m; ++a) {
      const auto& t = hats[a];
      Complex left = (t.j0 >= 0) ? u(t.j0) : Complex(0.0, 0.0);
      Complex right = (t.j0 + 1 < n) ? u(t.j0 + 1) : Complex(0.0, 0.0);
      out(a, b) = (1.0 - t.th) * left + t.th * right;
    }
  }
  return 0.5 * (out + out.transpose().eval());
}

MatrixXcd eps_oracle_impl(double lam, double eps, const PotentialSpec& v,
                          int nquad, const EpsOracleParams& params,
                          bool half_line) {
  require_quadrature(lam, nquad);
  if (!(eps > 0.0)) throw OutOfRange("t0_eps_oracle: eps must be positive");
  const double k = std::sqrt(lam);
  const double r = v.support_radius;
  QuadRule q = half_line ? gauss_legendre(nquad, 0.0, r)
                         : gauss_legendre(nquad, -r, r);
  VectorXd g = sqrt_weighted_g(v, q);

  const double eps_min = eps / 4.0;
  double box = params.box;
  if (box <= 0.0) {
    double imk = std::sqrt(Complex(lam, eps_min)).imag();
    box = r + params.damping_folds / (2.0 * imk);
  }
  if (box < r * 1.5) throw BoxTooSmall("t0_eps_oracle: box below support");
  double lo = half_line ? 0.0 : -box;
  double hi = box;
  int n = params.n;
  if (n <= 0) {
    // Phase-error budget of the lattice dispersion over the span the
    // kernel actually weights.
    double span = std::clamp(2.0 * r, 1.0, 16.0);
    double hstep =
        std::sqrt(2.4e-3 / (std::pow(std::max(k, 0.5), 3.0) * span));
    hstep = std::min(hstep, 0.02);
    n = static_cast<int>(std::ceil((hi - lo) / hstep));
  }

  auto evaluate = [&](double width_scale) {
    double hi_s = lo + (hi - lo) * width_scale;
    int n_s = static_cast<int>(n * width_scale);
    MatrixXcd acc = MatrixXcd::Zero(nquad, nquad);
    // Lagrange extrapolation to eps -> 0 through (eps, eps/2, eps/4).
    const double e[3] = {eps, eps / 2.0, eps / 4.0};
    for (int m = 0; m < 3; ++m) {
      double coef = 1.0;
      for (int j = 0; j < 3; ++j)
        if (j != m) coef *= (0.0 - e[j]) / (e[m] - e[j]);
      MatrixXcd ker =
          hat_resolvent_on_nodes(lo, hi_s, n_s, Complex(lam, e[m]), q.nodes);
      acc += coef * ker;
    }
    return MatrixXcd(g.asDiagonal() * acc * g.asDiagonal());
  };

  MatrixXcd result = evaluate(1.0);
  if (params.probe_box) {
    MatrixXcd probe = evaluate(2.0);
    double moved = operator_norm(result - probe);
    if (moved > 10.0 * params.target_accuracy)
      throw BoxTooSmall("t0_eps_oracle: doubling the box moved the result");
  }
  return result;
}

}  // namespace

MatrixXcd t0_eps_oracle(double lam, double eps, const PotentialSpec& v,
                        int nquad, const EpsOracleParams& params) {
  return eps_oracle_impl(lam, eps, v, nquad, params, /*half_line=*/false);
}

MatrixXcd t0_eps_oracle_radial_s(double lam, double eps,
                                 const PotentialSpec& v, int nquad,
                                 const EpsOracleParams& params) {
  return eps_oracle_impl(lam, eps, v, nquad, params, /*half_line=*/true);
}

SingularSet scan_singular_set(const PotentialSpec& v,
                              const std::vector<double>& lam_grid, int nquad,
                              double tol_sing) {
  for (size_t i = 0; i + 1 < lam_grid.size(); ++i)
    if (!(lam_grid[i + 1] > lam_grid[i]))
      throw ConfigError("scan_singular_set: lam grid must increase");
  if (!lam_grid.empty() && !(lam_grid.front() > 0.0))
    throw ConfigError("scan_singular_set: lam grid must be positive");
  SingularSet set;
  set.tol_sing = tol_sing;
  set.lambdas = lam_grid;
  set.min_singvals.resize(lam_grid.size());
  set.singular.assign(lam_grid.size(), false);
  parallel_for(static_cast<int>(lam_grid.size()), [&](int i) {
    BSOperator op = a0_b0_1d(lam_grid[i], v, nquad);
    DenseSelfAdjoint m = assemble_bsmat(j_sign_nodes(v, op.nodes), op);
    VectorXd ev = sym_eigenvalues(m.matrix);
    set.min_singvals[i] = ev.cwiseAbs().minCoeff();
  });
  for (size_t i = 0; i < lam_grid.size(); ++i)
    set.singular[i] = set.min_singvals[i] < tol_sing;
  return set;
}

double hs_bound_d3(const PotentialSpec& v_radial, int nquad) {
  if (!(v_radial.rho > 2.0))
    throw DivergentBound("hs_bound_d3: needs decay exponent rho > 2");
  if (v_radial.is_zero()) return 0.0;
  const int cells = std::max(64, nquad);
  const double r = v_radial.support_radius;
  const double dx = r / cells;

  // Angular reduction: bound = (1/2) int int r s |V(r)||V(s)|
  //   ln((r+s)/|r-s|) dr ds.  Midpoint rule in the smooth factor, exact
  // cell integrals for the log singularity via F(t) = t^2/2 ln|t| - 3t^2/4.
  auto f2 = [](double t) {
    if (t == 0.0) return 0.0;
    return 0.5 * t * t * std::log(std::abs(t)) - 0.75 * t * t;
  };
  std::vector<double> mid(cells), fval(cells);
  for (int i = 0; i < cells; ++i) {
    mid[i] = (i + 0.5) * dx;
    fval[i] = mid[i] * std::abs(v_radial(mid[i]));
  }
  double total = 0.0;
  for (int i = 0; i < cells; ++i) {
    if (fval[i] == 0.0) continue;
    double ai = i * dx, bi = ai + dx;
    for (int j = 0; j < cells; ++j) {
      if (fval[j] == 0.0) continue;
      double cj = j * dx, dj = cj + dx;
      double smooth = std::log(mid[i] + mid[j]) * dx * dx;
      double singular = -(f2(bi - dj) - f2(bi - cj) - f2(ai - dj) + f2(ai - cj));
      total += fval[i] * fval[j] * (smooth - singular);
    }
  }
  return 0.5 * total;
}

}  // namespace specidx

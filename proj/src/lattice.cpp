#include "specidx/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "specidx/errors.hpp"

namespace specidx {

namespace {

constexpr double kSupportCut = 1e-14;

struct TridiagBands {
  VectorXd diag, offdiag;
};

TridiagBands extract_bands(const MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  TridiagBands b;
  b.diag.resize(n);
  b.offdiag.resize(std::max(0, n - 1));
  for (int i = 0; i < n; ++i) b.diag(i) = m(i, i);
  for (int i = 0; i + 1 < n; ++i) b.offdiag(i) = m(i + 1, i);
  return b;
}

// Columns of (M - z)^{-1} restricted to `cols`, rows restricted to `cols`.
MatrixXcd resolvent_block(const MatrixXd& m, Complex z,
                          const std::vector<int>& cols) {
  const int n = static_cast<int>(m.rows());
  const int k = static_cast<int>(cols.size());
  MatrixXcd out(k, k);
  if (is_tridiagonal(m)) {
    TridiagBands b = extract_bands(m);
    TridiagSolver solver(b.diag, b.offdiag, z);
    VectorXcd rhs = VectorXcd::Zero(n);
    for (int j = 0; j < k; ++j) {
      rhs(cols[j]) = Complex(1.0, 0.0);
      VectorXcd u = solver.solve(rhs);
      rhs(cols[j]) = Complex(0.0, 0.0);
      // Solution residual guards against near-singular real shifts: the
      // banded LU itself never fails off exact singularity.
      for (int i = 0; i < k; ++i) out(i, j) = u(cols[i]);
      if (j == 0) {
        VectorXcd r = m.cast<Complex>() * u - z * u;
        r(cols[0]) -= Complex(1.0, 0.0);
        if (r.norm() > 1e-6 * u.norm() * (m.cwiseAbs().maxCoeff() + std::abs(z)))
          throw SingularShift("resolvent solve: shift too close to spectrum");
      }
    }
    return out;
  }
  MatrixXcd shifted = m.cast<Complex>();
  shifted.diagonal().array() -= z;
  Eigen::PartialPivLU<MatrixXcd> lu(shifted);
  if (lu.rcond() < 1e-13)
    throw SingularShift("resolvent solve: shift too close to spectrum");
  MatrixXcd rhs = MatrixXcd::Zero(n, k);
  for (int j = 0; j < k; ++j) rhs(cols[j], j) = Complex(1.0, 0.0);
  MatrixXcd sol = lu.solve(rhs);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i) out(i, j) = sol(cols[i], j);
  return out;
}

SandwichedResolvent sandwich(const DenseSelfAdjoint& op,
                             const PotentialSpec& v, Complex z) {
  if (!op.grid)
    throw NumericalError("sandwiched resolvent requires a lattice operator");
  const Grid1D& g = *op.grid;
  SandwichedResolvent sr;
  sr.z = z;
  sr.support = support_indices(g, v);
  const int k = static_cast<int>(sr.support.size());
  sr.weights = VectorXd::Constant(k, g.h);
  if (k == 0) {
    sr.matrix = MatrixXcd::Zero(0, 0);
    return sr;
  }
  VectorXd gvals(k);
  for (int j = 0; j < k; ++j)
    gvals(j) = std::sqrt(std::abs(v(g.point(sr.support[j]))));
  MatrixXcd block = resolvent_block(op.matrix, z, sr.support);
  sr.matrix = gvals.asDiagonal() * block * gvals.asDiagonal();
  return sr;
}

}  // namespace

Grid1D Grid1D::make(double a, double b, int n) {
  if (!(b > a)) throw ConfigError("Grid1D: b must exceed a");
  if (n < 3) throw ConfigError("Grid1D: need at least 3 interior points");
  Grid1D g;
  g.a = a;
  g.b = b;
  g.n = n;
  g.h = (b - a) / (n + 1);
  return g;
}

DenseSelfAdjoint DenseSelfAdjoint::make(MatrixXd m, std::optional<Grid1D> grid,
                                        std::string label) {
  double scale = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, scale))
    throw NumericalError("DenseSelfAdjoint: matrix not symmetric");
  DenseSelfAdjoint d;
  d.matrix = 0.5 * (m + m.transpose().eval());
  d.grid = grid;
  d.label = std::move(label);
  return d;
}

DenseSelfAdjoint build_h0(const Grid1D& grid) {
  MatrixXd m = MatrixXd::Zero(grid.n, grid.n);
  const double inv_h2 = 1.0 / (grid.h * grid.h);
  for (int i = 0; i < grid.n; ++i) {
    m(i, i) = 2.0 * inv_h2;
    if (i + 1 < grid.n) {
      m(i, i + 1) = -inv_h2;
      m(i + 1, i) = -inv_h2;
    }
  }
  return DenseSelfAdjoint::make(std::move(m), grid, "h0");
}

DenseSelfAdjoint build_h(const Grid1D& grid, const PotentialSpec& v) {
  if (v.support_radius > std::min(std::abs(grid.a), std::abs(grid.b)))
    throw SupportExceedsBox("build_h: potential support exceeds the box");
  DenseSelfAdjoint h = build_h0(grid);
  const double cut = kSupportCut * v.max_abs;
  for (int j = 0; j < grid.n; ++j) {
    double val = v(grid.point(j));
    if (std::abs(val) > cut) h.matrix(j, j) += val;
  }
  h.label = "h0+" + v.name;
  return h;
}

int counting(const VectorXd& eigenvalues, double lam) {
  double scale = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
    scale = std::max(scale, std::abs(eigenvalues(i)));
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
    if (std::abs(eigenvalues(i) - lam) <= 1e-9 * scale)
      throw EigenvalueAtThreshold("counting: lam sits on the spectrum");
  return count_below(eigenvalues, lam);
}

int counting(const DenseSelfAdjoint& m, double lam) {
  return counting(sym_eigenvalues(m.matrix), lam);
}

OrthProjection spectral_projection(const DenseSelfAdjoint& m, double lam) {
  SymEig es = sym_eigensystem(m.matrix);
  int k = counting(es.values, lam);
  MatrixXd sel = es.vectors.leftCols(k);
  OrthProjection p = OrthProjection::from_matrix(sel * sel.transpose());
  double mnorm = std::max(std::abs(es.values(0)),
                          std::abs(es.values(es.values.size() - 1)));
  double comm = (p.matrix * m.matrix - m.matrix * p.matrix).cwiseAbs().maxCoeff();
  if (comm > 1e-8 * std::max(1.0, mnorm))
    throw NumericalError("spectral_projection: commutator residual too large");
  return p;
}

int xi_direct(const DenseSelfAdjoint& h0d, const DenseSelfAdjoint& hd,
              double lam) {
  OrthProjection p0 = spectral_projection(h0d, lam);
  OrthProjection p = spectral_projection(hd, lam);
  return index_pair(p0, p).value;
}

std::vector<int> support_indices(const Grid1D& grid, const PotentialSpec& v) {
  double vmax = 0.0;
  for (int j = 0; j < grid.n; ++j)
    vmax = std::max(vmax, std::abs(v(grid.point(j))));
  std::vector<int> idx;
  if (vmax == 0.0) return idx;
  for (int j = 0; j < grid.n; ++j)
    if (std::abs(v(grid.point(j))) > kSupportCut * vmax) idx.push_back(j);
  return idx;
}

VectorXd j_sign_on_support(const Grid1D& grid, const PotentialSpec& v,
                           const std::vector<int>& support) {
  VectorXd j(static_cast<int>(support.size()));
  for (size_t i = 0; i < support.size(); ++i)
    j(static_cast<int>(i)) = v(grid.point(support[i])) >= 0.0 ? 1.0 : -1.0;
  return j;
}

SandwichedResolvent t0_matrix(const DenseSelfAdjoint& h0d,
                              const PotentialSpec& v, Complex z) {
  return sandwich(h0d, v, z);
}

SandwichedResolvent t_matrix(const DenseSelfAdjoint& hd,
                             const PotentialSpec& v, Complex z) {
  return sandwich(hd, v, z);
}

double resolvent_identity_residual(const DenseSelfAdjoint& h0d,
                                   const DenseSelfAdjoint& hd,
                                   const PotentialSpec& v, Complex z) {
  SandwichedResolvent t0 = t0_matrix(h0d, v, z);
  SandwichedResolvent t = t_matrix(hd, v, z);
  const int k = t0.dim();
  if (k == 0) return 0.0;
  if (!h0d.grid)
    throw NumericalError("resolvent_identity_residual: lattice operators required");
  MatrixXcd j = j_sign_on_support(*h0d.grid, v, t0.support)
                    .cast<Complex>()
                    .asDiagonal();
  MatrixXcd lhs =
      (j + t0.matrix) * (j - j * t.matrix * j) - MatrixXcd::Identity(k, k);
  return operator_norm(lhs);
}

namespace {

// Negative inertia of J + T0(lam) on the support of V.
class BsCountFn {
 public:
  BsCountFn(const DenseSelfAdjoint& h0d, const PotentialSpec& v)
      : h0d_(h0d), v_(v) {
    support_ = support_indices(*h0d.grid, v);
    jdiag_ = j_sign_on_support(*h0d.grid, v, support_);
  }

  int support_size() const { return static_cast<int>(support_.size()); }

  bool sign_definite() const {
    if (support_.empty()) return true;
    double first = jdiag_(0);
    for (Eigen::Index i = 1; i < jdiag_.size(); ++i)
      if (jdiag_(i) != first) return false;
    return true;
  }

  int operator()(double lam) const {
    SandwichedResolvent t0 = t0_matrix(h0d_, v_, Complex(lam, 0.0));
    MatrixXd m = t0.matrix.real();
    m += MatrixXd(jdiag_.asDiagonal());
    return negative_inertia(std::move(m));
  }

 private:
  const DenseSelfAdjoint& h0d_;
  const PotentialSpec& v_;
  std::vector<int> support_;
  VectorXd jdiag_;
};

void locate_crossings(const BsCountFn& count, double lo, double hi, int c_lo,
                      int c_hi, double tol, std::vector<double>* out) {
  if (c_lo == c_hi) return;
  if (hi - lo <= tol) {
    double mid = 0.5 * (lo + hi);
    for (int r = 0; r < std::abs(c_hi - c_lo); ++r) out->push_back(mid);
    return;
  }
  double mid = 0.5 * (lo + hi);
  int c_mid = count(mid);
  locate_crossings(count, lo, mid, c_lo, c_mid, tol, out);
  locate_crossings(count, mid, hi, c_mid, c_hi, tol, out);
}

}  // namespace

std::vector<double> bs_bound_states(const DenseSelfAdjoint& h0d,
                                    const PotentialSpec& v,
                                    const BoundStateOptions& opts) {
  if (!h0d.grid) throw NumericalError("bs_bound_states: lattice operator required");
  std::vector<double> states;
  BsCountFn count(h0d, v);
  if (count.support_size() == 0) return states;

  const double lo = -v.max_abs - 0.5;
  const double hi = opts.lambda_ceiling;
  if (!(hi > lo)) return states;

  if (count.sign_definite()) {
    locate_crossings(count, lo, hi, count(lo), count(hi), opts.bisect_tol,
                     &states);
  } else {
    // Eigenvalue branches of J + T0 need not be monotone for mixed-sign V;
    // scan densely, then refine each changing cell.
    int cells = std::max(2, static_cast<int>(std::ceil((hi - lo) / opts.scan_step)));
    double prev = lo;
    int c_prev = count(lo);
    for (int i = 1; i <= cells; ++i) {
      double x = lo + (hi - lo) * i / cells;
      int c = count(x);
      if (c != c_prev)
        locate_crossings(count, prev, x, c_prev, c, opts.bisect_tol, &states);
      prev = x;
      c_prev = c;
    }
  }
  std::sort(states.begin(), states.end());
  return states;
}

}  // namespace specidx

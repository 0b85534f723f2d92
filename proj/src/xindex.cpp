#include "specidx/xindex.hpp"

#include <algorithm>
#include <cmath>

#include "specidx/errors.hpp"
#include "specidx/parallel.hpp"

namespace specidx {

std::optional<int> negative_count_index(const MatrixXd& lhs,
                                        const MatrixXd& rhs, double tol_sing) {
  VectorXd el = sym_eigenvalues(lhs);
  VectorXd er = sym_eigenvalues(rhs);
  if (el.cwiseAbs().minCoeff() < tol_sing ||
      er.cwiseAbs().minCoeff() < tol_sing)
    return std::nullopt;
  return count_below(el, 0.0) - count_below(er, 0.0);
}

namespace {

XiPoint xi_from_operator(const BSOperator& op, const VectorXd& jdiag,
                         double tol) {
  XiPoint pt;
  pt.lam = op.lam;
  pt.a0_norm = operator_norm_sym(op.a0);
  DenseSelfAdjoint m = assemble_bsmat(jdiag, op);
  VectorXd ev = sym_eigenvalues(m.matrix);
  pt.min_singval = ev.cwiseAbs().minCoeff();
  const double tol_eff = tol * (1.0 + pt.a0_norm);
  if (pt.min_singval < tol_eff) return pt;  // lam in the singular-set proxy
  int neg_j = 0;
  for (int i = 0; i < jdiag.size(); ++i)
    if (jdiag(i) < 0.0) ++neg_j;
  pt.xi = count_below(ev, 0.0) - neg_j;
  return pt;
}

}  // namespace

XiPoint xi_essential(double lam, const PotentialSpec& v, int nquad,
                     double tol) {
  BSOperator op = a0_b0_1d(lam, v, nquad);
  return xi_from_operator(op, j_sign_nodes(v, op.nodes), tol);
}

std::optional<int> xi_essential_via_projections(double lam,
                                                const PotentialSpec& v,
                                                int nquad, double tol) {
  BSOperator op = a0_b0_1d(lam, v, nquad);
  VectorXd jdiag = j_sign_nodes(v, op.nodes);
  DenseSelfAdjoint m = assemble_bsmat(jdiag, op);
  VectorXd ev = sym_eigenvalues(m.matrix);
  if (ev.cwiseAbs().minCoeff() < tol * (1.0 + operator_norm_sym(op.a0)))
    return std::nullopt;
  DenseSelfAdjoint jmat = DenseSelfAdjoint::make(
      MatrixXd(jdiag.asDiagonal()), std::nullopt, "Jinv");
  OrthProjection p = spectral_projection(m, 0.0);
  OrthProjection q = spectral_projection(jmat, 0.0);
  return index_pair(p, q).value;
}

namespace {

void refine_jump(const PotentialSpec& v, int nquad, double tol, double width,
                 double lo, double hi, int xi_lo, int xi_hi, int depth,
                 std::vector<XiJump>* out) {
  if (xi_lo == xi_hi) return;
  if (hi - lo <= width || depth > 64) {
    out->push_back({lo, hi, xi_hi - xi_lo});
    return;
  }
  // Probe near the middle; step aside if the midpoint lands in the
  // singular set.
  static constexpr double kProbes[] = {0.5, 0.4375, 0.5625, 0.375, 0.625};
  for (double frac : kProbes) {
    double mid = lo + frac * (hi - lo);
    XiPoint p = xi_essential(mid, v, nquad, tol);
    if (!p.xi) continue;
    if (*p.xi == xi_lo) {
      refine_jump(v, nquad, tol, width, mid, hi, xi_lo, xi_hi, depth + 1, out);
    } else if (*p.xi == xi_hi) {
      refine_jump(v, nquad, tol, width, lo, mid, xi_lo, xi_hi, depth + 1, out);
    } else {
      refine_jump(v, nquad, tol, width, lo, mid, xi_lo, *p.xi, depth + 1, out);
      refine_jump(v, nquad, tol, width, mid, hi, *p.xi, xi_hi, depth + 1, out);
    }
    return;
  }
  out->push_back({lo, hi, xi_hi - xi_lo});  // singular set fills the bracket
}

}  // namespace

XiCurve xi_curve(const PotentialSpec& v, const std::vector<double>& lam_grid,
                 int nquad, double tol, double bracket_width) {
  for (size_t i = 0; i + 1 < lam_grid.size(); ++i)
    if (!(lam_grid[i + 1] > lam_grid[i]))
      throw ConfigError("xi_curve: lam grid must increase");
  if (!lam_grid.empty() && !(lam_grid.front() > 0.0))
    throw ConfigError("xi_curve: lam grid must be positive");

  XiCurve curve;
  curve.lambdas = lam_grid;
  const int npts = static_cast<int>(lam_grid.size());
  curve.xi.resize(npts);
  curve.fredholm.resize(npts);
  curve.min_singvals.resize(npts);
  std::vector<XiPoint> pts(npts);
  parallel_for(npts, [&](int i) {
    pts[i] = xi_essential(lam_grid[i], v, nquad, tol);
  });
  for (int i = 0; i < npts; ++i) {
    curve.xi[i] = pts[i].xi;
    curve.fredholm[i] = pts[i].fredholm();
    curve.min_singvals[i] = pts[i].min_singval;
  }

  // Jump brackets between consecutive defined values.
  int prev = -1;
  for (int i = 0; i < npts; ++i) {
    if (!curve.xi[i]) continue;
    if (prev >= 0 && *curve.xi[prev] != *curve.xi[i])
      refine_jump(v, nquad, tol, bracket_width, lam_grid[prev], lam_grid[i],
                  *curve.xi[prev], *curve.xi[i], 0, &curve.jumps);
    prev = i;
  }
  std::sort(curve.jumps.begin(), curve.jumps.end(),
            [](const XiJump& a, const XiJump& b) { return a.lo < b.lo; });
  return curve;
}

std::vector<BoundCheck> BoundReport::violations() const {
  std::vector<BoundCheck> bad;
  for (const auto& e : entries)
    if (!e.ok) bad.push_back(e);
  return bad;
}

BoundReport bound_report(const XiCurve& curve, const PotentialSpec& v,
                         int nquad) {
  BoundReport report;
  for (size_t i = 0; i < curve.lambdas.size(); ++i) {
    if (!curve.xi[i]) continue;
    BSOperator op = a0_b0_1d(curve.lambdas[i], v, nquad);
    VectorXd ev = sym_eigenvalues(op.a0);
    BoundCheck c;
    c.lam = curve.lambdas[i];
    c.xi = *curve.xi[i];
    int above_one = 0, below_minus_one = 0;
    for (int t = 0; t < ev.size(); ++t) {
      if (ev(t) >= 1.0 - 1e-12) ++above_one;
      if (ev(t) <= -1.0 + 1e-12) ++below_minus_one;
    }
    c.c17_lo = -above_one;
    c.c17_hi = below_minus_one;
    int plus = 0, minus = 0;
    const double cut = 1e-14 * v.max_abs;
    for (int t = 0; t < op.nodes.size(); ++t) {
      double val = v(op.nodes(t));
      if (val > cut) ++plus;
      if (val < -cut) ++minus;
    }
    c.rank_lo = -minus;
    c.rank_hi = plus;
    c.ok = (c.c17_lo <= c.xi && c.xi <= c.c17_hi) &&
           (c.rank_lo <= c.xi && c.xi <= c.rank_hi);
    report.entries.push_back(c);
  }
  return report;
}

RadialXi xi_radial_truncated(double lam, const PotentialSpec& v_radial,
                             int ell_max, int nquad, double tol) {
  RadialXi out;
  out.per_channel.resize(ell_max + 1);
  long total = 0;
  bool defined = true;
  for (int ell = 0; ell <= ell_max; ++ell) {
    BSOperator op = a0_b0_radial_d3(lam, v_radial, ell, nquad);
    XiPoint pt = xi_from_operator(op, j_sign_nodes(v_radial, op.nodes), tol);
    out.per_channel[ell] = pt.xi;
    if (pt.xi)
      total += static_cast<long>(2 * ell + 1) * *pt.xi;
    else
      defined = false;
    if (ell == ell_max) out.tail_a0_norm = pt.a0_norm;
  }
  if (defined) out.total = static_cast<int>(total);
  return out;
}

}  // namespace specidx

#pragma once

#include <optional>
#include <vector>

#include "specidx/bsop.hpp"
#include "specidx/potentials.hpp"

namespace specidx {

/// Index of the pair of negative spectral projections of two symmetric
/// matrices: N(R_-; lhs) - N(R_-; rhs).  Returns nullopt (Fredholm failure)
/// when either matrix has an eigenvalue within tol_sing of zero.
std::optional<int> negative_count_index(const MatrixXd& lhs,
                                        const MatrixXd& rhs, double tol_sing);

struct XiPoint {
  double lam = 0.0;
  std::optional<int> xi;     // empty <=> lam in the numerical singular set
  double min_singval = 0.0;  // of J^{-1} + A0(lam)
  double a0_norm = 0.0;
  bool fredholm() const { return xi.has_value(); }
};

/// Xi(lam; H, H0) on the essential spectrum through the limiting
/// Birman-Schwinger matrix: N(R_-; J^{-1}+A0(lam)) - N(R_-; J^{-1}).
/// The effective singular tolerance is tol * (1 + ||A0||).
XiPoint xi_essential(double lam, const PotentialSpec& v, int nquad,
                     double tol = 1e-6);

/// Same value computed through explicit spectral projections and the
/// projection-pair index; used to cross-validate the counting route.
std::optional<int> xi_essential_via_projections(double lam,
                                                const PotentialSpec& v,
                                                int nquad, double tol = 1e-6);

struct XiJump {
  double lo = 0.0, hi = 0.0;
  int jump = 0;  // xi(hi side) - xi(lo side)
};

struct XiCurve {
  std::vector<double> lambdas;
  std::vector<std::optional<int>> xi;
  std::vector<bool> fredholm;
  std::vector<double> min_singvals;
  std::vector<XiJump> jumps;
};

/// xi_essential over the grid with jump brackets refined by bisection to
/// `bracket_width`.  Undefined points are kept, never interpolated over.
XiCurve xi_curve(const PotentialSpec& v, const std::vector<double>& lam_grid,
                 int nquad, double tol = 1e-6, double bracket_width = 1e-4);

struct BoundCheck {
  double lam;
  int xi;
  int c17_lo, c17_hi;    // -N([1,inf); A0) <= xi <= N((-inf,-1]; A0)
  int rank_lo, rank_hi;  // -rank V_- <= xi <= rank V_+ (node counts)
  bool ok;
};

struct BoundReport {
  std::vector<BoundCheck> entries;
  std::vector<BoundCheck> violations() const;
};

/// Checks the spectral and rank bounds at every defined point of the curve.
BoundReport bound_report(const XiCurve& curve, const PotentialSpec& v,
                         int nquad);

struct RadialXi {
  std::optional<int> total;  // sum over channels of (2l+1) xi_l
  std::vector<std::optional<int>> per_channel;
  double tail_a0_norm = 0.0;  // ||A0^{ell_max}||, reported truncation proxy
};

/// Channel-truncated index for radial d=3 potentials.
RadialXi xi_radial_truncated(double lam, const PotentialSpec& v_radial,
                             int ell_max, int nquad, double tol = 1e-6);

}  // namespace specidx

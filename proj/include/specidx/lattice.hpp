#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "specidx/linalg.hpp"
#include "specidx/potentials.hpp"
#include "specidx/projpair.hpp"

namespace specidx {

/// Uniform grid of n interior points of (a, b); Dirichlet box.
struct Grid1D {
  double a = 0.0, b = 1.0;
  int n = 3;
  double h = 0.25;

  static Grid1D make(double a, double b, int n);
  double point(int j) const { return a + (j + 1) * h; }  // j = 0..n-1
};

/// Discretized self-adjoint operator.  `grid` is set for lattice
/// Hamiltonians and empty for node-based matrices (Birman-Schwinger side).
struct DenseSelfAdjoint {
  MatrixXd matrix;
  std::optional<Grid1D> grid;
  std::string label;

  static DenseSelfAdjoint make(MatrixXd m, std::optional<Grid1D> grid,
                               std::string label);
  int dim() const { return static_cast<int>(matrix.rows()); }
};

/// -Delta with the 3-point Dirichlet stencil: 2/h^2 on the diagonal,
/// -1/h^2 off.  Positive definite; free spectrum 4 sin^2(j pi / (2(n+1)))/h^2.
DenseSelfAdjoint build_h0(const Grid1D& grid);

/// build_h0 + diag(V(x_j)).  Values of |V| below 1e-14 max|V| are clamped
/// to zero so the support set of the sandwiched resolvents matches exactly.
DenseSelfAdjoint build_h(const Grid1D& grid, const PotentialSpec& v);

/// Number of eigenvalues strictly below lam.  Throws EigenvalueAtThreshold
/// when lam is within 1e-9 ||M|| of the spectrum.
int counting(const DenseSelfAdjoint& m, double lam);
int counting(const VectorXd& eigenvalues, double lam);

/// E((-inf, lam); M) assembled from eigenvectors; commutes with M to
/// 1e-8 ||M||.
OrthProjection spectral_projection(const DenseSelfAdjoint& m, double lam);

/// index(E((-inf,lam); H0d), E((-inf,lam); Hd)); at finite dimension this
/// equals counting(H0d,lam) - counting(Hd,lam).
int xi_direct(const DenseSelfAdjoint& h0d, const DenseSelfAdjoint& hd,
              double lam);

/// Sandwiched resolvent restricted to the support of V.
struct SandwichedResolvent {
  MatrixXcd matrix;
  Complex z;
  VectorXd weights;           // lattice quadrature weight (h) per support node
  std::vector<int> support;   // grid indices carrying |V| > cutoff

  int dim() const { return static_cast<int>(matrix.rows()); }
};

/// Indices j with |V(x_j)| > 1e-14 max_j |V(x_j)|.
std::vector<int> support_indices(const Grid1D& grid, const PotentialSpec& v);

/// Diagonal of sign(V(x_j)) over the support (sign(0) = +1).
VectorXd j_sign_on_support(const Grid1D& grid, const PotentialSpec& v,
                           const std::vector<int>& support);

/// T0(z) = |V|^{1/2} (H0d - z)^{-1} |V|^{1/2} on the support of V, computed
/// by linear solves (banded when the operator is tridiagonal).
SandwichedResolvent t0_matrix(const DenseSelfAdjoint& h0d,
                              const PotentialSpec& v, Complex z);

/// T(z) with the perturbed operator in place of H0d.
SandwichedResolvent t_matrix(const DenseSelfAdjoint& hd,
                             const PotentialSpec& v, Complex z);

/// || (J^{-1} + T0(z)) (J - J T(z) J) - I ||, an exact identity when
/// hd = h0d + V.
double resolvent_identity_residual(const DenseSelfAdjoint& h0d,
                                   const DenseSelfAdjoint& hd,
                                   const PotentialSpec& v, Complex z);

struct BoundStateOptions {
  double bisect_tol = 1e-10;
  double lambda_ceiling = -1e-9;
  double scan_step = 1e-3;   // fallback grid for sign-indefinite V
};

/// Energies lam < 0 where J^{-1} + T0(lam) acquires a zero eigenvalue,
/// located by bisection on the negative-inertia count (monotone for
/// sign-definite V, dense scan fallback otherwise).  By the
/// Birman-Schwinger principle these are the eigenvalues of Hd below zero.
std::vector<double> bs_bound_states(const DenseSelfAdjoint& h0d,
                                    const PotentialSpec& v,
                                    const BoundStateOptions& opts = {});

}  // namespace specidx

#pragma once

#include <optional>
#include <vector>

#include "specidx/lattice.hpp"
#include "specidx/linalg.hpp"
#include "specidx/potentials.hpp"

namespace specidx {

/// Limiting Birman-Schwinger operator at lam + i0, Nystrom-discretized:
/// a0 = Re T0, b0 = Im T0, symmetrized as W^{1/2} K W^{1/2} on
/// Gauss-Legendre nodes over the support of V.
struct BSOperator {
  MatrixXd a0, b0;
  double lam = 0.0;
  double k = 0.0;
  VectorXd nodes, weights;
  std::optional<int> channel;  // radial d=3 angular channel
};

/// d=1 kernels: Re G0 = -sin(k|x-y|)/(2k), Im G0 = cos(k|x-y|)/(2k),
/// sandwiched by |V|^{1/2} on both sides.
BSOperator a0_b0_1d(double lam, const PotentialSpec& v, int nquad);

/// Radial d=3 channel ell on the half line, with the Riccati-Bessel
/// outgoing kernel G0 = (1/k) S_l(k r_<) [C_l(k r_>) + i S_l(k r_>)].
BSOperator a0_b0_radial_d3(double lam, const PotentialSpec& v_radial, int ell,
                           int nquad);

/// sign(V) at the Nystrom nodes (sign(0) = +1).
VectorXd j_sign_nodes(const PotentialSpec& v, const VectorXd& nodes);

/// J^{-1} + A0 (+ cot(theta/2) B0).  J is the +-1 diagonal on the nodes.
DenseSelfAdjoint assemble_bsmat(const VectorXd& jdiag, const BSOperator& op,
                                std::optional<double> theta = {});

struct EpsOracleParams {
  double box = 0.0;            // lattice half-width; 0 = auto from eps
  int n = 0;                   // lattice points; 0 = auto
  double damping_folds = 10.5; // e-foldings of boundary-reflection damping
  double target_accuracy = 1e-4;
  bool probe_box = true;       // doubling probe; throws BoxTooSmall
};

/// Independent construction of T0(lam + i0) on the Nystrom nodes: lattice
/// sandwiched resolvents at lam + i*eps for eps, eps/2, eps/4 on a large
/// Dirichlet box, hat-interpolated onto the nodes and Richardson
/// extrapolated to eps -> 0.
MatrixXcd t0_eps_oracle(double lam, double eps, const PotentialSpec& v,
                        int nquad, const EpsOracleParams& params = {});

/// Half-line (radial s-wave) variant with the Dirichlet endpoint at r = 0.
MatrixXcd t0_eps_oracle_radial_s(double lam, double eps,
                                 const PotentialSpec& v, int nquad,
                                 const EpsOracleParams& params = {});

struct SingularSet {
  std::vector<double> lambdas;
  std::vector<double> min_singvals;
  std::vector<bool> singular;
  double tol_sing = 0.0;
};

/// Smallest singular value of J^{-1} + A0(lam) over a lambda grid; entries
/// are flagged singular iff min_singval < tol_sing.
SingularSet scan_singular_set(const PotentialSpec& v,
                              const std::vector<double>& lam_grid, int nquad,
                              double tol_sing);

/// (1/16 pi^2) int int |V(x)||V(y)|/|x-y|^2 dx dy over R^3 x R^3 for radial
/// V, reduced to a 2-d radial quadrature with the angular integral done
/// analytically.  Throws DivergentBound unless the declared rho exceeds 2.
double hs_bound_d3(const PotentialSpec& v_radial, int nquad);

}  // namespace specidx

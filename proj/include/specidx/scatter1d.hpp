#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "specidx/potentials.hpp"
#include "specidx/xindex.hpp"

namespace specidx {

/// 2x2 scattering matrix [[t, r_left],[r_right, t]] at energy lam > 0.
struct SMatrix {
  double lam = 0.0;
  Eigen::Matrix2cd s = Eigen::Matrix2cd::Identity();
  double unitarity_residual = 0.0;

  Complex t() const { return s(0, 0); }
  Complex r_left() const { return s(0, 1); }
  Complex r_right() const { return s(1, 0); }
};

/// Transmission/reflection from integrating -u'' + V u = k^2 u across the
/// support of V with plane-wave asymptotics (adaptive RK on the
/// oscillation-removed system).  The wave-transfer symmetry of a real
/// potential is enforced exactly; the raw Wronskian drift is reported as
/// the unitarity residual and must stay below 1e-6.
SMatrix smatrix(double lam, const PotentialSpec& v, double ode_tol = 1e-10);

/// ||S - I|| (spectral norm of the 2x2 defect).
double s_distance_to_identity(const SMatrix& s);

/// Phases of the unit-circle eigenvalues in (0, 2pi), ascending; exact
/// zeros (S = I) are excluded.
std::vector<double> eigenphases(const SMatrix& s);

struct Crossing {
  double lo = 0.0, hi = 0.0;  // lambda bracket of the trace step
  double theta = 0.0;
  int sign = 0;               // +1 anti-clockwise, -1 clockwise
};

struct FlowTrace {
  std::vector<double> lambdas;                  // ascending, ends at lambda_max
  std::vector<std::array<double, 2>> phases;    // branch-matched, in [0, 2pi)
  double max_step_motion = 0.0;                 // circular motion guard
  double theta_marked = 0.0;
  std::vector<Crossing> crossings;              // for theta_marked
  double lambda_max = 0.0;
  double tail_defect = 0.0;                     // ||S(lambda_max) - I||
  bool boundary_hit = false;                    // eigenphase at theta at lam0
};

struct GridPolicy {
  int initial_points = 48;
  int max_points = 6000;
  double tail_norm = 1e-3;     // ||S(Lambda_max) - I|| requirement
  double ode_tol = 1e-10;
};

/// Eigenphase trace of {S(lambda)} on [lam0, Lambda_max] with S(inf) = I
/// appended; Lambda_max comes from a rigorous Gronwall envelope on
/// ||S - I|| so no crossing can hide beyond it.
FlowTrace build_flow_trace(const PotentialSpec& v, double lam0, double theta,
                           const GridPolicy& policy = {});

/// Net signed eigenphase crossings of e^{i theta} along the trace.
/// Throws UnderResolved if the per-step motion guard fails.
int spectral_flow(const FlowTrace& trace, double theta);

/// mu(e^{i theta}; lam0): the negated flow of the family {S(lambda)} on
/// [lam0, inf].
int mu_at(double theta, double lam0, const PotentialSpec& v,
          const GridPolicy& policy = {});

/// mu_at together with its trace (crossing brackets, diagnostics).
struct MuResult {
  int mu = 0;
  FlowTrace trace;
};
MuResult mu_at_traced(double theta, double lam0, const PotentialSpec& v,
                      const GridPolicy& policy = {});

/// Shrink a crossing bracket of `theta` to the requested width by bisection.
Crossing refine_crossing(const PotentialSpec& v, const Crossing& c,
                         double width, double ode_tol = 1e-10);

struct ThmD1Entry {
  double lam = 0.0;
  std::optional<int> xi;
  double min_singval = 0.0;
  double phase_dist_pi = 0.0;
  std::optional<int> mu_pi;
  bool existence_ok = true;  // xi defined <=> no eigenphase at pi
  bool identity_ok = true;   // xi == -mu(pi; lam)
};

struct ThmD1Report {
  std::vector<ThmD1Entry> entries;
  int violations() const;
};

/// Pointwise check of the existence criterion and the index/flow identity.
ThmD1Report verify_thm_d1(const PotentialSpec& v,
                          const std::vector<double>& lam_grid, int nquad,
                          double phase_tol = 1e-3,
                          const GridPolicy& policy = {});

struct KernelDimCheck {
  double min_singval = 0.0;  // of J^{-1} + A0 + cot(theta/2) B0
  double phase_dist = 0.0;   // circular distance of nearest eigenphase to theta
};

/// Matched smallness of the assembled Birman-Schwinger matrix and the
/// eigenphase distance: both vanish exactly at a crossing.
KernelDimCheck kernel_dim_check(double lamstar, double theta,
                                const PotentialSpec& v, int nquad,
                                double ode_tol = 1e-10);

}  // namespace specidx

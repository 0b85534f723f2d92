#pragma once

#include <complex>
#include <vector>

namespace specidx {

/// Closed form for the scalar limiting sandwiched resolvent of the
/// Dirichlet/Neumann half-line pair: -1 + i sqrt(1/lam - 1), lam in (0,1).
std::complex<double> krein_t0_closed(double lam);

struct KreinParams {
  double box = 520.0;        // half-line length
  int n = 200000;            // interior lattice points
  std::vector<double> eps = {0.02, 0.01, 0.005};
  bool probe_box = true;
  double target_accuracy = 1e-4;
};

/// Numerical route: h0 = -d^2/dx^2 on (0, box) with Dirichlet ends,
/// H0 = (h0 + I)^{-1} applied through shifted solves, g(x) = e^{-x} with
/// trapezoid weights; Richardson extrapolation of <(H0 - lam - i eps)^{-1} g, g>
/// over the eps sequence.
std::complex<double> krein_t0_numeric(double lam, const KreinParams& params = {});

struct KreinEval {
  double lam;
  std::complex<double> t0_closed;
  std::complex<double> t0_numeric;
  double abs_err;
};

KreinEval krein_eval(double lam, const KreinParams& params = {});

/// max |1 + Re T0_numeric(lam)| over the grid; the degenerate feature of
/// this example is that the answer is ~0 on all of (0,1).
double krein_degenerate_scan(const std::vector<double>& lam_grid,
                             const KreinParams& params = {});

}  // namespace specidx

#include "specidx/krein.hpp"

#include <cmath>

#include "specidx/errors.hpp"
#include "specidx/linalg.hpp"
#include "specidx/parallel.hpp"

namespace specidx {

std::complex<double> krein_t0_closed(double lam) {
  if (!(lam > 0.0 && lam < 1.0))
    throw OutOfRange("krein_t0_closed: lam must lie in (0,1)");
  return {-1.0, std::sqrt(1.0 / lam - 1.0)};
}

namespace {

Complex t0_at_eps(double lam, double eps, double box, int n) {
  const double h = box / (n + 1);
  VectorXd diag = VectorXd::Constant(n, 2.0 / (h * h));
  VectorXd off = VectorXd::Constant(n - 1, -1.0 / (h * h));
  VectorXd g(n);
  for (int j = 0; j < n; ++j) g(j) = std::exp(-(j + 1) * h);

  // (H0 - z)^{-1} = -z^{-1} [ I + z^{-1} (h0 + I - z^{-1})^{-1} ] with
  // H0 = (h0 + I)^{-1}; the solve hits h0 shifted by z^{-1} - 1.
  const Complex z(lam, eps);
  const Complex shift = 1.0 / z - 1.0;
  TridiagSolver solver(diag, off, shift);
  VectorXcd w = solver.solve_real(g);
  // <w, g> with real g; no conjugation so the upper-half-plane sign of
  // Im T0 survives.
  Complex quad_ww = h * (w.array() * g.cast<Complex>().array()).sum();
  double quad_gg = h * g.squaredNorm();
  return -(quad_gg + quad_ww / z) / z;
}

Complex extrapolate(double lam, double box, int n,
                    const std::vector<double>& eps) {
  if (eps.size() < 2)
    throw ConfigError("krein_t0_numeric: need a decreasing eps sequence");
  for (size_t i = 0; i + 1 < eps.size(); ++i)
    if (!(eps[i] > eps[i + 1]) || !(eps[i + 1] > 0.0))
      throw ConfigError("krein_t0_numeric: eps must decrease to 0");
  // Lagrange extrapolation to eps = 0 through all supplied points.
  Complex acc(0.0, 0.0);
  for (size_t m = 0; m < eps.size(); ++m) {
    double coef = 1.0;
    for (size_t j = 0; j < eps.size(); ++j)
      if (j != m) coef *= (0.0 - eps[j]) / (eps[m] - eps[j]);
    acc += coef * t0_at_eps(lam, eps[m], box, n);
  }
  return acc;
}

}  // namespace

std::complex<double> krein_t0_numeric(double lam, const KreinParams& params) {
  if (!(lam > 0.0 && lam < 1.0))
    throw OutOfRange("krein_t0_numeric: lam must lie in (0,1)");
  if (params.box < 40.0)
    throw ConfigError("krein_t0_numeric: box must be >= 40");
  if (params.n < 2000)
    throw ConfigError("krein_t0_numeric: n must be >= 2000");
  Complex value = extrapolate(lam, params.box, params.n, params.eps);
  if (params.probe_box) {
    Complex probe = extrapolate(lam, 2.0 * params.box, 2 * params.n, params.eps);
    if (std::abs(value - probe) > 10.0 * params.target_accuracy)
      throw BoxTooSmall("krein_t0_numeric: doubling the box moved the result");
  }
  return value;
}

KreinEval krein_eval(double lam, const KreinParams& params) {
  KreinEval e;
  e.lam = lam;
  e.t0_closed = krein_t0_closed(lam);
  e.t0_numeric = krein_t0_numeric(lam, params);
  e.abs_err = std::abs(e.t0_closed - e.t0_numeric);
  return e;
}

double krein_degenerate_scan(const std::vector<double>& lam_grid,
                             const KreinParams& params) {
  std::vector<double> dev(lam_grid.size(), 0.0);
  parallel_for(static_cast<int>(lam_grid.size()), [&](int i) {
    Complex t = krein_t0_numeric(lam_grid[i], params);
    dev[i] = std::abs(1.0 + t.real());
  });
  double worst = 0.0;
  for (double d : dev) worst = std::max(worst, d);
  return worst;
}

}  // namespace specidx

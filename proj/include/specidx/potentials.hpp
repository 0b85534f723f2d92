#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

namespace specidx {

/// Pointwise potential with declared short-range decay exponent and an
/// effective support radius: |V(x)| <= 1e-14 * max|V| for |x| > support_radius.
/// The same type serves d=1 (x on the line) and radial problems (x = r >= 0).
struct PotentialSpec {
  std::function<double(double)> eval;
  double rho = 2.0;           // decay exponent, > 1
  double support_radius = 1.0;
  double max_abs = 0.0;       // sampled max of |V|
  double decay_const = 0.0;   // sampled sup of |V(x)| (1+|x|)^rho
  std::string name = "custom";

  double operator()(double x) const { return eval(x); }
  bool is_zero() const { return max_abs == 0.0; }

  /// Integral of |V| over the support (Gauss-Legendre, used for envelope
  /// bounds and Lambda_max selection).
  double l1_norm() const;

  static PotentialSpec make(std::function<double(double)> f, double rho,
                            double support_radius, std::string name = "custom");
};

PotentialSpec zero_potential();

/// V(x) = -depth on |x| <= half_width, 0 outside.
PotentialSpec square_well(double depth, double half_width);

/// V(x) = -depth exp(-(x/width)^2)
PotentialSpec gaussian_well(double depth, double width = 1.0);

/// V(x) = -depth sech^2(x/width)
PotentialSpec poschl_teller(double depth = 2.0, double width = 1.0);

/// V(x) = -depth exp(-gamma |x|)
PotentialSpec exponential_well(double depth, double gamma);

/// Piecewise-linear potential from samples (x ascending); zero outside.
PotentialSpec table_potential(std::vector<double> x, std::vector<double> v,
                              double rho);

/// Seeded random sum of three Gaussian bumps; attractive (all negative)
/// or mixed-sign.  Used by the randomized acceptance suites.
PotentialSpec random_potential(std::mt19937_64& rng, bool attractive,
                               double max_depth = 1.2);

/// Smallest radius outside which |V| <= 1e-14 * max|V| (scanned on a grid).
double find_support_radius(const std::function<double(double)>& f,
                           double scan_limit);

}  // namespace specidx

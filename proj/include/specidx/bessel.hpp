#pragma once

#include <vector>

namespace specidx {

/// Riccati-Bessel functions S_l(x) = x j_l(x) for l = 0..lmax, x > 0.
/// Upward recurrence where it is stable (x well above lmax), otherwise
/// Miller's downward recurrence normalized against S_0/S_1.
std::vector<double> riccati_s(int lmax, double x);

/// C_l(x) = -x y_l(x) for l = 0..lmax, x > 0.  Upward recurrence (stable).
std::vector<double> riccati_c(int lmax, double x);

}  // namespace specidx

#include "specidx/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace specidx {

namespace {

// S_{l+1} = ((2l+1)/x) S_l - S_{l-1}; same recurrence for C_l.
// Upward is stable for C always, and for S only while l < x.

std::vector<double> riccati_s_upward(int lmax, double x) {
  std::vector<double> s(lmax + 1);
  s[0] = std::sin(x);
  if (lmax >= 1) s[1] = std::sin(x) / x - std::cos(x);
  for (int l = 1; l < lmax; ++l)
    s[l + 1] = (2.0 * l + 1.0) / x * s[l] - s[l - 1];
  return s;
}

std::vector<double> riccati_s_downward(int lmax, double x) {
  int lstart = lmax + 32 + static_cast<int>(x / 2.0);
  double fp = 0.0;          // S_{l+1} seed
  double f = 1e-290;        // S_l seed, arbitrary scale
  std::vector<double> s(lmax + 1, 0.0);
  for (int l = lstart; l >= 1; --l) {
    double fm = (2.0 * l + 1.0) / x * f - fp;
    fp = f;
    f = fm;
    if (l - 1 <= lmax) s[l - 1] = f;
    // Rescale to avoid overflow; ratios are all that matter.
    if (std::abs(f) > 1e280) {
      double inv = 1e-280;
      f *= inv;
      fp *= inv;
      for (auto& v : s) v *= inv;
    }
  }
  double s0 = std::sin(x);
  double s1 = std::sin(x) / x - std::cos(x);
  double scale;
  if (std::abs(s[0]) >= std::abs(s[1]) || lmax == 0)
    scale = s0 / s[0];
  else
    scale = s1 / s[1];
  for (auto& v : s) v *= scale;
  return s;
}

}  // namespace

std::vector<double> riccati_s(int lmax, double x) {
  if (lmax < 0) throw std::invalid_argument("riccati_s: lmax < 0");
  if (!(x > 0.0)) throw std::invalid_argument("riccati_s: x must be positive");
  if (x > lmax + 10.0) return riccati_s_upward(lmax, x);
  return riccati_s_downward(lmax, x);
}

std::vector<double> riccati_c(int lmax, double x) {
  if (lmax < 0) throw std::invalid_argument("riccati_c: lmax < 0");
  if (!(x > 0.0)) throw std::invalid_argument("riccati_c: x must be positive");
  std::vector<double> c(lmax + 1);
  c[0] = std::cos(x);
  if (lmax >= 1) c[1] = std::cos(x) / x + std::sin(x);
  for (int l = 1; l < lmax; ++l)
    c[l + 1] = (2.0 * l + 1.0) / x * c[l] - c[l - 1];
  return c;
}

}  // namespace specidx

#include "specidx/potentials.hpp"

#include <cmath>
#include <stdexcept>

#include "specidx/errors.hpp"
#include "specidx/quadrature.hpp"

namespace specidx {

namespace {
constexpr double kSupportCut = 1e-14;
}

double PotentialSpec::l1_norm() const {
  if (is_zero()) return 0.0;
  QuadRule q = gauss_legendre(256, -support_radius, support_radius);
  double s = 0.0;
  for (int i = 0; i < q.nodes.size(); ++i)
    s += q.weights(i) * std::abs(eval(q.nodes(i)));
  return s;
}

double find_support_radius(const std::function<double(double)>& f,
                           double scan_limit) {
  const int samples = 4000;
  double maxabs = 0.0;
  for (int i = 0; i <= samples; ++i) {
    double x = scan_limit * (2.0 * i / samples - 1.0);
    maxabs = std::max(maxabs, std::abs(f(x)));
  }
  if (maxabs == 0.0) return 1.0;
  double r = scan_limit;
  for (int i = samples; i >= 0; --i) {
    double x = scan_limit * static_cast<double>(i) / samples;
    if (std::abs(f(x)) > kSupportCut * maxabs ||
        std::abs(f(-x)) > kSupportCut * maxabs) {
      r = x;
      break;
    }
  }
  return std::max(r * 1.02, 1e-3);
}

PotentialSpec PotentialSpec::make(std::function<double(double)> f, double rho,
                                  double support_radius, std::string name) {
  if (!(rho > 1.0))
    throw ConfigError("PotentialSpec: decay exponent rho must exceed 1");
  if (!(support_radius > 0.0))
    throw ConfigError("PotentialSpec: support radius must be positive");
  PotentialSpec p;
  p.eval = std::move(f);
  p.rho = rho;
  p.support_radius = support_radius;
  p.name = std::move(name);

  // Spot checks of the declared envelope and the support cutoff.
  const int samples = 512;
  for (int i = 0; i <= samples; ++i) {
    double x = support_radius * (2.0 * i / samples - 1.0);
    double a = std::abs(p.eval(x));
    p.max_abs = std::max(p.max_abs, a);
    p.decay_const =
        std::max(p.decay_const, a * std::pow(1.0 + std::abs(x), rho));
  }
  for (double fac : {1.001, 1.05, 1.2, 1.5, 2.0, 4.0}) {
    for (double sgn : {1.0, -1.0}) {
      double x = sgn * support_radius * fac;
      if (std::abs(p.eval(x)) > kSupportCut * p.max_abs + 1e-300)
        throw ConfigError("PotentialSpec: |V| above cutoff outside the "
                          "declared support radius");
    }
  }
  return p;
}

PotentialSpec zero_potential() {
  PotentialSpec p;
  p.eval = [](double) { return 0.0; };
  p.rho = 100.0;
  p.support_radius = 1.0;
  p.max_abs = 0.0;
  p.name = "zero";
  return p;
}

PotentialSpec square_well(double depth, double half_width) {
  if (!(half_width > 0.0)) throw ConfigError("square_well: width <= 0");
  auto f = [depth, half_width](double x) {
    return std::abs(x) <= half_width ? -depth : 0.0;
  };
  return PotentialSpec::make(f, 100.0, half_width, "square_well");
}

PotentialSpec gaussian_well(double depth, double width) {
  if (!(width > 0.0)) throw ConfigError("gaussian_well: width <= 0");
  auto f = [depth, width](double x) {
    double u = x / width;
    return -depth * std::exp(-u * u);
  };
  double r = width * std::sqrt(-std::log(kSupportCut));
  return PotentialSpec::make(f, 100.0, r * 1.01, "gaussian");
}

PotentialSpec poschl_teller(double depth, double width) {
  if (!(width > 0.0)) throw ConfigError("poschl_teller: width <= 0");
  auto f = [depth, width](double x) {
    double c = std::cosh(x / width);
    return -depth / (c * c);
  };
  // sech^2(u) ~ 4 e^{-2u}; solve 4 e^{-2u} = 1e-14.
  double r = width * 0.5 * std::log(4.0 / kSupportCut);
  return PotentialSpec::make(f, 100.0, r * 1.01, "poschl_teller");
}

PotentialSpec exponential_well(double depth, double gamma) {
  if (!(gamma > 0.0)) throw ConfigError("exponential_well: gamma <= 0");
  auto f = [depth, gamma](double x) {
    return -depth * std::exp(-gamma * std::abs(x));
  };
  double r = -std::log(kSupportCut) / gamma;
  return PotentialSpec::make(f, 100.0, r * 1.01, "exponential");
}

PotentialSpec table_potential(std::vector<double> x, std::vector<double> v,
                              double rho) {
  if (x.size() != v.size() || x.size() < 2)
    throw ConfigError("table_potential: need matching x,V samples (>= 2)");
  for (size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1]))
      throw ConfigError("table_potential: x samples must be increasing");
  double radius = std::max(std::abs(x.front()), std::abs(x.back()));
  auto f = [x = std::move(x), v = std::move(v)](double t) {
    if (t < x.front() || t > x.back()) return 0.0;
    auto it = std::upper_bound(x.begin(), x.end(), t);
    size_t j = std::max<size_t>(1, it - x.begin()) - 1;
    if (j + 1 >= x.size()) j = x.size() - 2;
    double w = (t - x[j]) / (x[j + 1] - x[j]);
    return (1.0 - w) * v[j] + w * v[j + 1];
  };
  return PotentialSpec::make(f, rho, radius * 1.001, "table");
}

PotentialSpec random_potential(std::mt19937_64& rng, bool attractive,
                               double max_depth) {
  std::uniform_real_distribution<double> amp(0.2, max_depth);
  std::uniform_real_distribution<double> center(-3.0, 3.0);
  std::uniform_real_distribution<double> width(0.5, 1.5);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  struct Bump {
    double a, c, w;
  };
  std::vector<Bump> bumps;
  bool has_neg = false, has_pos = false;
  for (int j = 0; j < 3; ++j) {
    double a = -amp(rng);
    if (!attractive && coin(rng) < 0.5) a = -a;
    (a < 0 ? has_neg : has_pos) = true;
    bumps.push_back({a, center(rng), width(rng)});
  }
  if (!attractive && !(has_neg && has_pos)) bumps[0].a = -bumps[0].a;
  auto f = [bumps](double x) {
    double s = 0.0;
    for (const auto& b : bumps) {
      double u = (x - b.c) / b.w;
      s += b.a * std::exp(-u * u);
    }
    return s;
  };
  double r = find_support_radius(f, 16.0);
  return PotentialSpec::make(f, 100.0, r,
                             attractive ? "random_attractive" : "random_mixed");
}

}  // namespace specidx

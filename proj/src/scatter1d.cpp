#include "specidx/scatter1d.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>

#include "specidx/errors.hpp"
#include "specidx/parallel.hpp"

namespace specidx {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap_0_2pi(double x) {
  double y = std::fmod(x, kTwoPi);
  if (y < 0.0) y += kTwoPi;
  return y;
}

// Signed shortest motion from a to b on the circle, in (-pi, pi].
double circ_increment(double a, double b) {
  double d = std::fmod(b - a, kTwoPi);
  if (d > M_PI) d -= kTwoPi;
  if (d <= -M_PI) d += kTwoPi;
  return d;
}

double circ_distance(double a, double b) { return std::abs(circ_increment(a, b)); }

using OdeState = std::vector<Complex>;

struct InteractionRhs {
  const PotentialSpec* v;
  double k;
  void operator()(const OdeState& c, OdeState& dc, double x) const {
    double val = (*v)(x);
    if (val == 0.0) {
      dc.assign(4, Complex(0.0, 0.0));
      return;
    }
    const Complex a(0.0, -val / (2.0 * k));
    const Complex ph(std::cos(2.0 * k * x), -std::sin(2.0 * k * x));
    const Complex phc = std::conj(ph);
    dc.resize(4);
    dc[0] = a * (c[0] + ph * c[2]);
    dc[1] = a * (c[1] + ph * c[3]);
    dc[2] = a * (-phc * c[0] - c[2]);
    dc[3] = a * (-phc * c[1] - c[3]);
  }
};

}  // namespace

SMatrix smatrix(double lam, const PotentialSpec& v, double ode_tol) {
  if (!(lam > 0.0)) throw OutOfRange("smatrix: lam must be positive");
  SMatrix out;
  out.lam = lam;
  if (v.is_zero()) return out;  // S = I exactly

  const double k = std::sqrt(lam);
  const double r = v.support_radius;
  OdeState c = {Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(1, 0)};
  InteractionRhs rhs{&v, k};

  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_controlled(ode_tol, ode_tol,
                                      ode::runge_kutta_dopri5<OdeState>());
  // Chunking caps the step against aliasing of the removed oscillation.
  const double chunk = std::min(M_PI / (2.0 * k), r / 8.0);
  const int nchunks = std::max(1, static_cast<int>(std::ceil(2.0 * r / chunk)));
  double x = -r;
  for (int i = 1; i <= nchunks; ++i) {
    double x_next = -r + 2.0 * r * i / nchunks;
    ode::integrate_adaptive(stepper, rhs, c, x, x_next, (x_next - x) / 2.0);
    x = x_next;
  }
  for (const auto& e : c)
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
      throw OdeFailure("smatrix: integration produced non-finite values");

  // Wave-transfer matrix [[alpha, beta],[conj(beta), conj(alpha)]] with
  // |alpha|^2 - |beta|^2 = 1 for real V; enforce the structure and report
  // the raw drift.
  Complex alpha = 0.5 * (c[0] + std::conj(c[3]));
  Complex beta = 0.5 * (c[1] + std::conj(c[2]));
  double det = std::norm(alpha) - std::norm(beta);
  double drift = std::max({std::abs(c[0] - std::conj(c[3])),
                           std::abs(c[1] - std::conj(c[2])),
                           std::abs(det - 1.0)});
  if (drift > 1e-6)
    throw UnitarityViolation("smatrix: wave-transfer drift above 1e-6");
  if (det <= 0.0) throw OdeFailure("smatrix: degenerate transfer matrix");
  double scale = 1.0 / std::sqrt(det);
  alpha *= scale;
  beta *= scale;

  Complex t = 1.0 / std::conj(alpha);
  Complex r_left = -std::conj(beta) / std::conj(alpha);
  Complex r_right = beta / std::conj(alpha);
  out.s << t, r_left, r_right, t;
  double uni = (out.s.adjoint() * out.s - Eigen::Matrix2cd::Identity())
                   .cwiseAbs()
                   .maxCoeff();
  out.unitarity_residual = std::max(drift, uni);
  return out;
}

double s_distance_to_identity(const SMatrix& s) {
  Eigen::Matrix2cd d = s.s - Eigen::Matrix2cd::Identity();
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(d);
  return svd.singularValues()(0);
}

namespace {

struct PhasePair {
  std::array<double, 2> phases;       // in [0, 2pi)
  std::array<Eigen::Vector2cd, 2> vecs;
  bool degenerate = false;
};

PhasePair phase_pair(const SMatrix& sm) {
  // Closed form for a general 2x2; the eigenvalues sit on the unit circle.
  const Complex a = sm.s(0, 0), b = sm.s(0, 1);
  const Complex c = sm.s(1, 0), d = sm.s(1, 1);
  const Complex tr = a + d;
  const Complex disc = std::sqrt(tr * tr - 4.0 * (a * d - b * c));
  PhasePair out;
  Complex mu0 = 0.5 * (tr + disc), mu1 = 0.5 * (tr - disc);
  auto phase_of = [](Complex mu) {
    double ph = std::arg(mu);
    return ph == 0.0 ? 0.0 : wrap_0_2pi(ph);
  };
  out.phases = {phase_of(mu0), phase_of(mu1)};
  if (std::abs(disc) < 1e-9) {
    out.degenerate = true;
    out.vecs[0] = Eigen::Vector2cd(1, 0);
    out.vecs[1] = Eigen::Vector2cd(0, 1);
  } else {
    auto vec_for = [&](Complex mu) {
      Eigen::Vector2cd v1(b, mu - a), v2(mu - d, c);
      return (v1.norm() >= v2.norm()) ? v1.normalized() : v2.normalized();
    };
    out.vecs[0] = vec_for(mu0);
    out.vecs[1] = vec_for(mu1);
  }
  return out;
}

}  // namespace

std::vector<double> eigenphases(const SMatrix& sm) {
  if (sm.unitarity_residual > 1e-6)
    throw UnitarityViolation("eigenphases: S not unitary to tolerance");
  PhasePair p = phase_pair(sm);
  std::vector<double> out;
  for (double ph : p.phases)
    if (ph > 0.0 && ph < kTwoPi) out.push_back(ph);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct TraceSample {
  double lam;
  PhasePair pair;   // branch order after matching
  double defect;    // ||S - I||
};

TraceSample eval_sample(const PotentialSpec& v, double lam, double ode_tol) {
  SMatrix sm = smatrix(lam, v, ode_tol);
  return {lam, phase_pair(sm), s_distance_to_identity(sm)};
}

// Match sample.pair branches to the previous sample, in place.
void match_to_previous(const PhasePair& prev, PhasePair* cur) {
  double keep = circ_distance(prev.phases[0], cur->phases[0]) +
                circ_distance(prev.phases[1], cur->phases[1]);
  double swap = circ_distance(prev.phases[0], cur->phases[1]) +
                circ_distance(prev.phases[1], cur->phases[0]);
  bool do_swap;
  if (std::abs(keep - swap) > 1e-9) {
    do_swap = swap < keep;
  } else if (!prev.degenerate && !cur->degenerate) {
    // Eigenvector overlap tie-break for the degenerate 2x2 case.
    double keep_ov = std::abs(prev.vecs[0].dot(cur->vecs[0])) +
                     std::abs(prev.vecs[1].dot(cur->vecs[1]));
    double swap_ov = std::abs(prev.vecs[0].dot(cur->vecs[1])) +
                     std::abs(prev.vecs[1].dot(cur->vecs[0]));
    do_swap = swap_ov > keep_ov;
  } else {
    do_swap = false;
  }
  if (do_swap) {
    std::swap(cur->phases[0], cur->phases[1]);
    std::swap(cur->vecs[0], cur->vecs[1]);
  }
}

// Gronwall envelope: ||S(k^2) - I|| <= 2(e^q - 1)/(1 - (e^q - 1)) with
// q = (1/k) int |V|, valid while e^q < 2.
double envelope_bound(double q1, double k) {
  double em1 = std::expm1(q1 / k);
  if (em1 >= 0.99) return 2.0;
  return 2.0 * em1 / (1.0 - em1);
}

double k_for_envelope(double q1, double target) {
  // envelope(k) <= target  <=>  e^{q1/k} - 1 <= target/(2+target)
  return q1 / std::log1p(target / (2.0 + target));
}

}  // namespace

FlowTrace build_flow_trace(const PotentialSpec& v, double lam0, double theta,
                           const GridPolicy& policy) {
  if (!(lam0 > 0.0)) throw OutOfRange("build_flow_trace: lam0 must be positive");
  if (!(theta > 0.0 && theta < kTwoPi))
    throw ThetaDegenerate("build_flow_trace: theta outside (0, 2 pi)");

  FlowTrace trace;
  trace.theta_marked = theta;
  const double q1 = v.l1_norm();
  if (q1 == 0.0) {
    trace.lambdas = {lam0, 2.0 * lam0};
    trace.phases = {{0.0, 0.0}, {0.0, 0.0}};
    trace.lambda_max = 2.0 * lam0;
    return trace;
  }

  const double k_max = k_for_envelope(q1, policy.tail_norm);
  const double lam_max = std::max(k_max * k_max, 4.0 * lam0);
  // Crossings of marked points at unit-circle distance >= 0.4 from 1 are
  // impossible once the envelope drops below 0.4.
  const double k_active = k_for_envelope(q1, 0.4);
  const double lam_active =
      std::min(lam_max, std::max(k_active * k_active, 2.0 * lam0));
  trace.lambda_max = lam_max;

  std::vector<double> grid;
  const int n0 = std::max(8, policy.initial_points);
  for (int i = 0; i <= n0; ++i)
    grid.push_back(lam0 * std::pow(lam_active / lam0, double(i) / n0));
  if (lam_max > lam_active * 1.0001) {
    const int ntail = 12;
    for (int i = 1; i <= ntail; ++i)
      grid.push_back(lam_active *
                     std::pow(lam_max / lam_active, double(i) / ntail));
  }

  std::vector<TraceSample> samples(grid.size());
  parallel_for(static_cast<int>(grid.size()), [&](int i) {
    samples[i] = eval_sample(v, grid[i], policy.ode_tol);
  });

  // Refinement loop: keep inserting geometric midpoints where the matched
  // motion exceeds the guard.
  for (int round = 0;; ++round) {
    for (size_t i = 1; i < samples.size(); ++i)
      match_to_previous(samples[i - 1].pair, &samples[i].pair);
    std::vector<double> inserts;
    for (size_t i = 1; i < samples.size(); ++i) {
      double motion = std::max(
          circ_distance(samples[i - 1].pair.phases[0], samples[i].pair.phases[0]),
          circ_distance(samples[i - 1].pair.phases[1], samples[i].pair.phases[1]));
      if (motion >= M_PI / 2.0)
        inserts.push_back(std::sqrt(samples[i - 1].lam * samples[i].lam));
    }
    if (inserts.empty()) break;
    if (static_cast<int>(samples.size() + inserts.size()) > policy.max_points ||
        round > 40)
      throw UnderResolved("build_flow_trace: motion guard still violated at " +
                          std::to_string(samples.size()) + " points");
    std::vector<TraceSample> extra(inserts.size());
    parallel_for(static_cast<int>(inserts.size()), [&](int i) {
      extra[i] = eval_sample(v, inserts[i], policy.ode_tol);
    });
    for (auto& e : extra) samples.push_back(std::move(e));
    std::sort(samples.begin(), samples.end(),
              [](const TraceSample& a, const TraceSample& b) {
                return a.lam < b.lam;
              });
  }

  trace.tail_defect = samples.back().defect;
  trace.lambdas.reserve(samples.size() + 1);
  trace.phases.reserve(samples.size() + 1);
  for (const auto& s : samples) {
    trace.lambdas.push_back(s.lam);
    trace.phases.push_back(s.pair.phases);
  }
  // S(inf) = I: both branches land on 0 mod 2pi.
  trace.lambdas.push_back(std::numeric_limits<double>::infinity());
  trace.phases.push_back({0.0, 0.0});

  trace.max_step_motion = 0.0;
  for (size_t i = 1; i < trace.phases.size(); ++i)
    for (int b = 0; b < 2; ++b)
      trace.max_step_motion =
          std::max(trace.max_step_motion,
                   circ_distance(trace.phases[i - 1][b], trace.phases[i][b]));

  for (int b = 0; b < 2; ++b)
    if (circ_distance(trace.phases.front()[b], theta) < 1e-12)
      trace.boundary_hit = true;

  // Crossing list for the marked theta.
  for (size_t i = 1; i < trace.phases.size(); ++i) {
    for (int b = 0; b < 2; ++b) {
      double a = trace.phases[i - 1][b];
      double d = circ_increment(a, trace.phases[i][b]);
      int sign = 0;
      if (d > 0.0) {
        double u = wrap_0_2pi(theta - a);
        if (u > 0.0 && u <= d) sign = +1;
      } else if (d < 0.0) {
        double u = wrap_0_2pi(a - theta);
        if (u > 0.0 && u <= -d) sign = -1;
      }
      if (sign != 0)
        trace.crossings.push_back(
            {trace.lambdas[i - 1], trace.lambdas[i], theta, sign});
    }
  }
  return trace;
}

int spectral_flow(const FlowTrace& trace, double theta) {
  if (trace.max_step_motion >= M_PI / 2.0)
    throw UnderResolved("spectral_flow: per-step motion guard violated");
  if (!(theta > 0.0 && theta < kTwoPi))
    throw ThetaDegenerate("spectral_flow: theta outside (0, 2 pi)");
  int flow = 0;
  for (size_t i = 1; i < trace.phases.size(); ++i) {
    for (int b = 0; b < 2; ++b) {
      double a = trace.phases[i - 1][b];
      double d = circ_increment(a, trace.phases[i][b]);
      if (d > 0.0) {
        double u = wrap_0_2pi(theta - a);
        if (u > 0.0 && u <= d) ++flow;
      } else if (d < 0.0) {
        double u = wrap_0_2pi(a - theta);
        if (u > 0.0 && u <= -d) --flow;
      }
    }
  }
  return flow;
}

MuResult mu_at_traced(double theta, double lam0, const PotentialSpec& v,
                      const GridPolicy& policy) {
  MuResult res;
  res.trace = build_flow_trace(v, lam0, theta, policy);
  res.mu = -spectral_flow(res.trace, theta);
  return res;
}

int mu_at(double theta, double lam0, const PotentialSpec& v,
          const GridPolicy& policy) {
  return mu_at_traced(theta, lam0, v, policy).mu;
}

Crossing refine_crossing(const PotentialSpec& v, const Crossing& c,
                         double width, double ode_tol) {
  Crossing out = c;
  if (!std::isfinite(out.hi)) return out;
  auto sample = [&](double lam) { return eval_sample(v, lam, ode_tol); };
  TraceSample lo = sample(out.lo), hi = sample(out.hi);
  match_to_previous(lo.pair, &hi.pair);
  auto has_crossing = [&](const TraceSample& a, const TraceSample& b) {
    for (int t = 0; t < 2; ++t) {
      double d = circ_increment(a.pair.phases[t], b.pair.phases[t]);
      if (d > 0.0 && wrap_0_2pi(out.theta - a.pair.phases[t]) <= d &&
          wrap_0_2pi(out.theta - a.pair.phases[t]) > 0.0)
        return true;
      if (d < 0.0 && wrap_0_2pi(a.pair.phases[t] - out.theta) <= -d &&
          wrap_0_2pi(a.pair.phases[t] - out.theta) > 0.0)
        return true;
    }
    return false;
  };
  for (int iter = 0; iter < 64 && out.hi - out.lo > width; ++iter) {
    double mid = 0.5 * (out.lo + out.hi);
    TraceSample ms = sample(mid);
    PhasePair matched = ms.pair;
    match_to_previous(lo.pair, &matched);
    TraceSample mid_matched{mid, matched, ms.defect};
    if (has_crossing(lo, mid_matched)) {
      out.hi = mid;
      hi = mid_matched;
    } else {
      out.lo = mid;
      lo = mid_matched;
    }
  }
  return out;
}

ThmD1Report verify_thm_d1(const PotentialSpec& v,
                          const std::vector<double>& lam_grid, int nquad,
                          double phase_tol, const GridPolicy& policy) {
  ThmD1Report report;
  report.entries.resize(lam_grid.size());
  for (size_t i = 0; i < lam_grid.size(); ++i) {
    ThmD1Entry& e = report.entries[i];
    e.lam = lam_grid[i];
    XiPoint pt = xi_essential(e.lam, v, nquad);
    e.xi = pt.xi;
    e.min_singval = pt.min_singval;
    SMatrix sm = smatrix(e.lam, v, policy.ode_tol);
    PhasePair pp = phase_pair(sm);
    e.phase_dist_pi = std::min(circ_distance(pp.phases[0], M_PI),
                               circ_distance(pp.phases[1], M_PI));
    e.existence_ok = (e.xi.has_value() == (e.phase_dist_pi > phase_tol));
    if (e.xi) {
      e.mu_pi = mu_at(M_PI, e.lam, v, policy);
      e.identity_ok = (*e.xi == -*e.mu_pi);
    }
  }
  return report;
}

int ThmD1Report::violations() const {
  int n = 0;
  for (const auto& e : entries)
    if (!e.existence_ok || !e.identity_ok) ++n;
  return n;
}

KernelDimCheck kernel_dim_check(double lamstar, double theta,
                                const PotentialSpec& v, int nquad,
                                double ode_tol) {
  BSOperator op = a0_b0_1d(lamstar, v, nquad);
  DenseSelfAdjoint m = assemble_bsmat(j_sign_nodes(v, op.nodes), op, theta);
  KernelDimCheck out;
  out.min_singval = sym_eigenvalues(m.matrix).cwiseAbs().minCoeff();
  SMatrix sm = smatrix(lamstar, v, ode_tol);
  PhasePair pp = phase_pair(sm);
  out.phase_dist = std::min(circ_distance(pp.phases[0], theta),
                            circ_distance(pp.phases[1], theta));
  return out;
}

}  // namespace specidx

#include "specidx/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "specidx/bsop.hpp"
#include "specidx/errors.hpp"
#include "specidx/krein.hpp"
#include "specidx/lattice.hpp"
#include "specidx/projpair.hpp"
#include "specidx/scatter1d.hpp"
#include "specidx/xindex.hpp"

namespace specidx {

namespace {

struct Check {
  bool ok = true;
  std::ostringstream msg;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (msg.tellp() > 0) msg << "; ";
      msg << what;
    }
  }
  void note(const std::string& what) {
    if (msg.tellp() > 0) msg << "; ";
    msg << what;
  }
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

int nquad_for(double lam_max, double support_radius) {
  int n = static_cast<int>(std::ceil(std::sqrt(lam_max) * support_radius)) + 48;
  return std::max(96, n);
}

// ---- criterion 1: Krein closed form --------------------------------------

void crit_krein(Check* c) {
  KreinParams params;
  KreinEval at_half = krein_eval(0.5, params);
  c->require(at_half.abs_err < 1e-3,
             "T0(0.5) off closed form by " + fmt(at_half.abs_err));
  std::vector<double> grid;
  for (int i = 1; i <= 20; ++i) grid.push_back(0.05 + 0.9 * (i - 0.5) / 20.0);
  double worst = krein_degenerate_scan(grid, params);
  c->require(worst < 1e-3, "max |1 + A0| over the scan = " + fmt(worst));
  c->note("|T0(0.5)-(-1+i)| = " + fmt(at_half.abs_err) +
          ", scan max |1+A0| = " + fmt(worst));
}

// ---- criterion 2: resolvent identity -------------------------------------

void crit_resolvent_identity(Check* c, unsigned long seed, bool corrupt) {
  Grid1D grid = Grid1D::make(-20.0, 20.0, 400);
  DenseSelfAdjoint h0d = build_h0(grid);
  std::mt19937_64 rng(seed);
  const Complex zs[3] = {{0.0, 1.0}, {1.0, 1.0}, {-2.0, 0.0}};
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    PotentialSpec v = random_potential(rng, trial % 2 == 0);
    DenseSelfAdjoint hd = build_h(grid, v);
    if (corrupt) hd.matrix(0, 0) += 0.37;  // negative control: hd != h0d + V
    for (const Complex& z : zs) {
      double res = resolvent_identity_residual(h0d, hd, v, z);
      worst = std::max(worst, res);
    }
  }
  c->require(worst < 1e-8, "residual " + fmt(worst));
  c->note("max residual over 5 potentials x 3 shifts = " + fmt(worst));
}

// ---- criterion 3: classical Birman-Schwinger equivalence ------------------

void crit_bs_equivalence(Check* c, unsigned long seed) {
  Grid1D grid = Grid1D::make(-20.0, 20.0, 400);
  DenseSelfAdjoint h0d = build_h0(grid);
  VectorXd h0_eigs = sym_eigenvalues(h0d.matrix);
  std::mt19937_64 rng(seed + 1);
  const double lams[3] = {-0.5, -0.1, -0.01};
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    bool attractive = trial < 20;
    PotentialSpec v = random_potential(rng, attractive);
    DenseSelfAdjoint hd = build_h(grid, v);
    VectorXd hd_eigs = sym_eigenvalues(hd.matrix);
    std::vector<int> support = support_indices(grid, v);
    VectorXd jdiag = j_sign_on_support(grid, v, support);
    MatrixXd jmat = jdiag.asDiagonal();
    for (double lam : lams) {
      int lattice_xi = counting(h0_eigs, lam) - counting(hd_eigs, lam);
      SandwichedResolvent t0 = t0_matrix(h0d, v, Complex(lam, 0.0));
      MatrixXd m = t0.matrix.real() + jmat;
      auto bs_xi = negative_count_index(m, jmat, 1e-11);
      c->require(bs_xi.has_value(),
                 "BS matrix singular at lam=" + fmt(lam) + " trial " +
                     std::to_string(trial));
      if (bs_xi) {
        c->require(lattice_xi == *bs_xi,
                   "route mismatch at lam=" + fmt(lam) + " trial " +
                       std::to_string(trial) + ": " +
                       std::to_string(lattice_xi) + " vs " +
                       std::to_string(*bs_xi));
        ++checked;
      }
    }
  }
  c->note(std::to_string(checked) + "/90 route comparisons exact");
}

// ---- criterion 4: bound-state locations -----------------------------------

void crit_bound_states(Check* c, unsigned long seed) {
  // Square-well family.
  std::mt19937_64 rng(seed + 2);
  std::uniform_real_distribution<double> depth(0.5, 3.0);
  std::uniform_real_distribution<double> halfw(0.5, 2.5);
  Grid1D grid = Grid1D::make(-20.0, 20.0, 800);
  DenseSelfAdjoint h0d = build_h0(grid);
  BoundStateOptions opts;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    PotentialSpec v = square_well(depth(rng), halfw(rng));
    DenseSelfAdjoint hd = build_h(grid, v);
    VectorXd eigs = sym_eigenvalues(hd.matrix);
    std::vector<double> direct;
    for (int i = 0; i < eigs.size(); ++i)
      if (eigs(i) < opts.lambda_ceiling) direct.push_back(eigs(i));
    std::vector<double> bs = bs_bound_states(h0d, v, opts);
    c->require(bs.size() == direct.size(),
               "count mismatch in trial " + std::to_string(trial) + ": " +
                   std::to_string(bs.size()) + " vs " +
                   std::to_string(direct.size()));
    if (bs.size() == direct.size())
      for (size_t i = 0; i < bs.size(); ++i)
        worst = std::max(worst, std::abs(bs[i] - direct[i]));
  }
  c->require(worst < 1e-6, "square-well location error " + fmt(worst));

  // Poschl-Teller convergence to the continuum value -1.
  PotentialSpec pt = poschl_teller(2.0, 1.0);
  std::vector<double> errs;
  for (int n : {449, 899, 1799}) {
    Grid1D g = Grid1D::make(-18.0, 18.0, n);
    DenseSelfAdjoint h0 = build_h0(g);
    std::vector<double> states = bs_bound_states(h0, pt, opts);
    c->require(states.size() == 1, "PT states at n=" + std::to_string(n) +
                                       ": " + std::to_string(states.size()));
    if (states.size() == 1) errs.push_back(std::abs(states[0] + 1.0));
    DenseSelfAdjoint hd = build_h(g, pt);
    VectorXd eigs = sym_eigenvalues(hd.matrix);
    if (states.size() == 1)
      c->require(std::abs(states[0] - eigs(0)) < 1e-6,
                 "PT BS location vs lattice eigenvalue at n=" +
                     std::to_string(n));
  }
  if (errs.size() == 3) {
    c->require(errs[1] < errs[0] / 3.2 && errs[2] < errs[1] / 3.2,
               "PT error not quadratic: " + fmt(errs[0]) + ", " + fmt(errs[1]) +
                   ", " + fmt(errs[2]));
    c->note("PT errors under h -> h/2: " + fmt(errs[0]) + " -> " +
            fmt(errs[1]) + " -> " + fmt(errs[2]));
  }
}

// ---- criterion 5: Theorem d1 ----------------------------------------------

struct Bracket {
  double lo, hi;
};

bool brackets_meet(const Bracket& a, const Bracket& b, double slack) {
  return a.lo - slack <= b.hi && b.lo - slack <= a.hi;
}

void crit_thm_d1(Check* c) {
  PotentialSpec v = gaussian_well(8.0, 1.0);
  const int nquad = nquad_for(25.0, v.support_radius);
  GridPolicy policy;

  std::vector<double> grid(40);
  for (int i = 0; i < 40; ++i) grid[i] = 0.05 + (25.0 - 0.05) * i / 39.0;
  XiCurve curve = xi_curve(v, grid, nquad);

  MuResult master = mu_at_traced(M_PI, grid.front(), v, policy);
  std::vector<Bracket> crossing_brackets;
  for (const Crossing& cr : master.trace.crossings) {
    if (!std::isfinite(cr.hi)) continue;
    Crossing fine = refine_crossing(v, cr, 1e-4, policy.ode_tol);
    crossing_brackets.push_back({fine.lo, fine.hi});
  }

  auto inside_any = [&](double lam, double slack) {
    for (const auto& j : curve.jumps)
      if (lam >= j.lo - slack && lam <= j.hi + slack) return true;
    for (const auto& b : crossing_brackets)
      if (lam >= b.lo - slack && lam <= b.hi + slack) return true;
    return false;
  };

  int compared = 0;
  for (int i = 0; i < 40; ++i) {
    double lam = grid[i];
    if (!curve.fredholm[i] || inside_any(lam, 1e-3)) continue;
    int mu = mu_at(M_PI, lam, v, policy);
    c->require(*curve.xi[i] == -mu,
               "xi != -mu at lam=" + fmt(lam) + ": " +
                   std::to_string(*curve.xi[i]) + " vs " + std::to_string(-mu));
    ++compared;
  }
  c->require(compared >= 30, "too few comparable grid points: " +
                                 std::to_string(compared));

  // Jump brackets and pi-crossing brackets must pair up inside the window.
  const double lo_win = grid.front(), hi_win = grid.back();
  int jumps_matched = 0;
  for (const auto& j : curve.jumps) {
    bool hit = false;
    for (const auto& b : crossing_brackets)
      if (brackets_meet({j.lo, j.hi}, b, 5e-3)) hit = true;
    c->require(hit, "xi jump near " + fmt(0.5 * (j.lo + j.hi)) +
                        " has no eigenphase crossing of pi");
    if (hit) ++jumps_matched;
  }
  for (const auto& b : crossing_brackets) {
    if (b.hi < lo_win || b.lo > hi_win) continue;
    bool hit = false;
    for (const auto& j : curve.jumps)
      if (brackets_meet({j.lo, j.hi}, b, 5e-3)) hit = true;
    c->require(hit, "pi crossing near " + fmt(0.5 * (b.lo + b.hi)) +
                        " has no xi jump");
  }
  c->require(!curve.jumps.empty(), "expected at least one xi jump");
  c->note(std::to_string(compared) + " grid identities, " +
          std::to_string(jumps_matched) + " jump brackets matched, " +
          std::to_string(crossing_brackets.size()) + " crossings");
}

// ---- criterion 6: general-theta identity ----------------------------------

void crit_general_theta(Check* c) {
  PotentialSpec v = gaussian_well(8.0, 1.0);
  GridPolicy policy;
  const double thetas[3] = {M_PI / 2.0, M_PI, 3.0 * M_PI / 2.0};
  const double lam0s[3] = {0.2, 1.0, 5.0};
  for (double theta : thetas) {
    for (double lam0 : lam0s) {
      const int nquad = nquad_for(lam0, v.support_radius);
      BSOperator op = a0_b0_1d(lam0, v, nquad);
      VectorXd jdiag = j_sign_nodes(v, op.nodes);
      DenseSelfAdjoint m = assemble_bsmat(jdiag, op, theta);
      MatrixXd jmat = jdiag.asDiagonal();
      double tol = 1e-6 * (1.0 + operator_norm_sym(op.a0));
      auto idx = negative_count_index(m.matrix, jmat, tol);
      c->require(idx.has_value(), "assembled matrix singular at theta=" +
                                      fmt(theta) + ", lam0=" + fmt(lam0));
      if (!idx) continue;
      int mu = mu_at(theta, lam0, v, policy);
      c->require(mu == -*idx, "mu != index route at theta=" + fmt(theta) +
                                  ", lam0=" + fmt(lam0) + ": " +
                                  std::to_string(mu) + " vs " +
                                  std::to_string(-*idx));
    }
  }
}

// ---- criterion 7: high energy ---------------------------------------------

void crit_high_energy(Check* c) {
  std::vector<PotentialSpec> pots;
  pots.push_back(square_well(2.0, 1.0));
  pots.push_back(gaussian_well(4.0, 1.0));
  pots.push_back(poschl_teller(2.0, 1.0));
  pots.push_back(exponential_well(2.0, 1.0));
  for (const auto& v : pots) {
    double lam_star = 0.0;
    for (double lam = 1.0; lam < std::pow(2.0, 24); lam *= 2.0) {
      int nq = std::min(nquad_for(lam, v.support_radius), 1024);
      XiPoint pt = xi_essential(lam, v, nq);
      if (pt.a0_norm < 1.0 && pt.xi && *pt.xi == 0) {
        lam_star = lam;
        break;
      }
    }
    c->require(lam_star > 0.0, v.name + ": no Lambda* found");
    if (lam_star == 0.0) continue;
    for (double mult : {1.0, 2.0, 4.0, 8.0}) {
      double lam = lam_star * mult;
      XiPoint pt = xi_essential(
          lam, v, std::min(nquad_for(lam, v.support_radius), 1024));
      c->require(pt.a0_norm < 1.0 && pt.xi && *pt.xi == 0,
                 v.name + ": high-energy check fails at " + fmt(lam));
    }
    c->note(v.name + ": Lambda* = " + fmt(lam_star));
  }
}

// ---- criterion 8: bounds on every curve ------------------------------------

void crit_bounds(Check* c) {
  std::vector<PotentialSpec> pots;
  pots.push_back(square_well(2.0, 1.0));
  pots.push_back(gaussian_well(8.0, 1.0));
  pots.push_back(poschl_teller(2.0, 1.0));
  pots.push_back(exponential_well(2.0, 1.0));
  int points = 0, violations = 0;
  for (const auto& v : pots) {
    const int nquad = nquad_for(25.0, v.support_radius);
    std::vector<double> grid(60);
    for (int i = 0; i < 60; ++i) grid[i] = 0.05 + (25.0 - 0.05) * i / 59.0;
    XiCurve curve = xi_curve(v, grid, nquad);
    BoundReport report = bound_report(curve, v, nquad);
    points += static_cast<int>(report.entries.size());
    violations += static_cast<int>(report.violations().size());
  }
  c->require(violations == 0, std::to_string(violations) + " bound violations");
  c->note(std::to_string(points) + " defined curve points, 0 violations");
}

// ---- criterion 9: projection-pair algebra ----------------------------------

void crit_projections(Check* c, unsigned long seed) {
  std::mt19937_64 rng(seed + 3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> dim_dist(4, 16);
  for (int trial = 0; trial < 100; ++trial) {
    int dim = dim_dist(rng);
    std::uniform_int_distribution<int> rank_dist(0, dim);
    int rp = rank_dist(rng), rq = rank_dist(rng);
    auto draw = [&](int rank) {
      std::vector<Eigen::VectorXd> basis(rank);
      for (int j = 0; j < rank; ++j) {
        basis[j].resize(dim);
        for (int t = 0; t < dim; ++t) basis[j](t) = gauss(rng);
      }
      return make_projection(dim, basis);
    };
    OrthProjection p = draw(rp), q = draw(rq);
    IndexCertificate cert = index_pair(p, q);
    c->require(cert.value == rp - rq,
               "index != rank difference in trial " + std::to_string(trial));
    auto bad = pairing_violations(eigenvalue_pairing_report(p, q, 1e-9));
    c->require(bad.empty(),
               "pairing violations in trial " + std::to_string(trial));
    TraceIndexResult t = trace_index_check(p, q);
    c->require(t.agree, "trace formula off by " + fmt(t.trace - t.index) +
                            " in trial " + std::to_string(trial));
  }
}

// ---- criterion 10: kernel oracle agreement ---------------------------------

void crit_kernel_oracle(Check* c) {
  EpsOracleParams params;
  std::vector<PotentialSpec> pots;
  pots.push_back(gaussian_well(1.0, 1.0));
  pots.push_back(exponential_well(1.0, 2.0));
  for (const auto& v : pots) {
    for (double lam : {0.5, 1.0, 4.0}) {
      const int nquad = nquad_for(lam, v.support_radius);
      BSOperator op = a0_b0_1d(lam, v, nquad);
      MatrixXcd oracle = t0_eps_oracle(lam, 0.08, v, nquad, params);
      double da = operator_norm_sym(op.a0 - oracle.real());
      double db = operator_norm_sym(op.b0 - oracle.imag());
      c->require(da < 1e-3 && db < 1e-3,
                 v.name + " lam=" + fmt(lam) + ": |dA0|=" + fmt(da) +
                     " |dB0|=" + fmt(db));
    }
  }

  // d=3 s-wave: B0 is rank one with eigenvalue (1/k) int |V| sin^2(k r) dr.
  PotentialSpec vr = exponential_well(1.0, 2.0);
  const double lam = 1.0, k = 1.0;
  BSOperator op = a0_b0_radial_d3(lam, vr, 0, 128);
  VectorXd ev = sym_eigenvalues(op.b0);
  double top = ev(ev.size() - 1);
  double second = std::max(std::abs(ev(ev.size() - 2)), std::abs(ev(0)));
  double quad_sum = 0.0;
  for (int i = 0; i < op.nodes.size(); ++i) {
    double s = std::sin(k * op.nodes(i));
    quad_sum += op.weights(i) * std::abs(vr(op.nodes(i))) * s * s / k;
  }
  c->require(std::abs(top - quad_sum) < 1e-8,
             "s-wave B0 eigenvalue vs separable quadrature: " +
                 fmt(std::abs(top - quad_sum)));
  c->require(second < 1e-8, "B0 not rank one: second eigenvalue " + fmt(second));
}

// ---- criterion 11: Hilbert-Schmidt bound ------------------------------------

void crit_hs_bound(Check* c, unsigned long seed) {
  // Radial indicator, depth 3, radius 1: closed form c^2/4.
  PotentialSpec ind = square_well(3.0, 1.0);
  double bound = hs_bound_d3(ind, 1024);

  // 6-d Monte Carlo with the radial sampling density ~ 1/|x-y|^2 so the
  // integrand is bounded.
  std::mt19937_64 rng(seed + 4);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double R = 1.0, L = 2.0 * R;
  const double vol_x = 4.0 / 3.0 * M_PI * R * R * R;
  const long samples = 10000000;
  double acc = 0.0, acc2 = 0.0;
  for (long s = 0; s < samples; ++s) {
    double rx = R * std::cbrt(uni(rng));
    double cz = 2.0 * uni(rng) - 1.0, az = 2.0 * M_PI * uni(rng);
    double sz = std::sqrt(1.0 - cz * cz);
    double x[3] = {rx * sz * std::cos(az), rx * sz * std::sin(az), rx * cz};
    double t = L * uni(rng);
    double cw = 2.0 * uni(rng) - 1.0, aw = 2.0 * M_PI * uni(rng);
    double sw = std::sqrt(1.0 - cw * cw);
    double y[3] = {x[0] + t * sw * std::cos(aw), x[1] + t * sw * std::sin(aw),
                   x[2] + t * cw};
    double ry2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
    double val = (ry2 <= R * R) ? 9.0 * vol_x * L * 4.0 * M_PI : 0.0;
    acc += val;
    acc2 += val * val;
  }
  double mc = acc / samples / (16.0 * M_PI * M_PI);
  double var = (acc2 / samples - (acc / samples) * (acc / samples)) / samples;
  double stderr_mc = std::sqrt(std::max(0.0, var)) / (16.0 * M_PI * M_PI);
  c->require(std::abs(bound - mc) < 0.01 * bound,
             "HS bound vs MC: " + fmt(bound) + " vs " + fmt(mc));
  c->note("bound=" + fmt(bound) + " mc=" + fmt(mc) + " (se " + fmt(stderr_mc) +
          "), closed form " + fmt(9.0 / 4.0));

  // Domination of the channel-truncated index for a deep radial Gaussian.
  PotentialSpec vg = gaussian_well(8.0, 1.0);
  double bound_g = hs_bound_d3(vg, 1024);
  int defined = 0;
  for (int i = 0; i < 10; ++i) {
    double lam = 0.1 * std::pow(10.0 / 0.1, i / 9.0);
    RadialXi rx = xi_radial_truncated(lam, vg, 8,
                                      nquad_for(lam, vg.support_radius));
    if (!rx.total) continue;
    ++defined;
    c->require(std::abs(*rx.total) <= bound_g,
               "HS bound " + fmt(bound_g) + " < |Xi_trunc| = " +
                   std::to_string(std::abs(*rx.total)) + " at lam=" + fmt(lam));
  }
  c->require(defined >= 8, "too few defined radial samples");
  c->note("gaussian HS bound " + fmt(bound_g) + ", " +
          std::to_string(defined) + "/10 sampled lam defined");
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  struct Item {
    int id;
    std::string name;
    std::function<void(Check*)> fn;
  };
  const unsigned long seed = opts.seed;
  std::vector<Item> items = {
      {1, "krein closed form", [](Check* c) { crit_krein(c); }},
      {2, "resolvent identity",
       [&](Check* c) { crit_resolvent_identity(c, seed, opts.negative_control); }},
      {3, "birman-schwinger equivalence",
       [&](Check* c) { crit_bs_equivalence(c, seed); }},
      {4, "bound-state locations", [&](Check* c) { crit_bound_states(c, seed); }},
      {5, "theorem d1 (flow identity)", [](Check* c) { crit_thm_d1(c); }},
      {6, "general-theta identity", [](Check* c) { crit_general_theta(c); }},
      {7, "high-energy decay", [](Check* c) { crit_high_energy(c); }},
      {8, "spectral and rank bounds", [](Check* c) { crit_bounds(c); }},
      {9, "projection-pair algebra", [&](Check* c) { crit_projections(c, seed); }},
      {10, "kernel oracle agreement", [](Check* c) { crit_kernel_oracle(c); }},
      {11, "hilbert-schmidt bound", [&](Check* c) { crit_hs_bound(c, seed); }},
  };

  std::vector<CriterionResult> results;
  for (const auto& item : items) {
    if (!opts.only.empty() &&
        std::find(opts.only.begin(), opts.only.end(), item.id) ==
            opts.only.end())
      continue;
    CriterionResult r;
    r.id = item.id;
    r.name = item.name;
    auto start = std::chrono::steady_clock::now();
    Check check;
    try {
      item.fn(&check);
      r.passed = check.ok;
      r.detail = check.msg.str();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    // Stated runtime limits are part of the criteria.
    if (r.id == 1 && r.seconds > 30.0) {
      r.passed = false;
      r.detail += "; runtime over 30 s";
    }
    if (r.id == 2 && r.seconds > 10.0) {
      r.passed = false;
      r.detail += "; runtime over 10 s";
    }
    if (r.id == 3 && r.seconds > 120.0) {
      r.passed = false;
      r.detail += "; runtime over 2 min";
    }
    if (r.id == 5 && r.seconds > 180.0) {
      r.passed = false;
      r.detail += "; runtime over 3 min";
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace specidx

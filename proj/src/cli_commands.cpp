#include "specidx/cli_commands.hpp"

#include <json.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "specidx/errors.hpp"
#include "specidx/krein.hpp"
#include "specidx/scatter1d.hpp"
#include "specidx/validate.hpp"
#include "specidx/xindex.hpp"

namespace specidx {

namespace {

using nlohmann::json;

// RFC-4180-style CSV with '.' decimal and full-precision scientific floats.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path) {
    if (!out_) throw ConfigError("cannot open " + path + " for writing");
  }
  CsvWriter& field(const std::string& s) {
    sep();
    bool quote = s.find_first_of(",\"\n") != std::string::npos;
    if (!quote) {
      out_ << s;
    } else {
      out_ << '"';
      for (char ch : s) {
        if (ch == '"') out_ << '"';
        out_ << ch;
      }
      out_ << '"';
    }
    return *this;
  }
  CsvWriter& field(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17e", x);
    return field(std::string(buf));
  }
  CsvWriter& field(int x) { return field(std::to_string(x)); }
  void endrow() {
    out_ << "\r\n";
    first_ = true;
  }

 private:
  void sep() {
    if (!first_) out_ << ',';
    first_ = false;
  }
  std::ofstream out_;
  bool first_ = true;
};

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
  return g;
}

json config_echo(const RunConfig& cfg) { return json::parse(serialize_config(cfg)); }

int guarded(const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int cmd_xi_curve(const RunConfig& cfg) {
  return guarded([&] {
    check_config(cfg, /*needs_positive_window=*/true);
    PotentialSpec v = make_potential(cfg);
    XiCurve curve = xi_curve(v, linear_grid(cfg.lam_min, cfg.lam_max, cfg.npoints),
                             cfg.nquad, cfg.tol_sing);
    CsvWriter csv(cfg.output_path + ".csv");
    csv.field("lambda").field("xi").field("fredholm").field("min_singval");
    csv.endrow();
    for (size_t i = 0; i < curve.lambdas.size(); ++i) {
      csv.field(curve.lambdas[i]);
      if (curve.xi[i])
        csv.field(*curve.xi[i]);
      else
        csv.field("");
      csv.field(curve.fredholm[i] ? 1 : 0);
      csv.field(curve.min_singvals[i]);
      csv.endrow();
    }
    json j;
    j["config"] = config_echo(cfg);
    j["jumps"] = json::array();
    for (const auto& jump : curve.jumps)
      j["jumps"].push_back({{"lo", jump.lo}, {"hi", jump.hi}, {"jump", jump.jump}});
    write_json(cfg.output_path + ".json", j);
    std::cout << "xi-curve: " << curve.lambdas.size() << " points, "
              << curve.jumps.size() << " jump brackets -> " << cfg.output_path
              << ".csv\n";
  });
}

int cmd_flow(const RunConfig& cfg) {
  return guarded([&] {
    check_config(cfg, /*needs_positive_window=*/true);
    PotentialSpec v = make_potential(cfg);
    GridPolicy policy;
    policy.ode_tol = cfg.ode_tol;
    MuResult res = mu_at_traced(M_PI, cfg.lam_min, v, policy);
    const FlowTrace& tr = res.trace;
    CsvWriter csv(cfg.output_path + ".csv");
    csv.field("lambda").field("phase_1").field("phase_2").field("crossings_so_far");
    csv.endrow();
    int so_far = 0;
    size_t cross_idx = 0;
    for (size_t i = 0; i < tr.lambdas.size(); ++i) {
      if (!std::isfinite(tr.lambdas[i])) continue;  // synthetic S(inf) row
      while (cross_idx < tr.crossings.size() &&
             tr.crossings[cross_idx].hi <= tr.lambdas[i]) {
        so_far += tr.crossings[cross_idx].sign;
        ++cross_idx;
      }
      csv.field(tr.lambdas[i]);
      csv.field(tr.phases[i][0]);
      csv.field(tr.phases[i][1]);
      csv.field(so_far);
      csv.endrow();
    }
    json j;
    j["config"] = config_echo(cfg);
    j["mu_pi"] = res.mu;
    j["lambda_max"] = tr.lambda_max;
    j["tail_defect"] = tr.tail_defect;
    j["crossings"] = json::array();
    for (const auto& c : tr.crossings)
      j["crossings"].push_back({{"lo", c.lo},
                                {"hi", std::isfinite(c.hi) ? c.hi : -1.0},
                                {"sign", c.sign}});
    write_json(cfg.output_path + ".json", j);
    std::cout << "flow: mu(-1; " << cfg.lam_min << ") = " << res.mu << ", "
              << tr.crossings.size() << " crossings -> " << cfg.output_path
              << ".csv\n";
  });
}

int cmd_bs_spectrum(const RunConfig& cfg) {
  return guarded([&] {
    check_config(cfg, /*needs_positive_window=*/true);
    PotentialSpec v = make_potential(cfg);
    std::vector<double> grid = linear_grid(cfg.lam_min, cfg.lam_max, cfg.npoints);
    CsvWriter csv(cfg.output_path + ".csv");
    csv.field("lambda");
    for (int t = 1; t <= cfg.nquad; ++t) csv.field("a0_eig_" + std::to_string(t));
    for (int t = 1; t <= cfg.nquad; ++t) csv.field("b0_eig_" + std::to_string(t));
    csv.endrow();
    for (double lam : grid) {
      BSOperator op = a0_b0_1d(lam, v, cfg.nquad);
      VectorXd ea = sym_eigenvalues(op.a0), eb = sym_eigenvalues(op.b0);
      csv.field(lam);
      for (int t = 0; t < cfg.nquad; ++t) csv.field(ea(t));
      for (int t = 0; t < cfg.nquad; ++t) csv.field(eb(t));
      csv.endrow();
    }
    json j;
    j["config"] = config_echo(cfg);
    j["columns"] = 1 + 2 * cfg.nquad;
    write_json(cfg.output_path + ".json", j);
    std::cout << "bs-spectrum: " << grid.size() << " energies -> "
              << cfg.output_path << ".csv\n";
  });
}

int cmd_krein_demo(const RunConfig& cfg) {
  return guarded([&] {
    check_config(cfg, /*needs_positive_window=*/true);
    if (!(cfg.lam_max < 1.0))
      throw ConfigError("krein-demo: the window must lie inside (0, 1)");
    KreinParams params;
    std::vector<double> grid = linear_grid(cfg.lam_min, cfg.lam_max, cfg.npoints);
    CsvWriter csv(cfg.output_path + ".csv");
    csv.field("lambda")
        .field("re_closed")
        .field("im_closed")
        .field("re_numeric")
        .field("im_numeric")
        .field("abs_err");
    csv.endrow();
    double worst = 0.0;
    for (double lam : grid) {
      KreinEval e = krein_eval(lam, params);
      worst = std::max(worst, e.abs_err);
      csv.field(lam);
      csv.field(e.t0_closed.real());
      csv.field(e.t0_closed.imag());
      csv.field(e.t0_numeric.real());
      csv.field(e.t0_numeric.imag());
      csv.field(e.abs_err);
      csv.endrow();
    }
    json j;
    j["config"] = config_echo(cfg);
    j["max_abs_err"] = worst;
    write_json(cfg.output_path + ".json", j);
    std::cout << "krein demo: " << grid.size()
              << " energies, max |closed - numeric| = " << worst << " -> "
              << cfg.output_path << ".csv\n";
  });
}

int cmd_validate(const RunConfig& cfg, bool negative_control) {
  try {
    AcceptanceOptions opts;
    opts.seed = cfg.seed;
    opts.negative_control = negative_control;
    std::vector<CriterionResult> results = run_acceptance(opts);
    json j;
    j["config"] = config_echo(cfg);
    j["criteria"] = json::array();
    std::string first_failure;
    for (const auto& r : results) {
      std::printf("[%s] criterion %2d %-32s (%.1f s) %s\n",
                  r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                  r.detail.c_str());
      j["criteria"].push_back({{"id", r.id},
                               {"name", r.name},
                               {"passed", r.passed},
                               {"detail", r.detail},
                               {"seconds", r.seconds}});
      if (!r.passed && first_failure.empty()) first_failure = r.name;
    }
    j["all_passed"] = first_failure.empty();
    write_json(cfg.output_path + ".json", j);
    if (!first_failure.empty()) {
      std::cerr << "validate: first failing criterion: " << first_failure
                << "\n";
      return 1;
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace specidx

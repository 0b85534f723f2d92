// Command-line surface for the spectral-projection index toolkit.

#include <CLI11.hpp>

#include "specidx/cli_commands.hpp"

namespace {

void add_common(CLI::App* cmd, specidx::RunConfig* cfg) {
  cmd->add_option("--potential", cfg->potential,
                  "square_well | gaussian | poschl_teller | exponential | "
                  "custom-table");
  cmd->add_option("--depth", cfg->depth, "well depth (positive = attractive)");
  cmd->add_option("--width", cfg->width, "well width / half-width");
  cmd->add_option("--table", cfg->table_path, "sample file for custom-table");
  cmd->add_option("--table-rho", cfg->table_rho, "declared decay exponent");
  cmd->add_option("--lam-min", cfg->lam_min, "window start");
  cmd->add_option("--lam-max", cfg->lam_max, "window end");
  cmd->add_option("--npoints", cfg->npoints, "grid points in the window");
  cmd->add_option("--nquad", cfg->nquad, "Nystrom quadrature order");
  cmd->add_option("--ode-tol", cfg->ode_tol, "scattering ODE tolerance");
  cmd->add_option("--tol-sing", cfg->tol_sing, "singular-set tolerance");
  cmd->add_option("--output", cfg->output_path, "output path stem");
  cmd->add_option("--seed", cfg->seed, "seed for randomized suites");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"index of pairs of spectral projections for 1-d Schrodinger "
               "operators: four routes and their cross-validation"};
  app.require_subcommand(1);

  specidx::RunConfig cfg;
  bool negative_control = false;

  CLI::App* xi = app.add_subcommand("xi-curve", "xi(lambda) over a window");
  add_common(xi, &cfg);
  CLI::App* flow =
      app.add_subcommand("flow", "eigenphase flow of S(lambda) at theta = pi");
  add_common(flow, &cfg);
  CLI::App* bs =
      app.add_subcommand("bs-spectrum", "raw A0/B0 eigenvalues per lambda");
  add_common(bs, &cfg);
  CLI::App* krein =
      app.add_subcommand("krein-demo", "closed-form degenerate example");
  add_common(krein, &cfg);
  CLI::App* validate =
      app.add_subcommand("validate", "run the full acceptance suite");
  add_common(validate, &cfg);
  validate->add_flag("--negative-control", negative_control,
                     "corrupt one identity to prove the suite can fail");

  CLI11_PARSE(app, argc, argv);

  if (xi->parsed()) return specidx::cmd_xi_curve(cfg);
  if (flow->parsed()) return specidx::cmd_flow(cfg);
  if (bs->parsed()) return specidx::cmd_bs_spectrum(cfg);
  if (krein->parsed()) return specidx::cmd_krein_demo(cfg);
  if (validate->parsed()) return specidx::cmd_validate(cfg, negative_control);
  return 2;
}

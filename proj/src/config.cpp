#include "specidx/config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

#include "specidx/errors.hpp"

namespace specidx {

using nlohmann::json;

std::string serialize_config(const RunConfig& c) {
  json j;
  j["potential"] = c.potential;
  j["depth"] = c.depth;
  j["width"] = c.width;
  j["table_path"] = c.table_path;
  j["table_rho"] = c.table_rho;
  j["lam_min"] = c.lam_min;
  j["lam_max"] = c.lam_max;
  j["npoints"] = c.npoints;
  j["nquad"] = c.nquad;
  j["ode_tol"] = c.ode_tol;
  j["tol_sing"] = c.tol_sing;
  j["output_path"] = c.output_path;
  j["seed"] = c.seed;
  return j.dump(2);
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse: ") + e.what());
  }
  RunConfig c;
  try {
    j.at("potential").get_to(c.potential);
    j.at("depth").get_to(c.depth);
    j.at("width").get_to(c.width);
    j.at("table_path").get_to(c.table_path);
    j.at("table_rho").get_to(c.table_rho);
    j.at("lam_min").get_to(c.lam_min);
    j.at("lam_max").get_to(c.lam_max);
    j.at("npoints").get_to(c.npoints);
    j.at("nquad").get_to(c.nquad);
    j.at("ode_tol").get_to(c.ode_tol);
    j.at("tol_sing").get_to(c.tol_sing);
    j.at("output_path").get_to(c.output_path);
    j.at("seed").get_to(c.seed);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config fields: ") + e.what());
  }
  return c;
}

void check_config(const RunConfig& c, bool needs_positive_window) {
  if (needs_positive_window && !(c.lam_min > 0.0))
    throw ConfigError("lam-min must be positive on the essential spectrum");
  if (!(c.lam_max > c.lam_min)) throw ConfigError("lam-max must exceed lam-min");
  if (c.npoints < 2) throw ConfigError("npoints must be at least 2");
  if (c.nquad < 32) throw ConfigError("nquad must be at least 32");
  if (!(c.ode_tol > 0.0) || !(c.tol_sing > 0.0))
    throw ConfigError("tolerances must be positive");
  if (c.output_path.empty()) throw ConfigError("output path must be set");
}

PotentialSpec make_potential(const RunConfig& c) {
  if (c.potential == "square_well") return square_well(c.depth, c.width);
  if (c.potential == "gaussian") return gaussian_well(c.depth, c.width);
  if (c.potential == "poschl_teller") return poschl_teller(c.depth, c.width);
  if (c.potential == "exponential")
    return exponential_well(c.depth, 1.0 / c.width);
  if (c.potential == "custom-table") {
    std::ifstream in(c.table_path);
    if (!in) throw ConfigError("custom-table: cannot open " + c.table_path);
    std::vector<double> xs, vs;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream row(line);
      double x, v;
      if (!(row >> x)) continue;
      row >> std::ws;
      if (row.peek() == ',') row.get();
      if (!(row >> v)) throw ConfigError("custom-table: bad row: " + line);
      xs.push_back(x);
      vs.push_back(v);
    }
    return table_potential(std::move(xs), std::move(vs), c.table_rho);
  }
  throw ConfigError("unknown potential: " + c.potential);
}

}  // namespace specidx

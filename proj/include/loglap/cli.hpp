#pragma once

// Command-line front end: configuration merge (defaults <- JSON file <- flags),
// suite execution and report output.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "loglap/identities.hpp"
#include "loglap/field_spec.hpp"
#include "loglap/report.hpp"

namespace loglap {

struct RunConfig {
  std::string command = "verify";  // constants | verify
  int n = 1;
  std::vector<std::string> suites;
  std::map<std::string, double> tolerances;  // suite -> primary tolerance
  QuadratureSpec quadrature;
  GridSpec grid;
  std::uint64_t seed = 20240601;
  std::string output_path;  // empty: stdout
  std::optional<std::string> emit_csv;
  double perturb = 0.0;
  std::vector<std::string> fields;  // field specs for commutator and sublinear
};

/// Bad command line or configuration; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help was given; carries the text to print.
struct HelpRequested {
  std::string text;
};

namespace detail {

inline ZeroMode parse_zero_mode(const std::string& s) {
  if (s == "corrected") return ZeroMode::corrected();
  if (s == "exclude") return ZeroMode::exclude();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return ZeroMode::assign(v);
  } catch (const std::exception&) {
  }
  throw UsageError("--zero-mode expects 'corrected', 'exclude' or a number, got '" + s + "'");
}

inline std::vector<std::string> expand_suites(const std::vector<std::string>& in) {
  std::vector<std::string> out;
  for (const auto& s : in) {
    if (s == "all") {
      for (const auto& id : suite_ids()) out.push_back(id);
    } else if (is_suite(s)) {
      out.push_back(s);
    } else {
      throw UsageError("unknown suite '" + s + "'");
    }
  }
  return out;
}

inline void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read config file " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const std::exception& e) {
    throw UsageError("config file " + path + " is not valid JSON: " + e.what());
  }
  try {
    if (j.contains("n")) cfg.n = j.at("n").get<int>();
    if (j.contains("suites")) cfg.suites = expand_suites(j.at("suites").get<std::vector<std::string>>());
    if (j.contains("tolerances"))
      for (auto& [k, v] : j.at("tolerances").items()) {
        if (!is_suite(k)) throw UsageError("unknown suite '" + k + "' in tolerances");
        cfg.tolerances[k] = v.get<double>();
      }
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("out")) cfg.output_path = j.at("out").get<std::string>();
    if (j.contains("emit_csv")) cfg.emit_csv = j.at("emit_csv").get<std::string>();
    if (j.contains("perturb")) cfg.perturb = j.at("perturb").get<double>();
    if (j.contains("fields")) cfg.fields = j.at("fields").get<std::vector<std::string>>();
    if (j.contains("quadrature")) {
      const auto& q = j.at("quadrature");
      if (q.contains("abs_tol")) cfg.quadrature.abs_tol = q.at("abs_tol").get<double>();
      if (q.contains("rel_tol")) cfg.quadrature.rel_tol = q.at("rel_tol").get<double>();
      if (q.contains("r_min")) cfg.quadrature.r_min = q.at("r_min").get<double>();
      if (q.contains("rho_min")) cfg.quadrature.rho_min = q.at("rho_min").get<double>();
      if (q.contains("max_subdivisions")) cfg.quadrature.max_subdivisions = q.at("max_subdivisions").get<int>();
    }
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      if (g.contains("L")) cfg.grid.L = g.at("L").get<double>();
      if (g.contains("N")) cfg.grid.N = g.at("N").get<int>();
      if (g.contains("zero_mode")) {
        const auto& z = g.at("zero_mode");
        cfg.grid.zero_mode = z.is_number() ? ZeroMode::assign(z.get<double>()) : parse_zero_mode(z.get<std::string>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file " + path + ": " + e.what());
  }
}

}  // namespace detail

/// Parses argv (without the program name).  Throws UsageError or HelpRequested.
inline RunConfig parse_args(const std::vector<std::string>& argv) {
  CLI::App app{"Numerical verification of the logarithmic Laplacian and its bubble solutions", "loglap"};
  app.fallthrough();
  app.require_subcommand(1, 1);

  int n = 1;
  double tol = 0, quad_abs = 0, quad_rel = 0, grid_L = 0, perturb = 0;
  int grid_N = 0;
  std::uint64_t seed = 0;
  std::string config_path, out_path, csv_path, zero_mode;
  std::vector<std::string> suites;

  auto* o_n = app.add_option("--n", n, "dimension")->check(CLI::Range(1, 8));
  auto* o_tol = app.add_option("--tol", tol, "primary tolerance for every selected suite");
  auto* o_seed = app.add_option("--seed", seed, "random seed");
  auto* o_cfg = app.add_option("--config", config_path, "JSON configuration file");
  auto* o_out = app.add_option("--out", out_path, "write the JSON report here instead of stdout");
  auto* o_csv = app.add_option("--emit-csv", csv_path, "also write case values as CSV");
  auto* o_qa = app.add_option("--quad-abs-tol", quad_abs, "quadrature absolute tolerance");
  auto* o_qr = app.add_option("--quad-rel-tol", quad_rel, "quadrature relative tolerance");
  auto* o_gl = app.add_option("--grid-L", grid_L, "grid half width");
  auto* o_gn = app.add_option("--grid-N", grid_N, "grid points per axis (power of two)");
  auto* o_zm = app.add_option("--zero-mode", zero_mode, "corrected | exclude | <value>");
  auto* o_pt = app.add_option("--perturb", perturb, "detector perturbation strength");

  auto* c_const = app.add_subcommand("constants", "print the constants table");
  auto* c_verify = app.add_subcommand("verify", "run identity suites");
  c_verify->add_option("suite", suites, "suite id(s) or 'all'")->required();
  auto* c_exp = app.add_subcommand("expansion", "run the small-s expansion suite");
  auto* c_pitt = app.add_subcommand("pitt", "run the Pitt inequality suite");
  auto* c_poh = app.add_subcommand("pohozaev", "run the Pohozaev suite");

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig cfg;
  if (o_cfg->count()) detail::apply_config_file(cfg, config_path);
  if (o_n->count()) cfg.n = n;
  if (c_const->parsed()) {
    cfg.command = "constants";
    cfg.suites.clear();
  } else {
    cfg.command = "verify";
    if (c_verify->parsed()) cfg.suites = detail::expand_suites(suites);
    if (c_exp->parsed()) cfg.suites = {"expansion"};
    if (c_pitt->parsed()) cfg.suites = {"pitt"};
    if (c_poh->parsed()) cfg.suites = {"pohozaev"};
    if (cfg.suites.empty()) throw UsageError("no suites selected");
  }
  if (o_tol->count())
    for (const auto& s : cfg.suites) cfg.tolerances[s] = tol;
  if (o_seed->count()) cfg.seed = seed;
  if (o_out->count()) cfg.output_path = out_path;
  if (o_csv->count()) cfg.emit_csv = csv_path;
  if (o_qa->count()) cfg.quadrature.abs_tol = quad_abs;
  if (o_qr->count()) cfg.quadrature.rel_tol = quad_rel;
  if (o_gl->count()) cfg.grid.L = grid_L;
  if (o_gn->count()) cfg.grid.N = grid_N;
  if (o_zm->count()) cfg.grid.zero_mode = detail::parse_zero_mode(zero_mode);
  if (o_pt->count()) cfg.perturb = perturb;

  if (cfg.n < 1 || cfg.n > 8) throw UsageError("n must lie in 1..8");
  try {
    cfg.quadrature.validate();
    GridSpec g = cfg.grid;
    g.n = 1;
    g.validate();
    for (const auto& f : cfg.fields)
      if (parse_field_spec(f).dim() != cfg.n) throw UsageError("field '" + f + "' does not match --n");
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

inline nlohmann::json config_json(const RunConfig& cfg) {
  nlohmann::json tols = nlohmann::json::object();
  for (const auto& s : cfg.suites)
    tols[s] = cfg.tolerances.count(s) ? cfg.tolerances.at(s) : default_tolerance(s, cfg.n);
  return {{"command", cfg.command},
          {"n", cfg.n},
          {"suites", cfg.suites},
          {"tolerances", tols},
          {"quadrature", detail::quad_json(cfg.quadrature)},
          {"grid", {{"L", cfg.grid.L}, {"N", cfg.grid.N}, {"zero_mode", cfg.grid.zero_mode.to_string()}}},
          {"seed", cfg.seed},
          {"perturb", cfg.perturb},
          {"fields", cfg.fields},
          {"out", cfg.output_path},
          {"emit_csv", cfg.emit_csv ? *cfg.emit_csv : ""}};
}

/// 0 when every report passes, 1 otherwise.
inline int exit_code_for(const std::vector<CheckReport>& reports) {
  for (const auto& r : reports)
    if (!r.overall_pass) return 1;
  return 0;
}

/// Executes the configuration.  Returns the process exit code.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  nlohmann::json doc;
  std::vector<CheckReport> reports;
  try {
    if (cfg.command == "constants") {
      doc = constants_json(cfg.n);
    } else {
      SuiteContext ctx;
      ctx.quad = cfg.quadrature;
      ctx.grid = cfg.grid;
      ctx.grid.n = (cfg.n == 2) ? 2 : 1;
      ctx.perturb = cfg.perturb;
      ctx.seed = cfg.seed;
      for (const auto& f : cfg.fields) ctx.fields.push_back(parse_field_spec(f));
      for (const auto& s : cfg.suites) {
        std::optional<double> tol;
        if (cfg.tolerances.count(s)) tol = cfg.tolerances.at(s);
        reports.push_back(run_suite(s, cfg.n, tol, ctx));
      }
      nlohmann::json reps = nlohmann::json::array();
      for (const auto& r : reports) reps.push_back(to_json(r));
      doc = {{"version", kVersion}, {"config", config_json(cfg)}, {"constants", constants_json(cfg.n)}, {"reports", reps}};
    }
  } catch (const DomainError& e) {
    err << "loglap: " << e.what() << "\n";
    return 2;
  }

  const std::string text = doc.dump(2) + "\n";
  if (cfg.output_path.empty()) {
    out << text;
  } else {
    std::ofstream os(cfg.output_path);
    os << text;
    if (!os) {
      err << "loglap: cannot write " << cfg.output_path << "\n";
      return 2;
    }
  }
  if (cfg.emit_csv) {
    std::ofstream os(*cfg.emit_csv);
    write_cases_csv(os, reports, cfg.n);
    if (!os) {
      err << "loglap: cannot write " << *cfg.emit_csv << "\n";
      return 2;
    }
  }
  return exit_code_for(reports);
}

/// main() body: parse, run, map errors to exit codes.
inline int main_entry(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(parse_args(args), out, err);
  } catch (const HelpRequested& h) {
    out << h.text;
    return 0;
  } catch (const UsageError& e) {
    err << "loglap: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace loglap

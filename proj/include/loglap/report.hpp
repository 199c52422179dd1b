#pragma once

// JSON and CSV encodings of constants and check reports.

#include <json.hpp>

#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "loglap/identities.hpp"
#include "loglap/specfun.hpp"

namespace loglap {

inline constexpr const char* kVersion = "0.1.0";

inline std::vector<double> default_b_grid() { return {0.05, 0.1, 0.25, 0.4}; }

/// The constants table as printed by the `constants` command.
inline nlohmann::json constants_json(int n) {
  const auto t = constants_table(n);
  const auto be = b_expansion(n);
  nlohmann::json b = nlohmann::json::array();
  for (double s : default_b_grid())
    if (n > 2.0 * s) b.push_back({{"s", s}, {"b", frac_constants(n, s).b_ns}});
  return {{"n", t.n},
          {"c_n", t.c_n},
          {"rho_n", t.rho_n},
          {"beta_n", t.beta_n},
          {"lambda_n", t.lambda_n},
          {"B_n_printed", t.B_n_printed},
          {"ln_lambda_n", t.ln_lambda_n},
          {"D_n", t.D_n},
          {"b_ns", b},
          {"gap_Bn", t.ln_lambda_n - t.B_n_printed},
          {"b1_empirical", be.b1_empirical},
          {"b1_printed", be.b1_printed}};
}

inline nlohmann::json to_json(const CaseResult& c) {
  nlohmann::json j = {{"case_id", c.case_id}, {"inputs", c.inputs}, {"lhs", c.lhs},     {"rhs", c.rhs},
                      {"abs_err", c.abs_err}, {"tol", c.tol},       {"pass", c.pass},   {"relation", c.relation},
                      {"coords", c.coords}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline nlohmann::json to_json(const CheckReport& r) {
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : r.cases) cases.push_back(to_json(c));
  return {{"suite_id", r.suite_id},         {"paper_anchor", r.paper_anchor}, {"dimension", r.dimension},
          {"cases", cases},                 {"overall_pass", r.overall_pass}, {"runtime_ms", r.runtime_ms},
          {"diagnostics", r.diagnostics}};
}

/// Rows `suite,case,coord0..coord{n-1},lhs,rhs,abs_err`.
inline void write_cases_csv(std::ostream& os, const std::vector<CheckReport>& reports, int coord_columns) {
  os.precision(17);
  os << "suite,case";
  for (int i = 0; i < coord_columns; ++i) os << ",coord" << i;
  os << ",lhs,rhs,abs_err\n";
  for (const auto& r : reports)
    for (const auto& c : r.cases) {
      os << r.suite_id << "," << c.case_id;
      for (int i = 0; i < coord_columns; ++i) {
        os << ",";
        if (i < static_cast<int>(c.coords.size())) os << c.coords[i];
      }
      os << "," << c.lhs << "," << c.rhs << "," << c.abs_err << "\n";
    }
}

}  // namespace loglap

// Acceptance criteria 1-13.  Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "loglap/cli.hpp"
#include "loglap/loglap.hpp"

using namespace loglap;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// largest |lhs - rhs| / scale over the cases whose id starts with prefix
double worst_ratio(const CheckReport& r, const std::string& prefix = "") {
  double w = 0.0;
  for (const auto& c : r.cases)
    if (c.case_id.rfind(prefix, 0) == 0) w = std::max(w, c.tol > 0 ? c.abs_err / c.tol : (c.pass ? 0.0 : INFINITY));
  return w;
}

const CaseResult* find_case(const CheckReport& r, const std::string& id) {
  for (const auto& c : r.cases)
    if (c.case_id == id) return &c;
  return nullptr;
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r1 = run_suite("bubble", 1, 1e-5, {});
  const auto r2 = run_suite("bubble", 2, 1e-4, {});
  const double secs = seconds_since(t0);
  const bool ok = r1.overall_pass && r2.overall_pass && r1.cases.size() == 48 && r2.cases.size() == 48 && secs <= 60.0;
  return {ok, fmt("n=1 worst/tol %.2e", worst_ratio(r1)) + fmt(", n=2 worst/tol %.2e", worst_ratio(r2)) +
                  fmt(", %.1f s", secs)};
}

Outcome criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_suite("fracbubble", 1, 1e-5, {});
  const double secs = seconds_since(t0);
  return {r.overall_pass && r.cases.size() == 24 && secs <= 30.0,
          fmt("worst/tol %.2e", worst_ratio(r)) + fmt(", %.1f s", secs)};
}

Outcome criterion3_4(const CheckReport& e1, const char* id, double target, double tol) {
  const CaseResult* c = find_case(e1, id);
  if (!c) return {false, std::string("missing case ") + id};
  return {std::abs(c->lhs - target) <= tol && c->pass, fmt("slope %.4f", c->lhs)};
}

Outcome criterion5() {
  bool ok = true;
  double worst_beta = 0.0, worst_gap = 0.0;
  for (int n = 1; n <= 8; ++n) {
    const auto t = constants_table(n);
    worst_beta = std::max(worst_beta, std::abs(t.beta_n - b_limit(n)));
    worst_gap = std::max(worst_gap, std::abs((t.ln_lambda_n - t.B_n_printed) - 0.5 * n * kLn2));
  }
  ok = ok && worst_beta <= 1e-8 && worst_gap <= 1e-10;
  const auto e2 = check_expansion(2, 0.3, {});
  const CaseResult* slope = find_case(e2, "b_residual_slope");
  const double b1 = b_expansion(2).b1_empirical;
  ok = ok && slope && std::abs(slope->lhs - 2.0) <= 0.2 && std::abs(b1 - (-0.13018)) <= 1e-4;
  return {ok, fmt("|beta-b_lim| %.1e", worst_beta) + fmt(", gap dev %.1e", worst_gap) +
                  fmt(", b slope %.4f", slope ? slope->lhs : NAN) + fmt(", b1(2) %.6f", b1)};
}

Outcome criterion6() {
  const auto r = run_suite("commutator", 1, 1e-4, {});
  int point = 0, grid = 0;
  for (const auto& c : r.cases) {
    point += c.case_id.find("/point") != std::string::npos;
    grid += c.case_id.find("/grid") != std::string::npos;
  }
  return {r.overall_pass && point == 8 && grid == 8, fmt("worst/tol %.2e", worst_ratio(r))};
}

Outcome criterion7() {
  const auto r = check_kelvin(1, {Point::zero(1)}, {1.0}, spread_points(1, 8, 0.3, 5.0), 1e-4, {});
  double worst = 0.0;
  for (const auto& c : r.cases)
    if (c.case_id.rfind("c0/", 0) == 0) worst = std::max(worst, c.abs_err / std::abs(c.rhs));
  return {r.overall_pass && worst <= 1e-4, fmt("max relative error %.2e", worst)};
}

Outcome criterion8() {
  bool ok = true;
  double worst_op = 0.0, worst_l2 = 0.0;
  for (int n : {1, 2}) {
    const auto r = check_scaling(n, {0.5, 1.0, 2.0, 5.0}, 1e-7, 1e-8, {});
    ok = ok && r.overall_pass;
    for (const auto& c : r.cases) {
      const bool l2 = c.case_id.find("l2") != std::string::npos;
      const double ratio = c.abs_err / std::max(1.0, std::abs(c.rhs));
      (l2 ? worst_l2 : worst_op) = std::max(l2 ? worst_l2 : worst_op, ratio);
    }
  }
  ok = ok && worst_op <= 1e-7 && worst_l2 <= 1e-8;
  return {ok, fmt("operator %.2e", worst_op) + fmt(", L2 %.2e", worst_l2)};
}

Outcome criterion9() {
  const auto r2 = check_pohozaev(2, 1.0, {1.0, 2.0, 4.0}, 1e-3, {});
  const auto r1 = check_pohozaev(1, 1.0, {1.0, 4.0, 8.0}, 1e-3, {});
  const double lambda2 = std::pow(constants_table(2).lambda_n, 2);
  bool ok = r1.overall_pass && r2.overall_pass && std::abs(lambda2 - 3.96139) <= 1e-5;
  double worst_k = 0.0;
  for (const char* id : {"k=1", "k=2", "k=4"}) {
    const CaseResult* c = find_case(r2, id);
    if (!c) return {false, std::string("missing case ") + id};
    worst_k = std::max(worst_k, c->abs_err / std::max(std::abs(c->rhs), lambda2));
  }
  const CaseResult* zero = find_case(r2, "k=2");
  ok = ok && worst_k <= 1e-3 && zero && std::abs(zero->rhs) == 0.0;
  return {ok, fmt("chain n=2 %.2e", find_case(r2, "chain")->abs_err) + fmt(", k-sweep relative %.2e", worst_k) +
                  fmt(", zero at k=2 residual %.2e", zero ? zero->abs_err : NAN)};
}

Outcome criterion10() {
  bool ok = true;
  std::string d;
  for (int n : {1, 2}) {
    const auto r = check_pitt(n, 32, 20240601, 1e-3, 1e-6, {});
    int mixtures = 0;
    double min_slack = INFINITY;
    for (const auto& c : r.cases)
      if (c.case_id.rfind("mixture", 0) == 0) {
        ++mixtures;
        min_slack = std::min(min_slack, c.lhs - c.rhs);
      }
    const CaseResult* ext = find_case(r, "extremal");
    const double ln_lambda = n == 1 ? -0.062813 : 0.688297;
    ok = ok && r.overall_pass && mixtures == 32 && min_slack >= -1e-6 && ext &&
         std::abs(ext->lhs - ln_lambda) <= 1e-3 + 1e-6;
    d += fmt("n=%.0f:", n) + fmt(" min slack %.3e", min_slack) + fmt(", P %.6f; ", ext ? ext->lhs : NAN);
  }
  return {ok, d};
}

Outcome criterion11() {
  double worst = 0.0;
  for (int n : {1, 2}) {
    GridSpec g;
    g.n = n;
    std::vector<Field> fields{make_gaussian(n, 1.0), random_mixture(n, 7, 0), random_mixture(n, 7, 1)};
    for (const auto& u : fields) {
      const GridResult lg = loglap_grid(sample(u, g));
      for (const auto& x : spread_points(n, 6, 0.0, 3.0))
        worst = std::max(worst, std::abs(loglap_point(u, x).value - lg.at(x)));
    }
  }
  const double exact = -(kEulerGamma + kLn2);
  const double quad = loglap_point(make_gaussian(1, 1.0), Point{0.0}).value;
  GridSpec g1;
  const double grid = loglap_grid(sample(make_gaussian(1, 1.0), g1)).at(Point{0.0});
  const double anchor = std::max(std::abs(quad - exact), std::abs(grid - exact));
  return {worst <= 1e-4 && anchor <= 1e-6 && std::abs(exact + 1.2703628) <= 1e-7,
          fmt("cross-path %.2e", worst) + fmt(", anchor quad %.2e", std::abs(quad - exact)) +
              fmt(", grid %.2e", std::abs(grid - exact))};
}

Outcome criterion12() {
  SuiteContext ctx;
  ctx.perturb = 0.01;
  std::string survivors;
  for (int n : {1, 2})
    for (const auto& s : suite_ids()) {
      ctx.grid.n = n;
      const auto r = run_suite(s, n, std::nullopt, ctx);
      if (r.overall_pass) survivors += " " + s + "(n=" + std::to_string(n) + ")";
    }
  return {survivors.empty(), survivors.empty() ? "all 20 suite runs fail when perturbed" : "passed:" + survivors};
}

std::string strip_runtime(const std::string& s) {
  static const std::regex re("\"runtime_ms\": [0-9]+");
  return std::regex_replace(s, re, "\"runtime_ms\": 0");
}

Outcome criterion13() {
  bool same = true;
  for (const auto& args : {std::vector<std::string>{"--n", "1", "--seed", "99", "verify", "all"},
                           std::vector<std::string>{"--n", "2", "--seed", "99", "verify", "pitt", "asymptotics"}}) {
    std::ostringstream a, b, err;
    run(parse_args(args), a, err);
    run(parse_args(args), b, err);
    same = same && !a.str().empty() && strip_runtime(a.str()) == strip_runtime(b.str());
  }
  return {same, same ? "identical JSON apart from runtime_ms" : "JSON differs"};
}

}  // namespace

int main() {
  const auto e1 = check_expansion(1, 0.3, {});
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"bubble PDE residual", criterion1},
      {"fractional bubble residual", criterion2},
      {"operator expansion rate", [&] { return criterion3_4(e1, "plain_family_rate", 1.0, 0.2); }},
      {"fractional bubble family rate", [&] { return criterion3_4(e1, "fracbubble_family_rate", 2.0, 0.3); }},
      {"constants", criterion5},
      {"commutator", criterion6},
      {"Kelvin identity", criterion7},
      {"scaling laws", criterion8},
      {"Pohozaev", criterion9},
      {"Pitt", criterion10},
      {"cross-path agreement", criterion11},
      {"detector honesty", criterion12},
      {"determinism", criterion13},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("criterion %2zu %-30s %s  %s\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

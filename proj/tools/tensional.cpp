// Command-line front end: run a config file, run the built-in casebook, or
// round-trip an expression through the parser.
//
// Exit codes: 0 success, 1 verdict or expectation mismatch, 2 config or usage
// error, 3 numerical or domain error while a task was running.

#include <cctype>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tensional/engine.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : csv) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

int cmd_run(const std::string& config_path, bool has_seed, std::uint64_t seed, bool has_tol,
            double tol, bool has_jet, int jet_order, bool parallel, const std::string& out_path,
            const std::string& format) {
  tensional::json doc;
  try {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "cannot open config file '" << config_path << "'\n";
      return 2;
    }
    doc = tensional::json::parse(in);
  } catch (const tensional::json::exception& e) {
    std::cerr << "config file '" << config_path << "' is not valid JSON: " << e.what() << "\n";
    return 2;
  }
  try {
    // fold command-line overrides into the document before validation so the
    // config digest covers the effective settings
    if (has_seed) doc["sampling"]["seed"] = seed;
    if (has_jet) doc["sampling"]["jet_order"] = jet_order;
    if (has_tol) doc["tolerances"]["verdict"] = tol;
  } catch (const tensional::json::exception& e) {
    std::cerr << "cannot apply command-line overrides: " << e.what() << "\n";
    return 2;
  }
  tensional::RunConfig cfg;
  try {
    cfg = tensional::parse_config(doc);
  } catch (const tensional::ValidationError& e) {
    for (const std::string& issue : e.issues) std::cerr << issue << "\n";
    return 2;
  } catch (const tensional::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  if (!out_path.empty()) cfg.output.path = out_path;
  if (!format.empty()) cfg.output.format = format;
  tensional::json rep;
  try {
    rep = tensional::run(cfg, parallel);
  } catch (const tensional::Error& e) {
    // per-task failures are captured in the report; reaching here means setup
    // failed (for example a chart whose metric is not positive definite)
    std::cerr << e.what() << "\n";
    return 3;
  }
  std::string body =
      cfg.output.format == "text" ? tensional::render_text(rep) : rep.dump(2) + "\n";
  if (cfg.output.path.empty()) {
    std::cout << body;
  } else {
    std::ofstream out(cfg.output.path);
    if (!out) {
      std::cerr << "cannot write report to '" << cfg.output.path << "'\n";
      return 3;
    }
    out << body;
  }
  return tensional::report_exit_code(rep);
}

int cmd_casebook(bool all, const std::string& case_id) {
  using namespace tensional;
  try {
    if (all || case_id.empty()) {
      SuiteSummary s = run_all();
      for (const auto& r : s.reports)
        std::cout << (r.pass ? "pass " : "FAIL ") << r.id << "\n";
      std::cout << "suite: " << s.passed << "/" << s.total << (s.pass ? " pass" : " FAIL")
                << "\n";
      return s.pass ? 0 : 1;
    }
    CaseReport r = run_case(case_id);
    for (const auto& c : r.checks) {
      std::cout << (c.pass ? "pass " : "FAIL ") << c.quantity << ": value " << c.value
                << ", expected " << c.expected << " (" << c.origin << ")\n";
      if (!c.note.empty()) std::cout << "     note: " << c.note << "\n";
    }
    for (const auto& n : r.notes) std::cout << "note: " << n << "\n";
    std::cout << r.id << ": " << (r.pass ? "pass" : "FAIL") << "\n";
    return r.pass ? 0 : 1;
  } catch (const UnknownCase& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    for (const std::string& issue : e.issues) std::cerr << issue << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }
}

int cmd_check_expr(const std::string& text, const std::string& vars_csv) {
  std::vector<std::string> vars = split_csv(vars_csv);
  try {
    tensional::ExprAst ast = tensional::parse(text, vars, {});
    std::cout << tensional::print(ast) << "\n";
    return 0;
  } catch (const tensional::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chart-level tension field computations"};
  app.set_version_flag("--version", tensional::kToolVersion);
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "execute the tasks in a config file");
  std::string config_path, out_path, format;
  std::uint64_t seed = 42;
  double tol = 1e-7;
  int jet_order = 2;
  bool parallel = false;
  run_cmd->add_option("--config", config_path, "path to a JSON run configuration")->required();
  auto* seed_opt = run_cmd->add_option("--seed", seed, "override sampling.seed");
  auto* tol_opt = run_cmd->add_option("--tolerance", tol, "override tolerances.verdict");
  auto* jet_opt = run_cmd->add_option("--jet-order", jet_order, "override sampling.jet_order");
  run_cmd->add_flag("--parallel", parallel, "run tasks concurrently (report order is unchanged)");
  run_cmd->add_option("--out", out_path, "write the report to this path");
  auto* fmt_opt = run_cmd->add_option("--format", format, "report format")
                      ->check(CLI::IsMember({"json", "text"}));

  auto* cb_cmd = app.add_subcommand("casebook", "run the built-in verification cases");
  bool all = false;
  std::string case_id;
  auto* all_flag = cb_cmd->add_flag("--all", all, "run every registered case");
  cb_cmd->add_option("--case", case_id, "run a single case by id")->excludes(all_flag);

  auto* ce_cmd = app.add_subcommand("check-expr", "parse an expression and print it back");
  std::string expr_text, vars_csv;
  ce_cmd->add_option("expr", expr_text, "expression text")->required();
  ce_cmd->add_option("--vars", vars_csv, "comma-separated variable names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (run_cmd->parsed())
    return cmd_run(config_path, seed_opt->count() > 0, seed, tol_opt->count() > 0, tol,
                   jet_opt->count() > 0, jet_order, parallel, out_path,
                   fmt_opt->count() > 0 ? format : std::string());
  if (cb_cmd->parsed()) return cmd_casebook(all, case_id);
  return cmd_check_expr(expr_text, vars_csv);
}

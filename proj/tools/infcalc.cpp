#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "infcalc/cli.hpp"
#include "infcalc/oracle.hpp"
#include "infcalc/render.hpp"

using nlohmann::ordered_json;
using namespace infcalc;

namespace {

ordered_json to_json(const OracleEvidence& e) {
  ordered_json j;
  j["kind"] = e.kind;
  j["pass"] = e.pass;
  if (!e.ns.empty()) j["ns"] = e.ns;
  if (!e.lhs.empty()) j[e.kind == "values" ? "values" : "lhs"] = e.lhs;
  if (!e.rhs.empty()) j["rhs"] = e.rhs;
  for (const auto& [k, v] : e.fields) j[k] = v;
  return j;
}

ordered_json to_json(const ScenarioReport& r) {
  ordered_json j;
  j["name"] = r.name;
  j["classical_claim"] = r.classical_claim;
  j["classical_value"] = r.classical_value;
  j["corrected_value"] = r.corrected.to_string();
  j["missing_terms"] = render(r.missing_terms);
  j["catalog"] = r.catalog.to_string();
  j["catalog_match"] = r.catalog_match;
  if (!r.catalog_note.empty()) j["catalog_note"] = r.catalog_note;
  ordered_json details = ordered_json::object();
  for (const auto& [k, v] : r.details) details[k] = v;
  j["details"] = details;
  ordered_json evidence = ordered_json::array();
  for (const auto& e : r.evidence) evidence.push_back({{"label", e.label}, {"pass", e.pass}, {"detail", e.detail}});
  j["oracle_evidence"] = evidence;
  return j;
}

ordered_json to_json(const LineResult& r) {
  ordered_json j;
  j["input"] = r.input;
  j["status"] = r.ok ? "ok" : (r.code ? "error" : "fail");
  j["result"] = r.result;
  if (r.code) j["code"] = std::string(code_name(*r.code));
  if (!r.error.empty()) j["error"] = r.error;
  if (r.oracle) j["oracle"] = to_json(*r.oracle);
  if (r.report) j["report"] = to_json(*r.report);
  return j;
}

std::string text_line(const LineResult& r) {
  if (r.code) return "error [" + std::string(code_name(*r.code)) + "]: " + r.error;
  std::string out = r.report ? render(*r.report) : r.result;
  while (!out.empty() && out.back() == '\n') out.pop_back();
  // explicit oracle(...) calls already print their evidence as the result
  const bool attached = r.oracle && !r.report && (r.value || r.result == "true" || r.result == "false");
  if (attached && r.oracle->kind == "values") {
    out += "\n  oracle:";
    for (std::size_t i = 0; i < r.oracle->ns.size(); ++i) out += " N=" + r.oracle->ns[i] + ": " + r.oracle->lhs[i] + ";";
  } else if (attached && r.oracle->kind == "identity") {
    out += std::string("\n  oracle: ") + (r.oracle->pass ? "pass at N=" : "FAIL at N=");
    for (std::size_t i = 0; i < r.oracle->ns.size(); ++i) out += (i ? "," : "") + r.oracle->ns[i];
  } else if (attached) {
    out += std::string("\n  oracle: ") + (r.oracle->pass ? "pass" : "FAIL");
    for (const auto& [k, v] : r.oracle->fields) out += "; " + k + " " + v;
  }
  if (!r.ok && !r.code) out += "\nfailed: " + r.error;
  return out;
}

std::vector<mpz_class> parse_ns(const std::string& text) {
  std::vector<mpz_class> ns;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    mpz_class n;
    if (item.empty() || n.set_str(item, 10) != 0 || n < 2) {
      throw CLI::ValidationError("--oracle", "expected a comma-separated list of integers >= 2, got '" + item + "'");
    }
    ns.push_back(n);
  }
  if (ns.empty()) throw CLI::ValidationError("--oracle", "empty list");
  return ns;
}

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  std::string s = hash == std::string::npos ? line : line.substr(0, hash);
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// 0 iff every line succeeds.
int run_lines(const std::vector<std::string>& lines, const EvalOptions& opt, bool json) {
  std::vector<LineResult> results;
  for (const auto& line : lines) results.push_back(eval_line(line, opt));
  int code = 0;
  for (const auto& r : results) {
    if (!r.ok) code = 1;
  }
  if (lines.size() == 1) code = exit_code(results.front());
  if (json) {
    ordered_json out;
    out["schema"] = 1;
    out["results"] = ordered_json::array();
    for (const auto& r : results) out["results"].push_back(to_json(r));
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& r : results) {
      if (lines.size() > 1) std::cout << "> " << r.input << "\n";
      std::cout << text_line(r) << "\n";
    }
  }
  return code;
}

int run_scenarios(const std::string& which, const EvalOptions& opt, bool json) {
  std::vector<std::string> lines;
  if (which == "all") {
    for (const auto& name : scenario_names()) lines.push_back("scenario(" + name + ")");
  } else {
    lines.push_back("scenario(" + which + ")");
  }
  const int code = run_lines(lines, opt, json);
  return lines.size() > 1 && code != 0 ? 1 : code;
}

int repl(const EvalOptions& opt, bool json) {
  const bool interactive = isatty(STDIN_FILENO) != 0;
  std::string line;
  while (true) {
    if (interactive) std::cout << "infcalc> " << std::flush;
    if (!std::getline(std::cin, line)) break;
    const std::string stmt = strip_comment(line);
    if (stmt.empty()) continue;
    if (stmt == ":quit" || stmt == ":q") break;
    const LineResult r = eval_line(stmt, opt);
    if (json) {
      std::cout << to_json(r).dump() << "\n";
    } else {
      std::cout << text_line(r) << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arithmetic with the infinite number lam"};
  EvalOptions opt;
  bool json = false;
  std::string oracle_list;
  std::string scenario;
  std::string file;
  std::vector<std::string> exprs;
  app.add_flag("--json", json, "Emit JSON ({\"schema\": 1, \"results\": [...]})");
  app.add_option("--trunc-order", opt.trunc_order, "Series truncation order K")->check(CLI::Range(1, 64));
  app.add_option("--precision", opt.precision, "Precision cap in bits for sign decisions")->check(CLI::Range(64L, 1L << 20));
  app.add_option("--oracle", oracle_list, "Attach finite-N oracle evidence at these N (comma-separated)");
  app.add_option("--scenario", scenario, "Run a named scenario, or 'all'");
  app.add_option("-e,--eval", exprs, "Evaluate an expression (repeatable)");
  app.add_option("file", file, "Batch file: one statement per line, # comments")->check(CLI::ExistingFile);
  CLI11_PARSE(app, argc, argv);

  try {
    if (!oracle_list.empty()) {
      opt.oracle = true;
      opt.oracle_ns = parse_ns(oracle_list);
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  }

  if (!scenario.empty()) return run_scenarios(scenario, opt, json);
  if (!exprs.empty()) return run_lines(exprs, opt, json);
  if (!file.empty()) {
    std::ifstream in(file);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
      const std::string stmt = strip_comment(line);
      if (!stmt.empty()) lines.push_back(stmt);
    }
    const int code = run_lines(lines, opt, json);
    return lines.size() > 1 && code != 0 ? 1 : code;
  }
  return repl(opt, json);
}

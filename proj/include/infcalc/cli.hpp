#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "infcalc/error.hpp"
#include "infcalc/lambda_expr.hpp"
#include "infcalc/scenarios.hpp"

namespace infcalc {

struct Ast {
  enum class Kind {
    Number,   // text: literal
    Name,     // text: identifier
    Neg,      // kids: operand
    Binary,   // text: + - * / ^
    Compare,  // text: < <= > >= == !=
    Call,     // text: function, kids: args
    Tilde,    // kids: operand
    Range,    // kids: lo, hi
    Keyword,  // text: name, kids: value
  };

  Kind kind = Kind::Number;
  std::string text;
  std::vector<Ast> kids;
  int line = 1;
  int column = 1;
};

/// Throws Error(Syntax) with line/column, or Error(UnknownIdentifier).
Ast parse(const std::string& text);

/// Minimal-parenthesis text form; parse(print(a)) reproduces a.
std::string print(const Ast& ast);

bool same_tree(const Ast& a, const Ast& b);

struct EvalOptions {
  int trunc_order = kDefaultTruncation;
  long precision = kDefaultPrecision;
  bool oracle = false;
  std::vector<mpz_class> oracle_ns;  // empty: default_oracle_ns()
};

struct OracleEvidence {
  std::string kind;  // identity, values, integral
  bool pass = true;
  std::vector<std::string> ns;
  std::vector<std::string> lhs;
  std::vector<std::string> rhs;
  std::vector<std::pair<std::string, std::string>> fields;
};

struct LineResult {
  std::string input;
  bool ok = false;
  std::string result;
  std::optional<ErrorCode> code;
  std::string error;
  std::optional<ScenarioReport> report;
  std::optional<OracleEvidence> oracle;
  std::optional<LambdaExpr> value;  // set when the result is a λ-expression
};

LineResult eval_line(const std::string& text, const EvalOptions& options = {});

/// 0 ok, 1 evaluation failure, 2 parse failure, 3 undecided comparison.
int exit_code(const LineResult& r);

std::string render(const ScenarioReport& r);

}  // namespace infcalc

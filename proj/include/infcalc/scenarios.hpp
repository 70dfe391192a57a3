#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "infcalc/lambda_expr.hpp"

namespace infcalc {

/// Either a λ-expression or a standard part.
struct ScenarioValue {
  std::optional<LambdaExpr> expr;
  std::optional<Scalar> scalar;

  static ScenarioValue of(const LambdaExpr& x) { return {x, std::nullopt}; }
  static ScenarioValue of(const Scalar& s) { return {std::nullopt, s}; }

  std::string to_string() const;
};

struct EvidenceItem {
  std::string label;
  bool pass = false;
  std::string detail;
};

struct ScenarioReport {
  std::string name;
  std::string classical_claim;
  std::string classical_value;
  ScenarioValue corrected;
  LambdaExpr missing_terms;
  std::vector<std::pair<std::string, std::string>> details;
  std::vector<EvidenceItem> evidence;
  ScenarioValue catalog;
  bool catalog_match = false;
  std::string catalog_note;

  bool evidence_passed() const;
};

struct ScenarioParams {
  std::optional<unsigned long> m;      // euler_alternating: 2mλ terms
  std::optional<LambdaExpr> steps;     // hyperwebster duplications
  std::optional<long> base;            // divergent_geometric ratio
};

std::vector<std::string> scenario_names();

/// Throws Error(UnknownScenario) for an unknown name and Error(Domain) for
/// parameters outside the scenario's domain.
ScenarioReport run_scenario(const std::string& name, const ScenarioParams& params = {});

}  // namespace infcalc

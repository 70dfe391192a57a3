#include "infcalc/error.hpp"

namespace infcalc {

std::string_view code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DivisionByZero: return "division_by_zero";
    case ErrorCode::Undecided: return "undecided";
    case ErrorCode::Unbounded: return "unbounded";
    case ErrorCode::UnrepresentableScale: return "unrepresentable_scale";
    case ErrorCode::UnrepresentableConstant: return "unrepresentable_constant";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::ParityDependent: return "parity_dependent";
    case ErrorCode::Grammar: return "grammar";
    case ErrorCode::Divisibility: return "divisibility";
    case ErrorCode::OverflowGuard: return "overflow_guard";
    case ErrorCode::Terminal: return "terminal";
    case ErrorCode::UnknownIdentifier: return "unknown_identifier";
    case ErrorCode::Syntax: return "syntax";
    case ErrorCode::UnknownScenario: return "unknown_scenario";
  }
  return "unknown";
}

}  // namespace infcalc

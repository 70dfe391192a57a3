#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace infcalc {

/// Stable, machine-readable failure categories. The CLI maps these onto
/// exit codes and prints the `code_name` in every error record.
enum class ErrorCode {
  DivisionByZero,
  Undecided,         // a sign decision exhausted the precision cap
  Unbounded,         // standard part of an expression with infinite terms
  UnrepresentableScale,
  UnrepresentableConstant,
  Domain,            // argument outside an operation's stated domain
  ParityDependent,
  Grammar,           // summand / integrand outside the accepted grammar
  Divisibility,      // oracle assignment violates a divisor requirement
  OverflowGuard,
  Terminal,          // arithmetic on a standard-part report
  UnknownIdentifier,
  Syntax,
  UnknownScenario,
};

std::string_view code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace infcalc

#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "infcalc/interval.hpp"
#include "infcalc/lambda_expr.hpp"
#include "infcalc/summation.hpp"

namespace infcalc {

inline constexpr long kOraclePrecision = 256;

/// λ := N. N must be at least 2 and divisible by every required divisor.
struct FiniteAssignment {
  mpz_class n;
  std::vector<long> required_divisors;
  long precision = kOraclePrecision;

  explicit FiniteAssignment(mpz_class n_value, std::vector<long> divisors = {},
                            long bits = kOraclePrecision);
};

/// {12, 120, 1200, 12000}
std::vector<mpz_class> default_oracle_ns();

using OracleValue = std::variant<mpq_class, Interval>;

/// Substitutes λ := N. Exact when every term reduces to a rational; an
/// enclosure otherwise. Markers are ignored (they bound the error, they do
/// not contribute a value).
OracleValue oracle_eval(const LambdaExpr& x, const FiniteAssignment& a);
Interval oracle_interval(const LambdaExpr& x, const FiniteAssignment& a);
/// Throws Error(Domain) when the value is not rational at N.
mpq_class oracle_exact(const LambdaExpr& x, const FiniteAssignment& a);

/// Sign of an exact expression at λ := N computed in the log domain, so it
/// works for N far beyond what can be materialized (λ^λ at N = 10^40).
/// Returns nullopt when the precision cap is exhausted.
std::optional<int> oracle_sign(const LambdaExpr& x, const mpz_class& n,
                               long max_precision = kDefaultPrecision);

/// Brute-force Σ over the spec at λ := N, exactly.
mpq_class oracle_sum(const SumSpec& spec, const FiniteAssignment& a);
/// Brute-force Σ with each summand evaluated as an enclosure.
Interval oracle_sum_interval(const SumSpec& spec, const FiniteAssignment& a);

struct IdentityRecord {
  bool pass = true;
  std::vector<mpz_class> ns;
  std::vector<mpq_class> lhs;
  std::vector<mpq_class> rhs;
  std::optional<mpz_class> first_failure;
};

using ExactSequence = std::function<mpq_class(const mpz_class& n)>;

IdentityRecord oracle_identity(const ExactSequence& lhs, const LambdaExpr& rhs,
                               const std::vector<mpz_class>& ns);
IdentityRecord oracle_identity(const SumSpec& lhs, const LambdaExpr& rhs,
                               const std::vector<mpz_class>& ns);
IdentityRecord oracle_identity(const LambdaExpr& lhs, const LambdaExpr& rhs,
                               const std::vector<mpz_class>& ns);

struct ConvergenceRecord {
  std::vector<mpz_class> ns;
  std::vector<double> errors;      // may underflow to 0 for tiny errors
  std::vector<double> log_errors;  // natural log, -inf for a true zero
  double rate = 0.0;
  double constant = 0.0;
  bool exact = false;
};

using NumericSequence = std::function<Interval(const mpz_class& n, long precision)>;

ConvergenceRecord oracle_convergence(const LambdaExpr& x, const Scalar& target,
                                     const std::vector<mpz_class>& ns,
                                     long precision = kOraclePrecision);
ConvergenceRecord oracle_convergence(const NumericSequence& x, const Scalar& target,
                                     const std::vector<mpz_class>& ns,
                                     long precision = kOraclePrecision);

/// Least-squares fit of log(error) = log(C) - r log(N) from natural-log
/// errors. Needs three points.
ConvergenceRecord fit_convergence(const std::vector<mpz_class>& ns, const std::vector<double>& log_errors);

/// Rate implied by a marker scale λ^{-r}; nullopt for non-power scales.
std::optional<double> predicted_rate(const ScaleKey& marker);

}  // namespace infcalc

#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "infcalc/lambda_expr.hpp"

namespace infcalc {

/// Bernoulli number with the B_1 = +1/2 convention.
mpq_class bernoulli(unsigned j);

/// Σ_{n=1}^{U} n^k, exact.
LambdaExpr sum_faulhaber(unsigned k, const LambdaExpr& upper);

/// Σ_{n=0}^{U} x^n = (x^{U+1} - 1)/(x - 1).
LambdaExpr sum_geometric(const LambdaExpr& x, const LambdaExpr& upper,
                         int trunc_order = kDefaultTruncation);

/// Σ_{j=1}^{U} j^i r^j.
LambdaExpr sum_power_geometric(unsigned i, const LambdaExpr& r, const LambdaExpr& upper,
                               int trunc_order = kDefaultTruncation);

/// The two diagonal sums of the squared geometric series:
///   first  = Σ_{n=1}^{U+1} n x^{n-1}
///   second = Σ_{n=1}^{U}   n x^{2U+1-n}
/// whose total is ((x^{U+1} - 1)/(x - 1))^2.
std::pair<LambdaExpr, LambdaExpr> sum_geom_squared(const LambdaExpr& x, const LambdaExpr& upper,
                                                   int trunc_order = kDefaultTruncation);

/// Σ_{n=1}^{U} C(n+b-1, b) = U(U+1)...(U+b)/(b+1)!.
LambdaExpr sum_binom(unsigned b, const LambdaExpr& upper);

/// H(U) for infinite U via Euler–Maclaurin.
LambdaExpr sum_harmonic(const LambdaExpr& upper, int trunc_order = kDefaultTruncation);

/// Σ_{n=1}^{U} 1/(a n + shift).
LambdaExpr sum_shifted_reciprocal(const mpq_class& a, const LambdaExpr& shift,
                                  const LambdaExpr& upper, int trunc_order = kDefaultTruncation);

/// Σ_{n=1}^{U} (-1)^{n+1} n for a provably even length U.
LambdaExpr sum_alternating_linear(const LambdaExpr& upper);
/// Same with U = 2mλ.
LambdaExpr sum_alternating_linear(unsigned m);

/// Index for binom(λ, k).
struct BinomIndex {
  enum class Kind { Finite, HalfLambda, LambdaMinus };
  Kind kind = Kind::Finite;
  unsigned long k = 0;

  static BinomIndex finite(unsigned long k) { return {Kind::Finite, k}; }
  static BinomIndex half_lambda() { return {Kind::HalfLambda, 0}; }
  static BinomIndex lambda_minus(unsigned long k) { return {Kind::LambdaMinus, k}; }
};

LambdaExpr binom_lambda(const BinomIndex& index);

// Summand grammar. Polynomial coefficients may themselves involve λ.

/// Σ_k coeffs[k] n^k
struct PolySummand {
  std::vector<LambdaExpr> coeffs;
};

/// P(n) r^n
struct GeometricSummand {
  LambdaExpr ratio;
  std::vector<LambdaExpr> poly;
};

/// C(n+b-1, b)
struct RisingBinomialSummand {
  unsigned b = 0;
};

/// numerator / (a n + shift)
struct ReciprocalSummand {
  Scalar numerator;
  mpq_class a;
  LambdaExpr shift;
};

/// (-1)^{n+1} P(n)
struct AlternatingPolySummand {
  std::vector<LambdaExpr> poly;
};

/// (-1)^{n+1} numerator / (a n + shift)
struct AlternatingReciprocalSummand {
  Scalar numerator;
  mpq_class a;
  LambdaExpr shift;
};

using Summand = std::variant<PolySummand, GeometricSummand, RisingBinomialSummand,
                             ReciprocalSummand, AlternatingPolySummand,
                             AlternatingReciprocalSummand>;

/// Σ_{index=lower}^{upper} of the sum of `body` terms.
struct SumSpec {
  std::string index = "n";
  LambdaExpr lower = LambdaExpr(1);
  LambdaExpr upper;
  std::vector<Summand> body;
};

/// Value of a summand at a concrete integer index, with λ left symbolic.
LambdaExpr summand_at(const Summand& s, const mpz_class& n, int trunc_order = kDefaultTruncation);

LambdaExpr sum_eval(const SumSpec& spec, int trunc_order = kDefaultTruncation);

/// Σ_{n=1}^{U} P(U - n) read from the other end as Σ_{m=0}^{U-1} P(m).
struct ReversalRewrite {
  LambdaExpr direct;     // expanded in n as written
  LambdaExpr reindexed;  // summed over m = U - n
  LambdaExpr delta;      // reindexed - direct
};

ReversalRewrite reverse_index(const std::vector<Scalar>& poly, const LambdaExpr& upper);

}  // namespace infcalc

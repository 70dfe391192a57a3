#pragma once

#include <string>
#include <vector>

#include "infcalc/lambda_expr.hpp"

namespace infcalc {

/// c · x^k · e^{s x}
struct FuncTerm {
  Scalar coeff = Scalar(1);
  unsigned power = 0;
  Scalar rate;
};

inline constexpr unsigned kMaxFuncPower = 16;

/// Finite sum of FuncTerms. Closed under +, − and ×.
struct FuncExpr {
  std::vector<FuncTerm> terms;

  static FuncExpr constant(const Scalar& c);
  /// c · x^k
  static FuncExpr monomial(const Scalar& c, unsigned k);
  /// c · x^k · e^{s x}
  static FuncExpr exp_term(const Scalar& c, unsigned k, const Scalar& s);

  FuncExpr operator-() const;
  friend FuncExpr operator+(const FuncExpr& a, const FuncExpr& b);
  friend FuncExpr operator-(const FuncExpr& a, const FuncExpr& b);
  friend FuncExpr operator*(const FuncExpr& a, const FuncExpr& b);

  Scalar at(const Scalar& x) const;
  std::string to_string() const;
};

/// ∫_a^b f(x) dx from the closed-form antiderivative.
Scalar integral(const FuncExpr& f, const Scalar& a, const Scalar& b);

/// Σ_{j=1}^{λ} f(a + j·dx)·dx with dx = (b − a)/λ (right endpoints).
LambdaExpr riemann_sum(const FuncExpr& f, const Scalar& a, const Scalar& b,
                       int trunc_order = kDefaultTruncation);

struct IntegralCheckReport {
  LambdaExpr riemann_expr;
  Scalar standard_part;
  Scalar analytic_value;
  bool match = false;
};

/// Standard part of the Riemann sum against the antiderivative. Throws
/// Error(Undecided) when the two cannot be compared.
IntegralCheckReport integral_check(const FuncExpr& f, const Scalar& a, const Scalar& b,
                                   int trunc_order = kDefaultTruncation);

/// The λ×λ unit grid over [0,b]², summed along diagonals.
struct DiagonalDecomposition {
  LambdaExpr grid_terms;       // λ·λ
  LambdaExpr first_triangle;   // 1 + 2 + ... + λ
  LambdaExpr second_triangle;  // 1 + 2 + ... + (λ − 1)
  LambdaExpr value;            // (first + second)·dx²
  LambdaExpr twice_integral;   // 2·riemann_sum(x, 0, b)
  LambdaExpr difference;       // twice_integral − value
};

DiagonalDecomposition double_riemann_diag(const Scalar& b);

struct GeomSquareReport {
  IntegralCheckReport total;  // analytic value is (e^{-b} − 1)²
  Scalar first_part;          // st(dx² Σ_{n=1}^{λ+1} n x^{n−1})
  Scalar second_part;         // st(dx² Σ_{n=1}^{λ} n x^{2λ+1−n})
  Scalar first_integral;      // ∫_0^b x e^{−x} dx
  Scalar second_integral;     // e^{−2b} ∫_0^b x e^{x} dx
};

/// Squared geometric series at x = 1 − b/λ scaled by dx².
GeomSquareReport geom_square_bridge(const Scalar& b, int trunc_order = kDefaultTruncation);

/// Σ (λ − n) n dx³ rewritten as Σ (λ − n + 1) n dx³, whose column sums are
/// the triangular numbers. The rewrite is recorded, not assumed.
struct TriangleRewrite {
  LambdaExpr original;     // Σ_{n=1}^{λ} (λ − n) n dx³
  LambdaExpr rewritten;    // Σ_{n=1}^{λ} (λ − n + 1) n dx³
  LambdaExpr column_form;  // Σ_{n=1}^{λ} n(n + 1)/2 dx³
  LambdaExpr delta;        // rewritten − original
};

TriangleRewrite shifted_triangle(const Scalar& b);

}  // namespace infcalc

#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "infcalc/scalar.hpp"

namespace infcalc {

inline constexpr int kDefaultTruncation = 8;

/// Growth scale λ^{dλ} · e^{sλ} · λ^e · (ln λ)^p. Keys are ordered
/// lexicographically on (d, s, e, p), which is eventual dominance.
struct ScaleKey {
  mpq_class d;
  Scalar s;
  mpq_class e;
  long p = 0;

  static ScaleKey constant() { return {}; }
  static ScaleKey power(const mpq_class& e) { return {0, Scalar(), e, 0}; }
  /// base^λ for a positive rational base.
  static ScaleKey exponential(const mpq_class& base);
  static ScaleKey lambda_to_lambda() { return {1, Scalar(), 0, 0}; }
  static ScaleKey log_power(long p) { return {0, Scalar(), 0, p}; }

  bool is_constant() const { return d == 0 && s.is_zero() && e == 0 && p == 0; }

  friend ScaleKey operator+(const ScaleKey& a, const ScaleKey& b);
  friend ScaleKey operator-(const ScaleKey& a, const ScaleKey& b);
  ScaleKey scaled(long k) const;
};

/// Three-way comparison; throws Error(Undecided) when the s components
/// cannot be separated.
int compare(const ScaleKey& a, const ScaleKey& b);

struct LambdaTerm {
  Scalar coeff;
  ScaleKey key;
};

/// O(scale) error bound carried by a truncated expansion.
struct AsymptoticMarker {
  ScaleKey scale;
  std::optional<Scalar> constant_hint;
};

enum class OrderDecision { Less, Equal, Greater, Undecided, ParityDependent };

std::string to_string(OrderDecision d);

/// A finite sum of λ-scale monomials, optionally followed by an error
/// marker. Terms are sorted strictly descending by key and all lie above
/// the marker.
class LambdaExpr {
 public:
  LambdaExpr() = default;
  LambdaExpr(long value);           // NOLINT(google-explicit-constructor)
  LambdaExpr(const mpq_class& value);  // NOLINT(google-explicit-constructor)
  LambdaExpr(const Scalar& value);  // NOLINT(google-explicit-constructor)

  static LambdaExpr lambda();
  static LambdaExpr monomial(const Scalar& coeff, const ScaleKey& key);
  static LambdaExpr big_o(const ScaleKey& scale);
  static LambdaExpr from_terms(std::vector<LambdaTerm> terms,
                               std::optional<AsymptoticMarker> marker = std::nullopt);

  const std::vector<LambdaTerm>& terms() const { return terms_; }
  const std::optional<AsymptoticMarker>& marker() const { return marker_; }

  bool is_exact() const { return !marker_.has_value(); }
  /// Exact zero (no terms, no marker).
  bool is_zero() const { return terms_.empty() && !marker_; }
  /// Exact and free of λ.
  bool is_constant() const;
  std::optional<Scalar> as_constant() const;
  /// Rational coefficients c_k of Σ c_k λ^k when the expression is an exact
  /// polynomial in λ with rational coefficients.
  std::optional<std::vector<mpq_class>> as_polynomial() const;

  /// Copy with the marker replaced by the coarser of the current marker and
  /// `scale`; terms at or below it are dropped.
  LambdaExpr with_marker(const ScaleKey& scale) const;
  LambdaExpr without_marker() const;

  /// Largest scale present: the leading key or the marker.
  std::optional<ScaleKey> magnitude() const;

  LambdaExpr operator-() const;
  friend LambdaExpr operator+(const LambdaExpr& a, const LambdaExpr& b);
  friend LambdaExpr operator-(const LambdaExpr& a, const LambdaExpr& b);
  friend LambdaExpr operator*(const LambdaExpr& a, const LambdaExpr& b);
  LambdaExpr& operator+=(const LambdaExpr& b) { return *this = *this + b; }
  LambdaExpr& operator-=(const LambdaExpr& b) { return *this = *this - b; }
  LambdaExpr& operator*=(const LambdaExpr& b) { return *this = *this * b; }

  /// Same terms (coefficients equal as values) and same marker scale.
  friend bool operator==(const LambdaExpr& a, const LambdaExpr& b);

 private:
  void normalize();

  std::vector<LambdaTerm> terms_;
  std::optional<AsymptoticMarker> marker_;
};

/// Re-runs canonicalization; idempotent.
LambdaExpr normalize(const LambdaExpr& x);

/// 1/b, exact for single monomials and otherwise a K-term series.
LambdaExpr inverse(const LambdaExpr& b, int trunc_order = kDefaultTruncation);
/// a/b: exact when polynomial division terminates, otherwise a·inverse(b).
LambdaExpr divide(const LambdaExpr& a, const LambdaExpr& b, int trunc_order = kDefaultTruncation);

LambdaExpr exp(const LambdaExpr& a, int trunc_order = kDefaultTruncation);
LambdaExpr ln(const LambdaExpr& a, int trunc_order = kDefaultTruncation);
LambdaExpr pow(const LambdaExpr& base, const LambdaExpr& exponent,
               int trunc_order = kDefaultTruncation);

OrderDecision compare(const LambdaExpr& a, const LambdaExpr& b);

/// Result of discarding infinitesimals. Deliberately not convertible back
/// into a LambdaExpr.
struct StandardPart {
  Scalar value;
};

StandardPart standard_part(const LambdaExpr& a);

struct ParityDependent {
  LambdaExpr exponent;
};

using ParityResult = std::variant<LambdaExpr, ParityDependent>;

/// (-1)^U for an exact polynomial U with rational coefficients. Decided
/// only when U(N) has the same parity for every N that is a multiple of the
/// lcm of the coefficient denominators; anything else is ParityDependent.
ParityResult neg_one_power(const LambdaExpr& exponent);

}  // namespace infcalc

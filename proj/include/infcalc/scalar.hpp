#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "infcalc/interval.hpp"

namespace infcalc {

inline constexpr long kDefaultPrecision = 4096;

enum class AtomKind : std::uint8_t {
  Root,        // prime^a with a in (0, 1)
  Pi,
  EulerGamma,
  Log,         // ln(prime)
};

struct Atom {
  AtomKind kind = AtomKind::Pi;
  unsigned long prime = 0;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// e^{exp_arg} * prod atom^exponent. Factors are sorted by atom and carry
/// nonzero exponents; Root exponents are kept in (0, 1) with the integer
/// part folded into the rational coefficient of the owning term.
struct ScalarMonomial {
  mpq_class exp_arg;
  std::vector<std::pair<Atom, mpq_class>> factors;

  bool is_one() const { return exp_arg == 0 && factors.empty(); }
  friend bool operator==(const ScalarMonomial& a, const ScalarMonomial& b);
};

/// Translation-invariant total order on monomials: exp argument first,
/// then exponent vectors lexicographically in atom order.
int compare(const ScalarMonomial& a, const ScalarMonomial& b);

struct ScalarTerm {
  ScalarMonomial monomial;
  mpq_class coeff;
  friend bool operator==(const ScalarTerm& a, const ScalarTerm& b) {
    return a.coeff == b.coeff && a.monomial == b.monomial;
  }
};

/// Terms sorted strictly descending by monomial, all coefficients nonzero.
using ScalarPoly = std::vector<ScalarTerm>;

enum class Sign { Negative, Zero, Positive, Undecided };

/// Element of the constant field: rationals extended by pi, Euler's gamma,
/// e^q (q rational), ln r (r positive rational) and rational powers of
/// positive rationals. Stored as numerator/denominator polynomials over the
/// atoms; every constructor and operation returns the canonical form.
class Scalar {
 public:
  Scalar();
  Scalar(long value);  // NOLINT(google-explicit-constructor)
  Scalar(const mpq_class& value);  // NOLINT(google-explicit-constructor)

  static Scalar pi();
  static Scalar euler_gamma();
  static Scalar exp_of(const mpq_class& q);
  /// ln r for rational r > 0, expanded over prime logarithms.
  static Scalar ln_of(const mpq_class& r);

  bool is_zero() const { return num_.empty(); }
  bool is_rational() const;
  std::optional<mpq_class> as_rational() const;
  /// Single term over a unit denominator.
  bool is_monomial() const;

  const ScalarPoly& numerator() const { return num_; }
  const ScalarPoly& denominator() const { return den_; }

  Scalar operator-() const;
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  /// Throws Error(DivisionByZero) when b is structurally zero.
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }

  /// Value equality: the difference normalizes to the literal zero.
  friend bool operator==(const Scalar& a, const Scalar& b);
  /// Structural equality of the stored canonical forms.
  bool identical(const Scalar& other) const { return num_ == other.num_ && den_ == other.den_; }

  /// s^r. Integer r works for any nonzero s; fractional r needs a single
  /// positive monomial.
  Scalar pow(const mpq_class& r) const;

  /// Rigorous enclosure of the value.
  Interval eval(long precision) const;

  /// Canonical text; re-parses to the same value.
  std::string to_string() const;

  /// Coefficients of sum_p a_p ln p when the scalar is exactly such a
  /// combination (no constant, no other atoms).
  std::optional<std::map<unsigned long, mpq_class>> as_log_combination() const;

 private:
  Scalar(ScalarPoly num, ScalarPoly den);
  void normalize();

  ScalarPoly num_;
  ScalarPoly den_;  // empty means 1
};

/// Re-runs canonicalization; idempotent.
Scalar normalize(const Scalar& s);

/// max_precision 0 means the current thread's cap (kDefaultPrecision unless
/// a SignPrecisionScope is active).
Sign sign(const Scalar& s, long max_precision = 0);

long sign_precision_cap();

class SignPrecisionScope {
 public:
  explicit SignPrecisionScope(long bits);
  ~SignPrecisionScope();
  SignPrecisionScope(const SignPrecisionScope&) = delete;
  SignPrecisionScope& operator=(const SignPrecisionScope&) = delete;

 private:
  long saved_;
};

/// e^s for s in span{1, ln p}; throws UnrepresentableConstant otherwise.
Scalar exp(const Scalar& s);
/// ln s for a positive monomial built from rationals, prime roots and e^q.
Scalar ln(const Scalar& s);

/// Prime factorization of |n|, n != 0. Throws UnrepresentableConstant when a
/// cofactor is too large to factor by trial division.
std::vector<std::pair<unsigned long, long>> factor_integer(const mpz_class& n);

std::string rational_to_string(const mpq_class& q);

}  // namespace infcalc

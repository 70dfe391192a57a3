#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <optional>
#include <string>

namespace infcalc {

/// Owning wrapper around an `mpfr_t`. Copies preserve the source precision.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t precision);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  mpfr_ptr get() noexcept { return value_; }
  mpfr_srcptr get() const noexcept { return value_; }
  mpfr_prec_t precision() const noexcept { return mpfr_get_prec(value_); }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

 private:
  mpfr_t value_;
};

/// Closed interval [lower, upper] with outward-rounded endpoints. Every
/// operation returns an enclosure of the exact result set.
class Interval {
 public:
  explicit Interval(long precision = 128);

  static Interval exact(const mpq_class& value, long precision);
  static Interval exact(const mpz_class& value, long precision);
  static Interval pi(long precision);
  static Interval euler_gamma(long precision);
  static Interval whole_line(long precision);

  long precision() const noexcept { return precision_; }
  const BigFloat& lower() const noexcept { return lo_; }
  const BigFloat& upper() const noexcept { return hi_; }

  bool contains_zero() const;
  bool contains(const mpq_class& value) const;
  bool subset_of(const Interval& other) const;
  bool is_finite() const;
  /// -1 or +1 when the interval excludes zero; nullopt otherwise.
  std::optional<int> sign() const;

  double width() const;
  double midpoint() const;
  /// Upper bound of |x| over the interval.
  double magnitude() const;

  Interval operator-() const;
  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator/(const Interval& a, const Interval& b);

  Interval abs() const;
  Interval intersect(const Interval& other) const;

  friend Interval exp(const Interval& x);
  /// Natural log; lower endpoint becomes -inf when the interval touches 0.
  friend Interval log(const Interval& x);
  /// x^r for rational r. Integer exponents work for any sign of x,
  /// fractional exponents require x > 0.
  friend Interval pow(const Interval& x, const mpq_class& r);

  std::string to_string(int digits = 20) const;

 private:
  Interval(BigFloat lo, BigFloat hi, long precision);

  BigFloat lo_;
  BigFloat hi_;
  long precision_;
};

}  // namespace infcalc

#include "infcalc/interval.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <utility>

#include "infcalc/error.hpp"

namespace infcalc {

namespace {

// Oracle evaluations at very large N produce exponents far outside the
// default MPFR range; widen it once per process.
void widen_exponent_range() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    mpfr_set_emin(mpfr_get_emin_min());
    mpfr_set_emax(mpfr_get_emax_max());
  });
}

mpfr_prec_t clamp_precision(long precision) {
  return static_cast<mpfr_prec_t>(std::clamp<long>(precision, MPFR_PREC_MIN, 1L << 24));
}

}  // namespace

BigFloat::BigFloat(mpfr_prec_t precision) {
  widen_exponent_range();
  mpfr_init2(value_, precision);
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(value_, other.precision());
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

Interval::Interval(long precision)
    : lo_(clamp_precision(precision)), hi_(clamp_precision(precision)), precision_(precision) {}

Interval::Interval(BigFloat lo, BigFloat hi, long precision)
    : lo_(std::move(lo)), hi_(std::move(hi)), precision_(precision) {
  if (mpfr_nan_p(lo_.get()) || mpfr_nan_p(hi_.get())) {
    mpfr_set_inf(lo_.get(), -1);
    mpfr_set_inf(hi_.get(), 1);
  }
}

Interval Interval::exact(const mpq_class& value, long precision) {
  Interval r(precision);
  mpfr_set_q(r.lo_.get(), value.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_.get(), value.get_mpq_t(), MPFR_RNDU);
  return r;
}

Interval Interval::exact(const mpz_class& value, long precision) {
  Interval r(precision);
  mpfr_set_z(r.lo_.get(), value.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(r.hi_.get(), value.get_mpz_t(), MPFR_RNDU);
  return r;
}

Interval Interval::pi(long precision) {
  Interval r(precision);
  mpfr_const_pi(r.lo_.get(), MPFR_RNDD);
  mpfr_const_pi(r.hi_.get(), MPFR_RNDU);
  return r;
}

Interval Interval::euler_gamma(long precision) {
  Interval r(precision);
  mpfr_const_euler(r.lo_.get(), MPFR_RNDD);
  mpfr_const_euler(r.hi_.get(), MPFR_RNDU);
  return r;
}

Interval Interval::whole_line(long precision) {
  Interval r(precision);
  mpfr_set_inf(r.lo_.get(), -1);
  mpfr_set_inf(r.hi_.get(), 1);
  return r;
}

bool Interval::contains_zero() const {
  return mpfr_sgn(lo_.get()) <= 0 && mpfr_sgn(hi_.get()) >= 0;
}

bool Interval::contains(const mpq_class& value) const {
  return mpfr_cmp_q(lo_.get(), value.get_mpq_t()) <= 0 &&
         mpfr_cmp_q(hi_.get(), value.get_mpq_t()) >= 0;
}

bool Interval::subset_of(const Interval& other) const {
  return mpfr_cmp(other.lo_.get(), lo_.get()) <= 0 && mpfr_cmp(hi_.get(), other.hi_.get()) <= 0;
}

bool Interval::is_finite() const {
  return mpfr_number_p(lo_.get()) && mpfr_number_p(hi_.get());
}

std::optional<int> Interval::sign() const {
  if (mpfr_sgn(lo_.get()) > 0) return 1;
  if (mpfr_sgn(hi_.get()) < 0) return -1;
  return std::nullopt;
}

double Interval::width() const {
  BigFloat w(lo_.precision());
  mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
  return w.to_double();
}

double Interval::midpoint() const {
  BigFloat m(lo_.precision() + 1);
  mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  return m.to_double();
}

double Interval::magnitude() const {
  return std::max(std::fabs(lo_.to_double()), std::fabs(hi_.to_double()));
}

Interval Interval::operator-() const {
  Interval r(precision_);
  mpfr_neg(r.lo_.get(), hi_.get(), MPFR_RNDD);
  mpfr_neg(r.hi_.get(), lo_.get(), MPFR_RNDU);
  return r;
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval r(std::max(a.precision_, b.precision_));
  mpfr_add(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
  mpfr_add(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
  return Interval(std::move(r.lo_), std::move(r.hi_), r.precision_);
}

Interval operator-(const Interval& a, const Interval& b) { return a + (-b); }

Interval operator*(const Interval& a, const Interval& b) {
  const long precision = std::max(a.precision_, b.precision_);
  const mpfr_prec_t p = clamp_precision(precision);
  BigFloat lo(p);
  BigFloat hi(p);
  BigFloat t(p);
  bool first = true;
  for (mpfr_srcptr x : {a.lo_.get(), a.hi_.get()}) {
    for (mpfr_srcptr y : {b.lo_.get(), b.hi_.get()}) {
      mpfr_mul(t.get(), x, y, MPFR_RNDD);
      if (mpfr_nan_p(t.get())) return Interval::whole_line(precision);
      if (first || mpfr_cmp(t.get(), lo.get()) < 0) mpfr_set(lo.get(), t.get(), MPFR_RNDD);
      mpfr_mul(t.get(), x, y, MPFR_RNDU);
      if (first || mpfr_cmp(t.get(), hi.get()) > 0) mpfr_set(hi.get(), t.get(), MPFR_RNDU);
      first = false;
    }
  }
  return Interval(std::move(lo), std::move(hi), precision);
}

Interval operator/(const Interval& a, const Interval& b) {
  const long precision = std::max(a.precision_, b.precision_);
  if (b.contains_zero()) return Interval::whole_line(precision);
  Interval inv(precision);
  mpfr_ui_div(inv.lo_.get(), 1, b.hi_.get(), MPFR_RNDD);
  mpfr_ui_div(inv.hi_.get(), 1, b.lo_.get(), MPFR_RNDU);
  return a * inv;
}

Interval Interval::abs() const {
  if (mpfr_sgn(lo_.get()) >= 0) return *this;
  if (mpfr_sgn(hi_.get()) <= 0) return -*this;
  Interval r(precision_);
  mpfr_set_zero(r.lo_.get(), 1);
  if (mpfr_cmpabs(lo_.get(), hi_.get()) > 0) {
    mpfr_abs(r.hi_.get(), lo_.get(), MPFR_RNDU);
  } else {
    mpfr_set(r.hi_.get(), hi_.get(), MPFR_RNDU);
  }
  return r;
}

Interval Interval::intersect(const Interval& other) const {
  Interval r(std::max(precision_, other.precision_));
  mpfr_max(r.lo_.get(), lo_.get(), other.lo_.get(), MPFR_RNDD);
  mpfr_min(r.hi_.get(), hi_.get(), other.hi_.get(), MPFR_RNDU);
  if (mpfr_cmp(r.lo_.get(), r.hi_.get()) > 0) {
    throw Error(ErrorCode::Domain, "disjoint interval intersection");
  }
  return r;
}

Interval exp(const Interval& x) {
  Interval r(x.precision_);
  mpfr_exp(r.lo_.get(), x.lo_.get(), MPFR_RNDD);
  mpfr_exp(r.hi_.get(), x.hi_.get(), MPFR_RNDU);
  return r;
}

Interval log(const Interval& x) {
  if (mpfr_sgn(x.hi_.get()) <= 0) {
    throw Error(ErrorCode::Domain, "logarithm of a non-positive interval");
  }
  Interval r(x.precision_);
  if (mpfr_sgn(x.lo_.get()) <= 0) {
    mpfr_set_inf(r.lo_.get(), -1);
  } else {
    mpfr_log(r.lo_.get(), x.lo_.get(), MPFR_RNDD);
  }
  mpfr_log(r.hi_.get(), x.hi_.get(), MPFR_RNDU);
  return r;
}

Interval pow(const Interval& x, const mpq_class& r) {
  if (r == 0) return Interval::exact(mpq_class(1), x.precision_);
  if (r.get_den() == 1 && r.get_num() < 0) {
    return Interval::exact(mpq_class(1), x.precision_) / pow(x, mpq_class(-r));
  }
  if (r.get_den() == 1) {
    // square-and-multiply keeps the sign handling exact for integer powers
    mpz_class n = r.get_num();
    Interval result = Interval::exact(mpq_class(1), x.precision_);
    Interval base = x;
    while (n > 0) {
      if (mpz_odd_p(n.get_mpz_t())) result = result * base;
      n >>= 1;
      if (n > 0) {
        // the square of an interval straddling zero is non-negative
        Interval sq = base * base;
        if (base.contains_zero()) {
          Interval a = base.abs();
          sq = a * a;
        }
        base = sq;
      }
    }
    return result;
  }
  if (mpfr_sgn(x.lo_.get()) <= 0) {
    throw Error(ErrorCode::Domain, "fractional power of a non-positive interval");
  }
  return exp(log(x) * Interval::exact(r, x.precision_));
}

std::string Interval::to_string(int digits) const {
  auto fmt = [digits](mpfr_srcptr v, mpfr_rnd_t rnd) {
    char* buffer = nullptr;
    const std::string spec = "%." + std::to_string(digits) + "R" + (rnd == MPFR_RNDD ? "D" : "U") + "g";
    mpfr_asprintf(&buffer, spec.c_str(), v);
    std::string s(buffer);
    mpfr_free_str(buffer);
    return s;
  };
  std::ostringstream out;
  out << "[" << fmt(lo_.get(), MPFR_RNDD) << ", " << fmt(hi_.get(), MPFR_RNDU) << "]";
  return out.str();
}

}  // namespace infcalc

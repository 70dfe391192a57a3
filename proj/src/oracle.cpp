#include "infcalc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "infcalc/error.hpp"

namespace infcalc {

namespace {

// Materializing N^{dN} is only done for small N; larger values go through
// enclosures or the log-domain sign.
const mpz_class kMaterializeLimit = 200;
constexpr double kMaxExactBits = 1 << 22;
constexpr double kMaxIntervalLog2 = 4.0e18;
constexpr unsigned long kMaxBruteForceTerms = 50000000;

double log2_of(const mpz_class& n) {
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, n.get_mpz_t());
  return std::log2(mantissa) + static_cast<double>(exponent);
}

double log_magnitude(const Interval& x) {
  const Interval a = x.abs();
  BigFloat l(a.upper().precision());
  mpfr_log(l.get(), a.upper().get(), MPFR_RNDU);
  return l.to_double();
}

std::optional<mpq_class> exact_term(const LambdaTerm& t, const mpz_class& n) {
  const auto coeff = t.coeff.as_rational();
  if (!coeff) return std::nullopt;
  const ScaleKey& k = t.key;
  if (k.p != 0 || k.e.get_den() != 1) return std::nullopt;
  const mpq_class dn = k.d * n;
  if (dn.get_den() != 1) return std::nullopt;
  if (k.d != 0 && n > kMaterializeLimit) return std::nullopt;
  std::map<unsigned long, mpq_class> logs;
  if (!k.s.is_zero()) {
    auto combo = k.s.as_log_combination();
    if (!combo) return std::nullopt;
    logs = *combo;
  }
  double bits = std::fabs(dn.get_d()) * log2_of(n) + std::fabs(k.e.get_d()) * log2_of(n);
  for (const auto& [prime, a] : logs) {
    const mpq_class an = a * n;
    if (an.get_den() != 1) return std::nullopt;
    bits += std::fabs(an.get_d()) * std::log2(static_cast<double>(prime));
  }
  if (bits > kMaxExactBits) return std::nullopt;

  mpq_class value = *coeff;
  auto multiply_power = [&value](const mpz_class& base, const mpz_class& exponent) {
    mpz_class p;
    mpz_pow_ui(p.get_mpz_t(), base.get_mpz_t(), mpz_class(abs(exponent)).get_ui());
    if (exponent >= 0) {
      value *= p;
    } else {
      value /= p;
    }
  };
  multiply_power(n, dn.get_num() + k.e.get_num());
  for (const auto& [prime, a] : logs) multiply_power(mpz_class(prime), mpq_class(a * n).get_num());
  value.canonicalize();
  return value;
}

Interval interval_term(const LambdaTerm& t, const mpz_class& n, long precision) {
  const ScaleKey& k = t.key;
  const Interval nn = Interval::exact(n, precision);
  const Interval log_n = log(nn);
  const double log2_n = log2_of(n);
  const double estimate = std::fabs(k.d.get_d()) * n.get_d() * log2_n +
                          std::fabs(k.s.eval(64).midpoint()) * n.get_d() * 1.4427 +
                          std::fabs(k.e.get_d()) * log2_n;
  if (!(estimate < kMaxIntervalLog2)) {
    throw Error(ErrorCode::OverflowGuard, "magnitude at N=" + n.get_str() + " exceeds the evaluation range");
  }
  Interval exponent = Interval::exact(mpq_class(k.d * n), precision) * log_n +
                      k.s.eval(precision) * nn + Interval::exact(k.e, precision) * log_n;
  Interval value = t.coeff.eval(precision) * exp(exponent);
  if (k.p != 0) value = value * pow(log_n, mpq_class(k.p));
  return value;
}

mpz_class integer_at(const LambdaExpr& x, const FiniteAssignment& a, const char* what) {
  const mpq_class v = oracle_exact(x, a);
  if (v.get_den() != 1) {
    throw Error(ErrorCode::Divisibility, std::string(what) + " is not an integer at N=" + a.n.get_str());
  }
  return v.get_num();
}

mpq_class poly_exact(const std::vector<LambdaExpr>& poly, const mpq_class& n, const FiniteAssignment& a) {
  mpq_class value(0);
  for (std::size_t k = poly.size(); k-- > 0;) value = value * n + oracle_exact(poly[k], a);
  return value;
}

Interval poly_interval(const std::vector<Interval>& poly, const Interval& n, long precision) {
  Interval value = Interval::exact(mpq_class(0), precision);
  for (std::size_t k = poly.size(); k-- > 0;) value = value * n + poly[k];
  return value;
}

mpz_class binomial(unsigned long n, unsigned long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

void check_range(const mpz_class& lower, const mpz_class& upper) {
  if (upper - lower > kMaxBruteForceTerms) {
    throw Error(ErrorCode::OverflowGuard, "brute-force range too long");
  }
}

}  // namespace

FiniteAssignment::FiniteAssignment(mpz_class n_value, std::vector<long> divisors, long bits)
    : n(std::move(n_value)), required_divisors(std::move(divisors)), precision(bits) {
  if (n < 2) throw Error(ErrorCode::Domain, "oracle substitution needs N >= 2");
  for (long d : required_divisors) {
    if (d <= 0 || !mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(d))) {
      throw Error(ErrorCode::Divisibility, "N=" + n.get_str() + " is not divisible by " + std::to_string(d));
    }
  }
}

std::vector<mpz_class> default_oracle_ns() { return {12, 120, 1200, 12000}; }

OracleValue oracle_eval(const LambdaExpr& x, const FiniteAssignment& a) {
  mpq_class exact_sum(0);
  std::vector<const LambdaTerm*> rest;
  for (const auto& t : x.terms()) {
    if (auto v = exact_term(t, a.n)) {
      exact_sum += *v;
    } else {
      rest.push_back(&t);
    }
  }
  if (rest.empty()) return exact_sum;
  Interval sum = Interval::exact(exact_sum, a.precision);
  for (const LambdaTerm* t : rest) sum = sum + interval_term(*t, a.n, a.precision);
  return sum;
}

Interval oracle_interval(const LambdaExpr& x, const FiniteAssignment& a) {
  OracleValue v = oracle_eval(x, a);
  if (auto* q = std::get_if<mpq_class>(&v)) return Interval::exact(*q, a.precision);
  return std::get<Interval>(v);
}

mpq_class oracle_exact(const LambdaExpr& x, const FiniteAssignment& a) {
  OracleValue v = oracle_eval(x, a);
  if (auto* q = std::get_if<mpq_class>(&v)) return *q;
  throw Error(ErrorCode::Domain, "value is not rational at N=" + a.n.get_str());
}

std::optional<int> oracle_sign(const LambdaExpr& x, const mpz_class& n, long max_precision) {
  if (!x.is_exact()) throw Error(ErrorCode::Domain, "log-domain sign needs an exact expression");
  if (x.terms().empty()) return 0;
  if (n < 2) throw Error(ErrorCode::Domain, "oracle substitution needs N >= 2");
  std::vector<int> signs;
  for (const auto& t : x.terms()) {
    switch (sign(t.coeff, max_precision)) {
      case Sign::Positive: signs.push_back(1); break;
      case Sign::Negative: signs.push_back(-1); break;
      default: return std::nullopt;
    }
  }
  const long magnitude_bits = static_cast<long>(log2_of(n) + std::log2(log2_of(n) + 1.0)) + 8;
  for (long precision = 64 + magnitude_bits; precision <= max_precision + magnitude_bits; precision *= 2) {
    const Interval nn = Interval::exact(n, precision);
    const Interval log_n = log(nn);
    const Interval log_log_n = log(log_n);
    std::vector<Interval> logs;
    for (const auto& t : x.terms()) {
      const ScaleKey& k = t.key;
      Interval l = log(t.coeff.eval(precision).abs()) +
                   Interval::exact(mpq_class(k.d * n), precision) * log_n + k.s.eval(precision) * nn +
                   Interval::exact(k.e, precision) * log_n +
                   Interval::exact(mpq_class(k.p), precision) * log_log_n;
      logs.push_back(std::move(l));
    }
    std::size_t top = 0;
    for (std::size_t i = 1; i < logs.size(); ++i) {
      if (mpfr_cmp(logs[i].upper().get(), logs[top].upper().get()) > 0) top = i;
    }
    const Interval shift = logs[top];
    Interval total = Interval::exact(mpq_class(0), precision);
    for (std::size_t i = 0; i < logs.size(); ++i) {
      const Interval term = exp(logs[i] - shift);
      total = signs[i] > 0 ? total + term : total - term;
    }
    if (auto s = total.sign()) return *s;
  }
  return std::nullopt;
}

mpq_class oracle_sum(const SumSpec& spec, const FiniteAssignment& a) {
  const mpz_class lower = integer_at(spec.lower, a, "lower limit");
  const mpz_class upper = integer_at(spec.upper, a, "upper limit");
  check_range(lower, upper);
  mpq_class total(0);
  for (const auto& s : spec.body) {
    std::visit(
        [&](const auto& t) {
          using T = std::decay_t<decltype(t)>;
          for (mpz_class n = lower; n <= upper; ++n) {
            const mpq_class nq(n);
            const int alt = mpz_odd_p(n.get_mpz_t()) ? 1 : -1;
            if constexpr (std::is_same_v<T, PolySummand>) {
              total += poly_exact(t.coeffs, nq, a);
            } else if constexpr (std::is_same_v<T, GeometricSummand>) {
              const mpq_class r = oracle_exact(t.ratio, a);
              mpq_class rn(1);
              if (n != 0) {
                mpz_class num;
                mpz_class den;
                mpz_pow_ui(num.get_mpz_t(), r.get_num_mpz_t(), n.get_ui());
                mpz_pow_ui(den.get_mpz_t(), r.get_den_mpz_t(), n.get_ui());
                rn = mpq_class(num, den);
                rn.canonicalize();
              }
              total += poly_exact(t.poly, nq, a) * rn;
            } else if constexpr (std::is_same_v<T, RisingBinomialSummand>) {
              if (n > 0) total += mpq_class(binomial(n.get_ui() + t.b - 1, t.b));
              else if (t.b == 0) total += 1;
            } else if constexpr (std::is_same_v<T, ReciprocalSummand>) {
              const auto num = t.numerator.as_rational();
              if (!num) throw Error(ErrorCode::Domain, "irrational numerator in exact brute force");
              const mpq_class d = t.a * nq + oracle_exact(t.shift, a);
              if (d == 0) throw Error(ErrorCode::DivisionByZero, "pole in summation range");
              total += *num / d;
            } else if constexpr (std::is_same_v<T, AlternatingPolySummand>) {
              total += alt * poly_exact(t.poly, nq, a);
            } else {
              const auto num = t.numerator.as_rational();
              if (!num) throw Error(ErrorCode::Domain, "irrational numerator in exact brute force");
              const mpq_class d = t.a * nq + oracle_exact(t.shift, a);
              if (d == 0) throw Error(ErrorCode::DivisionByZero, "pole in summation range");
              total += alt * *num / d;
            }
          }
        },
        s);
  }
  return total;
}

Interval oracle_sum_interval(const SumSpec& spec, const FiniteAssignment& a) {
  const long prec = a.precision;
  const mpz_class lower = integer_at(spec.lower, a, "lower limit");
  const mpz_class upper = integer_at(spec.upper, a, "upper limit");
  check_range(lower, upper);
  Interval total = Interval::exact(mpq_class(0), prec);
  auto intervals = [&](const std::vector<LambdaExpr>& poly) {
    std::vector<Interval> out;
    for (const auto& c : poly) out.push_back(oracle_interval(c, a));
    return out;
  };
  auto add_poly = [&](const std::vector<Interval>& poly, bool alternating) {
    for (mpz_class n = lower; n <= upper; ++n) {
      Interval v = poly_interval(poly, Interval::exact(n, prec), prec);
      if (alternating && mpz_even_p(n.get_mpz_t())) v = -v;
      total = total + v;
    }
  };
  for (const auto& s : spec.body) {
    std::visit(
        [&](const auto& t) {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, PolySummand>) {
            add_poly(intervals(t.coeffs), false);
          } else if constexpr (std::is_same_v<T, AlternatingPolySummand>) {
            add_poly(intervals(t.poly), true);
          } else if constexpr (std::is_same_v<T, GeometricSummand>) {
            const auto poly = intervals(t.poly);
            const Interval r = oracle_interval(t.ratio, a);
            Interval rn = pow(r, mpq_class(lower));
            for (mpz_class n = lower; n <= upper; ++n) {
              total = total + poly_interval(poly, Interval::exact(n, prec), prec) * rn;
              rn = rn * r;
            }
          } else if constexpr (std::is_same_v<T, RisingBinomialSummand>) {
            total = total + Interval::exact(oracle_sum(SumSpec{spec.index, spec.lower, spec.upper, {t}}, a), prec);
          } else {
            const Interval num = t.numerator.eval(prec);
            const Interval shift = oracle_interval(t.shift, a);
            const Interval slope = Interval::exact(t.a, prec);
            constexpr bool alternating = std::is_same_v<T, AlternatingReciprocalSummand>;
            for (mpz_class n = lower; n <= upper; ++n) {
              Interval v = num / (slope * Interval::exact(n, prec) + shift);
              if (alternating && mpz_even_p(n.get_mpz_t())) v = -v;
              total = total + v;
            }
          }
        },
        s);
  }
  return total;
}

IdentityRecord oracle_identity(const ExactSequence& lhs, const LambdaExpr& rhs, const std::vector<mpz_class>& ns) {
  IdentityRecord r;
  for (const auto& n : ns) {
    const FiniteAssignment a(n);
    r.ns.push_back(n);
    r.lhs.push_back(lhs(n));
    r.rhs.push_back(oracle_exact(rhs, a));
    if (r.lhs.back() != r.rhs.back() && !r.first_failure) {
      r.pass = false;
      r.first_failure = n;
    }
  }
  return r;
}

IdentityRecord oracle_identity(const SumSpec& lhs, const LambdaExpr& rhs, const std::vector<mpz_class>& ns) {
  return oracle_identity([&lhs](const mpz_class& n) { return oracle_sum(lhs, FiniteAssignment(n)); }, rhs, ns);
}

IdentityRecord oracle_identity(const LambdaExpr& lhs, const LambdaExpr& rhs, const std::vector<mpz_class>& ns) {
  return oracle_identity([&lhs](const mpz_class& n) { return oracle_exact(lhs, FiniteAssignment(n)); }, rhs, ns);
}

ConvergenceRecord fit_convergence(const std::vector<mpz_class>& ns, const std::vector<double>& log_errors) {
  if (ns.size() < 3 || ns.size() != log_errors.size()) {
    throw Error(ErrorCode::Domain, "convergence fit needs at least three points");
  }
  ConvergenceRecord r;
  r.ns = ns;
  r.log_errors = log_errors;
  for (double l : log_errors) r.errors.push_back(std::exp(l));
  const bool all_zero = std::all_of(log_errors.begin(), log_errors.end(), [](double l) { return std::isinf(l) && l < 0; });
  if (all_zero) {
    r.exact = true;
    r.rate = std::numeric_limits<double>::infinity();
    return r;
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (std::isinf(log_errors[i])) continue;
    xs.push_back(std::log(ns[i].get_d()));
    ys.push_back(log_errors[i]);
  }
  if (xs.size() < 2) {
    r.rate = std::numeric_limits<double>::infinity();
    return r;
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxx > 0 ? sxy / sxx : 0.0;
  r.rate = -slope;
  r.constant = std::exp(my - slope * mx);
  return r;
}

ConvergenceRecord oracle_convergence(const NumericSequence& x, const Scalar& target,
                                     const std::vector<mpz_class>& ns, long precision) {
  std::vector<double> logs;
  for (const auto& n : ns) {
    const Interval diff = x(n, precision) - target.eval(precision);
    if (!diff.is_finite()) throw Error(ErrorCode::OverflowGuard, "non-finite oracle value");
    logs.push_back(log_magnitude(diff));
  }
  return fit_convergence(ns, logs);
}

ConvergenceRecord oracle_convergence(const LambdaExpr& x, const Scalar& target,
                                     const std::vector<mpz_class>& ns, long precision) {
  const LambdaExpr diff = x.without_marker() - LambdaExpr(target);
  if (diff.is_zero()) {
    return fit_convergence(ns, std::vector<double>(ns.size(), -std::numeric_limits<double>::infinity()));
  }
  return oracle_convergence(
      [&x](const mpz_class& n, long prec) { return oracle_interval(x, FiniteAssignment(n, {}, prec)); }, target,
      ns, precision);
}

std::optional<double> predicted_rate(const ScaleKey& marker) {
  if (marker.d != 0 || !marker.s.is_zero()) return std::nullopt;
  return -marker.e.get_d();
}

}  // namespace infcalc

#include "infcalc/scalar.hpp"

#include <algorithm>
#include <sstream>

#include "infcalc/error.hpp"

namespace infcalc {

namespace {

int cmp_q(const mpq_class& a, const mpq_class& b) {
  const int c = cmp(a, b);
  return (c > 0) - (c < 0);
}

mpq_class floor_q(const mpq_class& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return mpq_class(f);
}

mpq_class pow_q(const mpq_class& base, long exponent) {
  mpq_class result(1);
  if (exponent == 0) return result;
  mpz_class num;
  mpz_class den;
  const unsigned long e = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  result = exponent > 0 ? mpq_class(num, den) : mpq_class(den, num);
  result.canonicalize();
  return result;
}

// Keeps a Root exponent in [0, 1); the integer part moves into `coeff`.
mpq_class fold_root(unsigned long prime, const mpq_class& exponent, mpq_class& coeff) {
  const mpq_class whole = floor_q(exponent);
  if (whole != 0) coeff *= pow_q(mpq_class(prime), whole.get_num().get_si());
  return exponent - whole;
}

struct MonomialLess {
  bool operator()(const ScalarMonomial& a, const ScalarMonomial& b) const {
    return compare(a, b) > 0;  // descending
  }
};

using TermMap = std::map<ScalarMonomial, mpq_class, MonomialLess>;

ScalarPoly to_poly(TermMap& map) {
  ScalarPoly poly;
  poly.reserve(map.size());
  for (auto& [monomial, coeff] : map) {
    if (coeff != 0) poly.push_back({monomial, coeff});
  }
  return poly;
}

void accumulate(TermMap& map, const ScalarMonomial& m, const mpq_class& c) {
  if (c == 0) return;
  auto [it, inserted] = map.try_emplace(m, c);
  if (!inserted) it->second += c;
}

// Product of two monomials; Root folding may contribute a rational factor.
std::pair<mpq_class, ScalarMonomial> multiply(const ScalarMonomial& a, const ScalarMonomial& b) {
  mpq_class coeff(1);
  ScalarMonomial out;
  out.exp_arg = a.exp_arg + b.exp_arg;
  auto ia = a.factors.begin();
  auto ib = b.factors.begin();
  auto push = [&](const Atom& atom, mpq_class exponent) {
    if (atom.kind == AtomKind::Root) exponent = fold_root(atom.prime, exponent, coeff);
    if (exponent != 0) out.factors.emplace_back(atom, exponent);
  };
  while (ia != a.factors.end() || ib != b.factors.end()) {
    if (ib == b.factors.end() || (ia != a.factors.end() && ia->first < ib->first)) {
      push(ia->first, ia->second);
      ++ia;
    } else if (ia == a.factors.end() || ib->first < ia->first) {
      push(ib->first, ib->second);
      ++ib;
    } else {
      push(ia->first, ia->second + ib->second);
      ++ia;
      ++ib;
    }
  }
  return {coeff, out};
}

std::pair<mpq_class, ScalarMonomial> power(const ScalarMonomial& m, const mpq_class& r) {
  mpq_class coeff(1);
  ScalarMonomial out;
  out.exp_arg = m.exp_arg * r;
  for (const auto& [atom, exponent] : m.factors) {
    mpq_class e = exponent * r;
    if (atom.kind == AtomKind::Root) e = fold_root(atom.prime, e, coeff);
    if (e != 0) out.factors.emplace_back(atom, e);
  }
  return {coeff, out};
}

ScalarPoly poly_add(const ScalarPoly& a, const ScalarPoly& b, const mpq_class& b_scale = 1) {
  TermMap map;
  for (const auto& t : a) accumulate(map, t.monomial, t.coeff);
  for (const auto& t : b) accumulate(map, t.monomial, t.coeff * b_scale);
  return to_poly(map);
}

ScalarPoly poly_mul(const ScalarPoly& a, const ScalarPoly& b) {
  TermMap map;
  for (const auto& x : a) {
    for (const auto& y : b) {
      auto [c, m] = multiply(x.monomial, y.monomial);
      accumulate(map, m, c * x.coeff * y.coeff);
    }
  }
  return to_poly(map);
}

ScalarPoly poly_scale(const ScalarPoly& a, const ScalarTerm& t) { return poly_mul(a, ScalarPoly{t}); }

ScalarPoly poly_one() { return ScalarPoly{{ScalarMonomial{}, mpq_class(1)}}; }

bool is_unit(const ScalarPoly& p) {
  return p.empty() || (p.size() == 1 && p.front().coeff == 1 && p.front().monomial.is_one());
}

ScalarTerm invert(const ScalarTerm& t) {
  auto [c, m] = power(t.monomial, mpq_class(-1));
  return {m, c / t.coeff};
}

// Bounded long division; succeeds only when num = q * den exactly.
std::optional<ScalarPoly> try_divide(const ScalarPoly& num, const ScalarPoly& den) {
  ScalarPoly rem = num;
  TermMap quotient;
  const std::size_t limit = 4 * (num.size() + 1) * (den.size() + 1);
  const ScalarTerm lead_inv = invert(den.front());
  for (std::size_t step = 0; step < limit; ++step) {
    if (rem.empty()) return to_poly(quotient);
    if (rem.size() > 4 * (num.size() + den.size()) + 16) return std::nullopt;
    auto [c, m] = multiply(rem.front().monomial, lead_inv.monomial);
    ScalarTerm t{m, c * rem.front().coeff * lead_inv.coeff};
    accumulate(quotient, t.monomial, t.coeff);
    rem = poly_add(rem, poly_scale(den, t), mpq_class(-1));
  }
  return std::nullopt;
}

std::string exponent_suffix(const mpq_class& e) {
  if (e == 1) return "";
  return "^(" + rational_to_string(e) + ")";
}

std::string monomial_to_string(const ScalarMonomial& m) {
  std::vector<std::string> parts;
  for (const auto& [atom, e] : m.factors) {
    switch (atom.kind) {
      case AtomKind::Root:
        parts.push_back(std::to_string(atom.prime) + "^(" + rational_to_string(e) + ")");
        break;
      case AtomKind::Pi:
        parts.push_back("pi" + exponent_suffix(e));
        break;
      case AtomKind::EulerGamma:
        parts.push_back("gamma" + exponent_suffix(e));
        break;
      case AtomKind::Log:
        parts.push_back("ln(" + std::to_string(atom.prime) + ")" + exponent_suffix(e));
        break;
    }
  }
  if (m.exp_arg != 0) parts.push_back("exp(" + rational_to_string(m.exp_arg) + ")");
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += "*";
    out += parts[i];
  }
  return out;
}

// Writes "c*M" in the p*M/q layout; `leading` controls the sign style.
void append_term(std::string& out, const ScalarTerm& t, bool leading) {
  mpq_class c = t.coeff;
  const bool negative = c < 0;
  if (negative) c = -c;
  if (leading) {
    if (negative) out += "-";
  } else {
    out += negative ? " - " : " + ";
  }
  const std::string m = monomial_to_string(t.monomial);
  if (m.empty()) {
    out += rational_to_string(c);
    return;
  }
  if (c.get_num() != 1) out += c.get_num().get_str() + "*";
  out += m;
  if (c.get_den() != 1) out += "/" + c.get_den().get_str();
}

std::string poly_to_string(const ScalarPoly& p) {
  if (p.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) append_term(out, p[i], i == 0);
  return out;
}

Interval eval_atom(const Atom& atom, long precision) {
  switch (atom.kind) {
    case AtomKind::Root:
      return Interval::exact(mpq_class(atom.prime), precision);
    case AtomKind::Pi:
      return Interval::pi(precision);
    case AtomKind::EulerGamma:
      return Interval::euler_gamma(precision);
    case AtomKind::Log:
      return log(Interval::exact(mpq_class(atom.prime), precision));
  }
  return Interval(precision);
}

Interval eval_poly(const ScalarPoly& p, long precision) {
  Interval sum = Interval::exact(mpq_class(0), precision);
  for (const auto& t : p) {
    Interval term = Interval::exact(t.coeff, precision);
    if (t.monomial.exp_arg != 0) term = term * exp(Interval::exact(t.monomial.exp_arg, precision));
    for (const auto& [atom, e] : t.monomial.factors) {
      term = term * pow(eval_atom(atom, precision), e);
    }
    sum = sum + term;
  }
  return sum;
}

}  // namespace

bool operator==(const ScalarMonomial& a, const ScalarMonomial& b) {
  return a.exp_arg == b.exp_arg && a.factors == b.factors;
}

int compare(const ScalarMonomial& a, const ScalarMonomial& b) {
  if (int c = cmp_q(a.exp_arg, b.exp_arg); c != 0) return c;
  auto ia = a.factors.begin();
  auto ib = b.factors.begin();
  while (ia != a.factors.end() || ib != b.factors.end()) {
    if (ib == b.factors.end() || (ia != a.factors.end() && ia->first < ib->first)) {
      return sgn(ia->second);
    }
    if (ia == a.factors.end() || ib->first < ia->first) {
      return -sgn(ib->second);
    }
    if (int c = cmp_q(ia->second, ib->second); c != 0) return c;
    ++ia;
    ++ib;
  }
  return 0;
}

std::string rational_to_string(const mpq_class& q) { return q.get_str(); }

std::vector<std::pair<unsigned long, long>> factor_integer(const mpz_class& n) {
  if (n == 0) throw Error(ErrorCode::Domain, "cannot factor zero");
  mpz_class rest = abs(n);
  std::vector<std::pair<unsigned long, long>> out;
  auto strip = [&](unsigned long p) {
    long count = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++count;
    }
    if (count) out.emplace_back(p, count);
  };
  strip(2);
  constexpr unsigned long kTrialLimit = 1000000;
  for (unsigned long p = 3; p <= kTrialLimit && rest > 1; p += 2) {
    if (mpz_class(p) * p > rest) break;
    strip(p);
  }
  if (rest > 1) {
    if (!rest.fits_ulong_p() || mpz_probab_prime_p(rest.get_mpz_t(), 30) == 0) {
      throw Error(ErrorCode::UnrepresentableConstant, "integer too large to factor: " + n.get_str());
    }
    out.emplace_back(rest.get_ui(), 1);
  }
  return out;
}

Scalar::Scalar() = default;

Scalar::Scalar(long value) : Scalar(mpq_class(value)) {}

Scalar::Scalar(const mpq_class& value) {
  if (value != 0) num_.push_back({ScalarMonomial{}, value});
}

Scalar::Scalar(ScalarPoly num, ScalarPoly den) : num_(std::move(num)), den_(std::move(den)) {
  normalize();
}

Scalar Scalar::pi() { return Scalar({{ScalarMonomial{0, {{Atom{AtomKind::Pi, 0}, 1}}}, 1}}, {}); }

Scalar Scalar::euler_gamma() {
  return Scalar({{ScalarMonomial{0, {{Atom{AtomKind::EulerGamma, 0}, 1}}}, 1}}, {});
}

Scalar Scalar::exp_of(const mpq_class& q) {
  if (q == 0) return Scalar(1);
  return Scalar({{ScalarMonomial{q, {}}, 1}}, {});
}

Scalar Scalar::ln_of(const mpq_class& r) {
  if (r <= 0) throw Error(ErrorCode::Domain, "logarithm of a non-positive rational");
  TermMap map;
  auto add_factors = [&](const mpz_class& z, int sign) {
    if (z == 1) return;
    for (auto [p, k] : factor_integer(z)) {
      accumulate(map, ScalarMonomial{0, {{Atom{AtomKind::Log, p}, 1}}}, mpq_class(sign * k));
    }
  };
  add_factors(r.get_num(), 1);
  add_factors(r.get_den(), -1);
  return Scalar(to_poly(map), {});
}

bool Scalar::is_rational() const {
  return den_.empty() && (num_.empty() || (num_.size() == 1 && num_.front().monomial.is_one()));
}

std::optional<mpq_class> Scalar::as_rational() const {
  if (!is_rational()) return std::nullopt;
  return num_.empty() ? mpq_class(0) : num_.front().coeff;
}

bool Scalar::is_monomial() const { return den_.empty() && num_.size() == 1; }

void Scalar::normalize() {
  if (num_.empty()) {
    den_.clear();
    return;
  }
  if (is_unit(den_)) {
    den_.clear();
    return;
  }
  if (den_.size() == 1) {
    num_ = poly_scale(num_, invert(den_.front()));
    den_.clear();
    return;
  }
  if (auto q = try_divide(num_, den_)) {
    num_ = std::move(*q);
    den_.clear();
    return;
  }
  // Scale so the denominator's leading term is exactly 1. Root folding can
  // reorder terms, so repeat a few times until the form is stable.
  for (int round = 0; round < 4; ++round) {
    const ScalarTerm& lead = den_.front();
    if (lead.coeff == 1 && lead.monomial.is_one()) break;
    const ScalarTerm inv = invert(lead);
    num_ = poly_scale(num_, inv);
    den_ = poly_scale(den_, inv);
  }
}

Scalar normalize(const Scalar& s) {
  Scalar copy = s;
  return copy * Scalar(1);
}

Scalar Scalar::operator-() const {
  ScalarPoly n = num_;
  for (auto& t : n) t.coeff = -t.coeff;
  Scalar out;
  out.num_ = std::move(n);
  out.den_ = den_;
  return out;
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) return Scalar(poly_add(a.num_, b.num_), a.den_);
  const ScalarPoly ad = a.den_.empty() ? poly_one() : a.den_;
  const ScalarPoly bd = b.den_.empty() ? poly_one() : b.den_;
  return Scalar(poly_add(poly_mul(a.num_, bd), poly_mul(b.num_, ad)), poly_mul(ad, bd));
}

Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.is_zero() || b.is_zero()) return Scalar();
  const ScalarPoly ad = a.den_.empty() ? poly_one() : a.den_;
  const ScalarPoly bd = b.den_.empty() ? poly_one() : b.den_;
  return Scalar(poly_mul(a.num_, b.num_), poly_mul(ad, bd));
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by zero");
  if (a.is_zero()) return Scalar();
  const ScalarPoly ad = a.den_.empty() ? poly_one() : a.den_;
  const ScalarPoly bd = b.den_.empty() ? poly_one() : b.den_;
  return Scalar(poly_mul(a.num_, bd), poly_mul(ad, b.num_));
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.identical(b)) return true;
  return (a - b).is_zero();
}

Scalar Scalar::pow(const mpq_class& r) const {
  if (r == 0) return Scalar(1);
  if (r.get_den() == 1) {
    if (is_zero()) {
      if (r < 0) throw Error(ErrorCode::DivisionByZero, "zero raised to a negative power");
      return Scalar();
    }
    if (!r.get_num().fits_slong_p()) {
      throw Error(ErrorCode::OverflowGuard, "integer exponent too large");
    }
    long n = r.get_num().get_si();
    const bool invert_result = n < 0;
    if (invert_result) n = -n;
    if (n > 4096) throw Error(ErrorCode::OverflowGuard, "integer exponent too large");
    Scalar result(1);
    Scalar base = *this;
    while (n > 0) {
      if (n & 1) result *= base;
      n >>= 1;
      if (n > 0) base *= base;
    }
    return invert_result ? Scalar(1) / result : result;
  }
  if (is_zero()) {
    if (r < 0) throw Error(ErrorCode::DivisionByZero, "zero raised to a negative power");
    return Scalar();
  }
  if (!is_monomial()) {
    throw Error(ErrorCode::UnrepresentableConstant,
                "fractional power of a compound constant: (" + to_string() + ")^(" +
                    rational_to_string(r) + ")");
  }
  const ScalarTerm& t = num_.front();
  if (t.coeff < 0) throw Error(ErrorCode::Domain, "fractional power of a negative constant");
  auto [c, m] = power(t.monomial, r);
  // coeff^r through its prime factorization
  mpq_class coeff = c;
  ScalarMonomial roots;
  auto add_prime_powers = [&](const mpz_class& z, int sign) {
    if (z == 1) return;
    for (auto [p, k] : factor_integer(z)) {
      const mpq_class e = mpq_class(sign * k) * r;
      const mpq_class frac = fold_root(p, e, coeff);
      if (frac != 0) roots.factors.emplace_back(Atom{AtomKind::Root, p}, frac);
    }
  };
  add_prime_powers(t.coeff.get_num(), 1);
  add_prime_powers(t.coeff.get_den(), -1);
  std::sort(roots.factors.begin(), roots.factors.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  auto [c2, m2] = multiply(m, roots);
  return Scalar({{m2, coeff * c2}}, {});
}

Interval Scalar::eval(long precision) const {
  const long working = precision + 16;
  Interval value = eval_poly(num_, working);
  if (!den_.empty()) value = value / eval_poly(den_, working);
  return value;
}

std::string Scalar::to_string() const {
  if (den_.empty()) return poly_to_string(num_);
  return "(" + poly_to_string(num_) + ")/(" + poly_to_string(den_) + ")";
}

std::optional<std::map<unsigned long, mpq_class>> Scalar::as_log_combination() const {
  if (!den_.empty()) return std::nullopt;
  std::map<unsigned long, mpq_class> out;
  for (const auto& t : num_) {
    const auto& m = t.monomial;
    if (m.exp_arg != 0 || m.factors.size() != 1) return std::nullopt;
    const auto& [atom, e] = m.factors.front();
    if (atom.kind != AtomKind::Log || e != 1) return std::nullopt;
    out[atom.prime] = t.coeff;
  }
  return out;
}

namespace {
thread_local long g_sign_cap = kDefaultPrecision;
}  // namespace

long sign_precision_cap() { return g_sign_cap; }

SignPrecisionScope::SignPrecisionScope(long bits) : saved_(g_sign_cap) {
  if (bits < 64) throw Error(ErrorCode::Domain, "precision must be at least 64 bits");
  g_sign_cap = bits;
}

SignPrecisionScope::~SignPrecisionScope() { g_sign_cap = saved_; }

Sign sign(const Scalar& s, long max_precision) {
  if (max_precision <= 0) max_precision = g_sign_cap;
  if (s.is_zero()) return Sign::Zero;
  if (auto q = s.as_rational()) return *q > 0 ? Sign::Positive : Sign::Negative;
  for (long precision = 64; precision <= max_precision; precision *= 2) {
    if (auto sg = s.eval(precision).sign()) return *sg > 0 ? Sign::Positive : Sign::Negative;
  }
  return Sign::Undecided;
}

Scalar exp(const Scalar& s) {
  if (s.is_zero()) return Scalar(1);
  if (!s.denominator().empty()) {
    throw Error(ErrorCode::UnrepresentableConstant, "exp of " + s.to_string());
  }
  mpq_class q(0);
  Scalar result(1);
  for (const auto& t : s.numerator()) {
    const auto& m = t.monomial;
    if (m.is_one()) {
      q += t.coeff;
      continue;
    }
    if (m.exp_arg == 0 && m.factors.size() == 1 && m.factors.front().first.kind == AtomKind::Log &&
        m.factors.front().second == 1) {
      result *= Scalar(mpq_class(m.factors.front().first.prime)).pow(t.coeff);
      continue;
    }
    throw Error(ErrorCode::UnrepresentableConstant, "exp of " + s.to_string());
  }
  return result * Scalar::exp_of(q);
}

Scalar ln(const Scalar& s) {
  if (!s.is_monomial()) {
    if (s.is_zero()) throw Error(ErrorCode::Domain, "logarithm of zero");
    throw Error(ErrorCode::UnrepresentableConstant, "ln of " + s.to_string());
  }
  const ScalarTerm& t = s.numerator().front();
  if (t.coeff < 0) throw Error(ErrorCode::Domain, "logarithm of a negative constant");
  Scalar result = Scalar::ln_of(t.coeff) + Scalar(t.monomial.exp_arg);
  for (const auto& [atom, e] : t.monomial.factors) {
    if (atom.kind != AtomKind::Root) {
      throw Error(ErrorCode::UnrepresentableConstant, "ln of " + s.to_string());
    }
    result += Scalar(e) * Scalar::ln_of(mpq_class(atom.prime));
  }
  return result;
}

}  // namespace infcalc

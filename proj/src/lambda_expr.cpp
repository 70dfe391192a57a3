#include "infcalc/lambda_expr.hpp"

#include <algorithm>

#include "infcalc/error.hpp"

namespace infcalc {

namespace {

ScaleKey lambda_log_lambda_key() { return {0, Scalar(), 1, 1}; }
ScaleKey lambda_key() { return {0, Scalar(), 1, 0}; }
ScaleKey log_lambda_key() { return {0, Scalar(), 0, 1}; }

bool same_key(const ScaleKey& a, const ScaleKey& b) { return compare(a, b) == 0; }

// Σ c_i u^i for i = 0..K with the truncation error recorded at u^{K+1}.
LambdaExpr power_series(const LambdaExpr& u, const std::vector<Scalar>& coeffs) {
  const int order = static_cast<int>(coeffs.size()) - 1;
  if (u.is_zero()) return LambdaExpr(coeffs.front());
  const ScaleKey lead = *u.magnitude();
  const LambdaExpr v = u.with_marker(lead.scaled(order + 1));
  LambdaExpr result(coeffs.front());
  LambdaExpr power(1);
  for (int i = 1; i <= order; ++i) {
    power = power * v;
    if (!coeffs[i].is_zero()) result += LambdaExpr(coeffs[i]) * power;
  }
  return result.with_marker(lead.scaled(order + 1));
}

Scalar factorial(int n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Scalar(mpq_class(f));
}

}  // namespace

ScaleKey ScaleKey::exponential(const mpq_class& base) {
  if (base <= 0) throw Error(ErrorCode::Domain, "exponential scale needs a positive base");
  return {0, Scalar::ln_of(base), 0, 0};
}

ScaleKey operator+(const ScaleKey& a, const ScaleKey& b) {
  return {a.d + b.d, a.s + b.s, a.e + b.e, a.p + b.p};
}

ScaleKey operator-(const ScaleKey& a, const ScaleKey& b) {
  return {a.d - b.d, a.s - b.s, a.e - b.e, a.p - b.p};
}

ScaleKey ScaleKey::scaled(long k) const { return {d * k, s * Scalar(k), e * k, p * k}; }

int compare(const ScaleKey& a, const ScaleKey& b) {
  if (int c = cmp(a.d, b.d); c != 0) return c > 0 ? 1 : -1;
  if (!a.s.identical(b.s)) {
    switch (sign(a.s - b.s)) {
      case Sign::Positive: return 1;
      case Sign::Negative: return -1;
      case Sign::Zero: break;
      case Sign::Undecided:
        throw Error(ErrorCode::Undecided, "cannot order exponential scales " + a.s.to_string() +
                                              " and " + b.s.to_string());
    }
  }
  if (int c = cmp(a.e, b.e); c != 0) return c > 0 ? 1 : -1;
  if (a.p != b.p) return a.p > b.p ? 1 : -1;
  return 0;
}

std::string to_string(OrderDecision d) {
  switch (d) {
    case OrderDecision::Less: return "Less";
    case OrderDecision::Equal: return "Equal";
    case OrderDecision::Greater: return "Greater";
    case OrderDecision::Undecided: return "Undecided";
    case OrderDecision::ParityDependent: return "ParityDependent";
  }
  return "Undecided";
}

LambdaExpr::LambdaExpr(long value) : LambdaExpr(Scalar(value)) {}

LambdaExpr::LambdaExpr(const mpq_class& value) : LambdaExpr(Scalar(value)) {}

LambdaExpr::LambdaExpr(const Scalar& value) {
  if (!value.is_zero()) terms_.push_back({value, ScaleKey::constant()});
}

LambdaExpr LambdaExpr::lambda() { return monomial(Scalar(1), lambda_key()); }

LambdaExpr LambdaExpr::monomial(const Scalar& coeff, const ScaleKey& key) {
  LambdaExpr x;
  if (!coeff.is_zero()) x.terms_.push_back({coeff, key});
  return x;
}

LambdaExpr LambdaExpr::big_o(const ScaleKey& scale) {
  LambdaExpr x;
  x.marker_ = AsymptoticMarker{scale, std::nullopt};
  return x;
}

LambdaExpr LambdaExpr::from_terms(std::vector<LambdaTerm> terms,
                                  std::optional<AsymptoticMarker> marker) {
  LambdaExpr x;
  x.terms_ = std::move(terms);
  x.marker_ = std::move(marker);
  x.normalize();
  return x;
}

void LambdaExpr::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const LambdaTerm& a, const LambdaTerm& b) { return compare(a.key, b.key) > 0; });
  std::vector<LambdaTerm> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!merged.empty() && same_key(merged.back().key, t.key)) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const LambdaTerm& t) { return t.coeff.is_zero(); });
  if (marker_) {
    std::erase_if(merged,
                  [this](const LambdaTerm& t) { return compare(t.key, marker_->scale) <= 0; });
  }
  terms_ = std::move(merged);
}

LambdaExpr normalize(const LambdaExpr& x) {
  return LambdaExpr::from_terms(x.terms(), x.marker());
}

bool LambdaExpr::is_constant() const {
  return !marker_ && (terms_.empty() || (terms_.size() == 1 && terms_.front().key.is_constant()));
}

std::optional<Scalar> LambdaExpr::as_constant() const {
  if (!is_constant()) return std::nullopt;
  return terms_.empty() ? Scalar() : terms_.front().coeff;
}

std::optional<std::vector<mpq_class>> LambdaExpr::as_polynomial() const {
  if (marker_) return std::nullopt;
  std::vector<mpq_class> coeffs;
  for (const auto& t : terms_) {
    const ScaleKey& k = t.key;
    if (k.d != 0 || !k.s.is_zero() || k.p != 0 || k.e < 0 || k.e.get_den() != 1) {
      return std::nullopt;
    }
    auto c = t.coeff.as_rational();
    if (!c) return std::nullopt;
    const unsigned long degree = k.e.get_num().get_ui();
    if (degree > 4096) return std::nullopt;
    if (coeffs.size() <= degree) coeffs.resize(degree + 1);
    coeffs[degree] = *c;
  }
  if (coeffs.empty()) coeffs.emplace_back(0);
  return coeffs;
}

LambdaExpr LambdaExpr::with_marker(const ScaleKey& scale) const {
  LambdaExpr x = *this;
  if (!x.marker_ || compare(scale, x.marker_->scale) > 0) {
    x.marker_ = AsymptoticMarker{scale, std::nullopt};
  }
  x.normalize();
  return x;
}

LambdaExpr LambdaExpr::without_marker() const {
  LambdaExpr x = *this;
  x.marker_.reset();
  return x;
}

std::optional<ScaleKey> LambdaExpr::magnitude() const {
  if (!terms_.empty()) return terms_.front().key;
  if (marker_) return marker_->scale;
  return std::nullopt;
}

LambdaExpr LambdaExpr::operator-() const {
  LambdaExpr x = *this;
  for (auto& t : x.terms_) t.coeff = -t.coeff;
  return x;
}

LambdaExpr operator+(const LambdaExpr& a, const LambdaExpr& b) {
  std::vector<LambdaTerm> terms = a.terms_;
  terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
  std::optional<AsymptoticMarker> marker = a.marker_;
  if (b.marker_ && (!marker || compare(b.marker_->scale, marker->scale) > 0)) marker = b.marker_;
  return LambdaExpr::from_terms(std::move(terms), std::move(marker));
}

LambdaExpr operator-(const LambdaExpr& a, const LambdaExpr& b) { return a + (-b); }

LambdaExpr operator*(const LambdaExpr& a, const LambdaExpr& b) {
  if (a.is_zero() || b.is_zero()) return LambdaExpr();
  std::optional<ScaleKey> marker;
  auto widen = [&marker](const ScaleKey& k) {
    if (!marker || compare(k, *marker) > 0) marker = k;
  };
  if (b.marker_) widen(*a.magnitude() + b.marker_->scale);
  if (a.marker_) widen(*b.magnitude() + a.marker_->scale);
  std::vector<LambdaTerm> terms;
  terms.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) {
      ScaleKey key = x.key + y.key;
      if (marker && compare(key, *marker) <= 0) continue;
      terms.push_back({x.coeff * y.coeff, std::move(key)});
    }
  }
  std::optional<AsymptoticMarker> m;
  if (marker) m = AsymptoticMarker{*marker, std::nullopt};
  return LambdaExpr::from_terms(std::move(terms), std::move(m));
}

bool operator==(const LambdaExpr& a, const LambdaExpr& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  if (a.marker_.has_value() != b.marker_.has_value()) return false;
  if (a.marker_ && !same_key(a.marker_->scale, b.marker_->scale)) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (!same_key(a.terms_[i].key, b.terms_[i].key)) return false;
    if (!(a.terms_[i].coeff == b.terms_[i].coeff)) return false;
  }
  return true;
}

LambdaExpr inverse(const LambdaExpr& b, int trunc_order) {
  if (b.terms().empty()) throw Error(ErrorCode::DivisionByZero, "division by zero");
  const LambdaTerm& lead = b.terms().front();
  const LambdaExpr lead_inv =
      LambdaExpr::monomial(Scalar(1) / lead.coeff, ScaleKey::constant() - lead.key);
  if (b.terms().size() == 1 && b.is_exact()) return lead_inv;
  const LambdaExpr u = b * lead_inv - LambdaExpr(1);
  if (u.is_zero()) return lead_inv;
  std::vector<Scalar> coeffs;
  for (int i = 0; i <= trunc_order; ++i) coeffs.emplace_back(i % 2 == 0 ? 1 : -1);
  return lead_inv * power_series(u, coeffs);
}

LambdaExpr divide(const LambdaExpr& a, const LambdaExpr& b, int trunc_order) {
  if (b.terms().empty()) throw Error(ErrorCode::DivisionByZero, "division by zero");
  if (a.is_zero()) return LambdaExpr();
  if (b.is_exact() && b.terms().size() == 1) return a * inverse(b, trunc_order);
  if (a.is_exact() && b.is_exact()) {
    // exact long division, bounded
    LambdaExpr rem = a;
    LambdaExpr quotient;
    const LambdaTerm& lead = b.terms().front();
    const std::size_t limit = 4 * (a.terms().size() + b.terms().size()) + 8;
    for (std::size_t step = 0; step < limit && !rem.is_zero(); ++step) {
      const LambdaTerm& r = rem.terms().front();
      const LambdaExpr t = LambdaExpr::monomial(r.coeff / lead.coeff, r.key - lead.key);
      quotient += t;
      rem -= t * b;
    }
    if (rem.is_zero()) return quotient;
  }
  return a * inverse(b, trunc_order);
}

LambdaExpr exp(const LambdaExpr& a, int trunc_order) {
  if (a.is_zero()) return LambdaExpr(1);
  if (a.marker() && compare(a.marker()->scale, ScaleKey::constant()) >= 0) {
    throw Error(ErrorCode::UnrepresentableScale, "exp of an expression with a non-infinitesimal error bound");
  }
  ScaleKey key;
  Scalar constant;
  std::vector<LambdaTerm> small;
  for (const auto& t : a.terms()) {
    const int c = compare(t.key, ScaleKey::constant());
    if (c < 0) {
      small.push_back(t);
    } else if (c == 0) {
      constant = t.coeff;
    } else if (same_key(t.key, lambda_log_lambda_key())) {
      auto r = t.coeff.as_rational();
      if (!r) throw Error(ErrorCode::UnrepresentableScale, "exp with an irrational λ·ln λ coefficient");
      key.d = *r;
    } else if (same_key(t.key, lambda_key())) {
      key.s = t.coeff;
    } else if (same_key(t.key, log_lambda_key())) {
      auto r = t.coeff.as_rational();
      if (!r) throw Error(ErrorCode::UnrepresentableScale, "exp with an irrational ln λ coefficient");
      key.e = *r;
    } else {
      throw Error(ErrorCode::UnrepresentableScale, "exp argument grows faster than the scale lattice");
    }
  }
  const LambdaExpr head = LambdaExpr::monomial(exp(constant), key);
  const LambdaExpr u = LambdaExpr::from_terms(std::move(small), a.marker());
  if (u.is_zero()) return head;
  std::vector<Scalar> coeffs;
  for (int i = 0; i <= trunc_order; ++i) coeffs.push_back(Scalar(1) / factorial(i));
  return head * power_series(u, coeffs);
}

LambdaExpr ln(const LambdaExpr& a, int trunc_order) {
  if (a.terms().empty()) throw Error(ErrorCode::Domain, "logarithm of zero");
  const LambdaTerm& lead = a.terms().front();
  if (lead.key.p != 0) {
    throw Error(ErrorCode::UnrepresentableScale, "logarithm of a ln λ power is outside the scale lattice");
  }
  switch (sign(lead.coeff)) {
    case Sign::Positive: break;
    case Sign::Undecided:
      throw Error(ErrorCode::Undecided, "cannot decide the sign of " + lead.coeff.to_string());
    default:
      throw Error(ErrorCode::Domain, "logarithm of a non-positive expression");
  }
  LambdaExpr result(ln(lead.coeff));
  result += LambdaExpr::monomial(Scalar(lead.key.d), lambda_log_lambda_key());
  result += LambdaExpr::monomial(lead.key.s, lambda_key());
  result += LambdaExpr::monomial(Scalar(lead.key.e), log_lambda_key());
  const LambdaExpr lead_inv =
      LambdaExpr::monomial(Scalar(1) / lead.coeff, ScaleKey::constant() - lead.key);
  const LambdaExpr u = a * lead_inv - LambdaExpr(1);
  if (u.is_zero()) return result;
  std::vector<Scalar> coeffs{Scalar()};
  for (int i = 1; i <= trunc_order; ++i) {
    coeffs.push_back(Scalar(mpq_class(i % 2 == 1 ? 1 : -1, i)));
  }
  return result + power_series(u, coeffs);
}

LambdaExpr pow(const LambdaExpr& base, const LambdaExpr& exponent, int trunc_order) {
  if (exponent.is_zero()) return LambdaExpr(1);
  const auto base_constant = base.as_constant();
  const auto exp_constant = exponent.as_constant();
  if (exp_constant) {
    if (auto r = exp_constant->as_rational()) {
      if (base_constant) return LambdaExpr(base_constant->pow(*r));
      if (r->get_den() == 1 && abs(*r) <= 64) {
        long n = r->get_num().get_si();
        const bool negative = n < 0;
        if (negative) n = -n;
        LambdaExpr result(1);
        LambdaExpr b = base;
        while (n > 0) {
          if (n & 1) result = result * b;
          n >>= 1;
          if (n > 0) b = b * b;
        }
        return negative ? inverse(result, trunc_order) : result;
      }
    }
  }
  if (base.terms().empty()) {
    if (base.is_zero()) {
      if (compare(exponent, LambdaExpr(0)) == OrderDecision::Greater) return LambdaExpr(0);
      throw Error(ErrorCode::Domain, "zero raised to a non-positive power");
    }
    throw Error(ErrorCode::UnrepresentableScale, "power of a pure error bound");
  }
  if (base_constant && *base_constant == Scalar(-1)) {
    const ParityResult parity = neg_one_power(exponent);
    if (auto* value = std::get_if<LambdaExpr>(&parity)) return *value;
    throw Error(ErrorCode::ParityDependent, "(-1)^U depends on the parity of U");
  }
  if (sign(base.terms().front().coeff) == Sign::Negative) {
    const ParityResult parity = neg_one_power(exponent);
    if (auto* value = std::get_if<LambdaExpr>(&parity)) {
      return *value * exp(exponent * ln(-base, trunc_order), trunc_order);
    }
    throw Error(ErrorCode::ParityDependent, "negative base with a parity-dependent exponent");
  }
  return exp(exponent * ln(base, trunc_order), trunc_order);
}

OrderDecision compare(const LambdaExpr& a, const LambdaExpr& b) {
  try {
    const LambdaExpr diff = a - b;
    if (diff.terms().empty()) return diff.marker() ? OrderDecision::Undecided : OrderDecision::Equal;
    switch (sign(diff.terms().front().coeff)) {
      case Sign::Positive: return OrderDecision::Greater;
      case Sign::Negative: return OrderDecision::Less;
      case Sign::Zero: return OrderDecision::Equal;
      case Sign::Undecided: return OrderDecision::Undecided;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Undecided) return OrderDecision::Undecided;
    throw;
  }
  return OrderDecision::Undecided;
}

StandardPart standard_part(const LambdaExpr& a) {
  for (const auto& t : a.terms()) {
    if (compare(t.key, ScaleKey::constant()) > 0) {
      throw Error(ErrorCode::Unbounded, "standard part of an unbounded expression");
    }
  }
  if (a.marker() && compare(a.marker()->scale, ScaleKey::constant()) >= 0) {
    throw Error(ErrorCode::Unbounded, "error bound is not infinitesimal");
  }
  for (const auto& t : a.terms()) {
    if (t.key.is_constant()) return {t.coeff};
  }
  return {Scalar()};
}

ParityResult neg_one_power(const LambdaExpr& exponent) {
  const auto poly = exponent.as_polynomial();
  if (!poly) return ParityDependent{exponent};
  mpz_class lcm_den(1);
  for (const auto& c : *poly) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.get_den_mpz_t());
  // An integer-valued polynomial of degree n is periodic mod 2 with a period
  // below 4(n+1), so that many multiples of the lcm cover every residue.
  const std::size_t samples = 4 * (poly->size() + 1);
  std::optional<bool> even;
  for (std::size_t t = 1; t <= samples; ++t) {
    const mpq_class n = mpq_class(lcm_den * static_cast<unsigned long>(t));
    mpq_class value(0);
    for (std::size_t k = poly->size(); k-- > 0;) value = value * n + (*poly)[k];
    if (value.get_den() != 1) return ParityDependent{exponent};
    const bool is_even = mpz_even_p(value.get_num_mpz_t()) != 0;
    if (even && *even != is_even) return ParityDependent{exponent};
    even = is_even;
  }
  return LambdaExpr(*even ? 1 : -1);
}

}  // namespace infcalc

#include "infcalc/summation.hpp"


#include "infcalc/error.hpp"

namespace infcalc {

namespace {

constexpr unsigned long kMaxExactTerms = 1000000;

std::optional<mpz_class> as_integer(const LambdaExpr& x) {
  auto c = x.as_constant();
  if (!c) return std::nullopt;
  auto q = c->as_rational();
  if (!q || q->get_den() != 1) return std::nullopt;
  return q->get_num();
}

// Positive and unbounded: leading key above the constant scale.
bool is_infinite(const LambdaExpr& x) {
  if (x.terms().empty()) return false;
  const LambdaTerm& lead = x.terms().front();
  return compare(lead.key, ScaleKey::constant()) > 0 && sign(lead.coeff) == Sign::Positive;
}

bool is_negative_infinite(const LambdaExpr& x) {
  if (x.terms().empty()) return false;
  const LambdaTerm& lead = x.terms().front();
  return compare(lead.key, ScaleKey::constant()) > 0 && sign(lead.coeff) == Sign::Negative;
}

mpz_class binomial(unsigned long n, unsigned long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

mpq_class harmonic_exact(const mpz_class& n) {
  if (n < 0) throw Error(ErrorCode::Domain, "harmonic number of a negative index");
  if (n > kMaxExactTerms) throw Error(ErrorCode::OverflowGuard, "harmonic index too large for exact summation");
  mpq_class h(0);
  for (unsigned long i = 1; i <= n.get_ui(); ++i) h += mpq_class(1, i);
  return h;
}

LambdaExpr integer_power(const LambdaExpr& base, const mpz_class& n) {
  if (n < 0) return inverse(integer_power(base, -n));
  LambdaExpr result(1);
  LambdaExpr b = base;
  mpz_class k = n;
  while (k > 0) {
    if (mpz_odd_p(k.get_mpz_t())) result = result * b;
    k >>= 1;
    if (k > 0) b = b * b;
  }
  return result;
}

LambdaExpr poly_at(const std::vector<LambdaExpr>& poly, const LambdaExpr& n) {
  LambdaExpr value;
  for (std::size_t k = poly.size(); k-- > 0;) value = value * n + poly[k];
  return value;
}

LambdaExpr scalar_expr(const mpq_class& q) { return LambdaExpr(q); }

// Σ_{n=1}^{U} 1/(n + c) for the supported shapes of c.
LambdaExpr shifted_harmonic(const LambdaExpr& c, const LambdaExpr& upper, int trunc_order) {
  if (is_infinite(c)) {
    return sum_harmonic(upper + c, trunc_order) - sum_harmonic(c, trunc_order);
  }
  if (is_negative_infinite(c)) {
    throw Error(ErrorCode::Domain, "reciprocal sum crosses a pole");
  }
  auto cs = c.as_constant();
  auto cq = cs ? cs->as_rational() : std::nullopt;
  if (!cq) throw Error(ErrorCode::Grammar, "reciprocal shift must be rational or infinite");

  if (auto u = as_integer(upper)) {
    if (*u < 0) throw Error(ErrorCode::Domain, "negative upper limit");
    if (*u > kMaxExactTerms) throw Error(ErrorCode::OverflowGuard, "finite sum too long");
    mpq_class total(0);
    for (unsigned long n = 1; n <= u->get_ui(); ++n) {
      const mpq_class d = mpq_class(n) + *cq;
      if (d == 0) throw Error(ErrorCode::DivisionByZero, "pole in summation range");
      total += 1 / d;
    }
    return LambdaExpr(total);
  }
  if (!is_infinite(upper)) throw Error(ErrorCode::Domain, "upper limit is neither finite nor positive infinite");

  if (cq->get_den() == 1) {
    if (*cq < 0) throw Error(ErrorCode::DivisionByZero, "pole in summation range");
    return sum_harmonic(upper + c, trunc_order) - LambdaExpr(harmonic_exact(cq->get_num()));
  }
  if (cq->get_den() == 2) {
    // c = k - 1/2: the terms are 2/(2n + 2k - 1), a run of odd reciprocals.
    const mpq_class k_q = *cq + mpq_class(1, 2);
    mpz_class k = k_q.get_num();
    LambdaExpr head;
    LambdaExpr rest_upper = upper;
    if (k < 0) {
      // peel off the negative terms n = 1..-k exactly
      mpq_class h(0);
      for (mpz_class n = 1; n <= -k; ++n) h += 1 / (mpq_class(n) + *cq);
      head = LambdaExpr(h);
      rest_upper = upper + LambdaExpr(mpq_class(k));
      k = 0;
    }
    const LambdaExpr kk = LambdaExpr(mpq_class(k));
    const mpq_class odd_prefix = harmonic_exact(2 * k) - harmonic_exact(k) / 2;
    const LambdaExpr two_m = scalar_expr(2) * (rest_upper + kk);
    return head + scalar_expr(2) * (sum_harmonic(two_m, trunc_order) -
                                    scalar_expr(mpq_class(1, 2)) * sum_harmonic(rest_upper + kk, trunc_order) -
                                    LambdaExpr(odd_prefix));
  }
  throw Error(ErrorCode::Grammar, "reciprocal shift " + cq->get_str() + " is not supported");
}

int parity_sign(const LambdaExpr& upper) {
  const ParityResult p = neg_one_power(upper);
  if (auto* v = std::get_if<LambdaExpr>(&p)) return *v == LambdaExpr(1) ? 1 : -1;
  throw Error(ErrorCode::ParityDependent, "alternating sum length has undetermined parity");
}

LambdaExpr alternating_reciprocal(const Scalar& numerator, const mpq_class& a, const LambdaExpr& shift,
                                  const LambdaExpr& upper, int trunc_order) {
  const int parity = parity_sign(upper);
  const LambdaExpr even_upper = parity == 1 ? upper : upper - LambdaExpr(1);
  const LambdaExpr pairs = even_upper * scalar_expr(mpq_class(1, 2));
  LambdaExpr total = sum_shifted_reciprocal(2 * a, shift - scalar_expr(a), pairs, trunc_order) -
                     sum_shifted_reciprocal(2 * a, shift, pairs, trunc_order);
  if (parity == -1) total += divide(LambdaExpr(1), scalar_expr(a) * upper + shift, trunc_order);
  return LambdaExpr(numerator) * total;
}

LambdaExpr sum_from_one(const Summand& s, const LambdaExpr& upper, int trunc_order) {
  return std::visit(
      [&](const auto& t) -> LambdaExpr {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, PolySummand>) {
          LambdaExpr total;
          for (std::size_t k = 0; k < t.coeffs.size(); ++k) {
            if (!t.coeffs[k].is_zero()) total += t.coeffs[k] * sum_faulhaber(static_cast<unsigned>(k), upper);
          }
          return total;
        } else if constexpr (std::is_same_v<T, GeometricSummand>) {
          LambdaExpr total;
          for (std::size_t k = 0; k < t.poly.size(); ++k) {
            if (t.poly[k].is_zero()) continue;
            total += t.poly[k] * sum_power_geometric(static_cast<unsigned>(k), t.ratio, upper, trunc_order);
          }
          return total;
        } else if constexpr (std::is_same_v<T, RisingBinomialSummand>) {
          return sum_binom(t.b, upper);
        } else if constexpr (std::is_same_v<T, ReciprocalSummand>) {
          return LambdaExpr(t.numerator) * sum_shifted_reciprocal(t.a, t.shift, upper, trunc_order);
        } else if constexpr (std::is_same_v<T, AlternatingPolySummand>) {
          LambdaExpr total;
          for (std::size_t k = 0; k < t.poly.size(); ++k) {
            if (t.poly[k].is_zero()) continue;
            total -= t.poly[k] * sum_power_geometric(static_cast<unsigned>(k), LambdaExpr(-1), upper, trunc_order);
          }
          return total;
        } else {
          return alternating_reciprocal(t.numerator, t.a, t.shift, upper, trunc_order);
        }
      },
      s);
}

}  // namespace

mpq_class bernoulli(unsigned j) {
  std::vector<mpq_class> b{mpq_class(1)};
  while (b.size() <= j) {
    // Σ_{i<m} C(m, i) B_i = m with m = size + 1 (B_1 = +1/2 convention)
    const unsigned long m = b.size() + 1;
    mpq_class acc(0);
    for (unsigned long i = 0; i + 1 < m; ++i) acc += mpq_class(binomial(m, i)) * b[i];
    mpq_class next = (mpq_class(m) - acc) / mpq_class(m);
    next.canonicalize();
    b.push_back(next);
  }
  return b[j];
}

LambdaExpr sum_faulhaber(unsigned k, const LambdaExpr& upper) {
  std::vector<LambdaExpr> powers{LambdaExpr(1)};
  for (unsigned i = 1; i <= k + 1; ++i) powers.push_back(powers.back() * upper);
  LambdaExpr total;
  for (unsigned j = 0; j <= k; ++j) {
    const mpq_class c = mpq_class(binomial(k + 1, j)) * bernoulli(j) / (k + 1);
    if (c != 0) total += LambdaExpr(c) * powers[k + 1 - j];
  }
  return total;
}

LambdaExpr sum_geometric(const LambdaExpr& x, const LambdaExpr& upper, int trunc_order) {
  if (x == LambdaExpr(1)) return upper + LambdaExpr(1);
  if (x.is_zero()) return LambdaExpr(1);
  const LambdaExpr top = pow(x, upper + LambdaExpr(1), trunc_order);
  return divide(top - LambdaExpr(1), x - LambdaExpr(1), trunc_order);
}

LambdaExpr sum_power_geometric(unsigned i, const LambdaExpr& r, const LambdaExpr& upper, int trunc_order) {
  if (r == LambdaExpr(1)) return sum_faulhaber(i, upper);
  if (r.is_zero()) return LambdaExpr();
  const LambdaExpr r_minus_one = r - LambdaExpr(1);
  const LambdaExpr top = pow(r, upper + LambdaExpr(1), trunc_order);
  std::vector<LambdaExpr> s;
  s.push_back(divide(top - r, r_minus_one, trunc_order));
  LambdaExpr upper_power(1);
  for (unsigned k = 1; k <= i; ++k) {
    upper_power = upper_power * upper;
    LambdaExpr acc = upper_power * top;
    for (unsigned m = 0; m < k; ++m) {
      const mpz_class c = binomial(k, m);
      acc += LambdaExpr(mpq_class((k - m) % 2 == 0 ? c : mpz_class(-c))) * s[m];
    }
    s.push_back(divide(acc, r_minus_one, trunc_order));
  }
  return s[i];
}

std::pair<LambdaExpr, LambdaExpr> sum_geom_squared(const LambdaExpr& x, const LambdaExpr& upper,
                                                   int trunc_order) {
  const LambdaExpr one(1);
  if (x == one) {
    const LambdaExpr half(mpq_class(1, 2));
    return {half * (upper + one) * (upper + LambdaExpr(2)), half * upper * (upper + one)};
  }
  const LambdaExpr d = (x - one) * (x - one);
  const LambdaExpr p1 = pow(x, upper + one, trunc_order);
  const LambdaExpr p2 = pow(x, upper + LambdaExpr(2), trunc_order);
  const LambdaExpr first = (upper + one) * p2 - (upper + LambdaExpr(2)) * p1 + one;
  const LambdaExpr second = p1 * (p1 - (upper + one) * x + upper);
  return {divide(first, d, trunc_order), divide(second, d, trunc_order)};
}

LambdaExpr sum_binom(unsigned b, const LambdaExpr& upper) {
  LambdaExpr product(1);
  for (unsigned i = 0; i <= b; ++i) product = product * (upper + LambdaExpr(static_cast<long>(i)));
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), b + 1);
  return product * LambdaExpr(mpq_class(1, f));
}

LambdaExpr sum_harmonic(const LambdaExpr& upper, int trunc_order) {
  if (!is_infinite(upper)) {
    throw Error(ErrorCode::Domain, "asymptotic harmonic sum needs an infinite upper limit");
  }
  const LambdaExpr inv = inverse(upper, trunc_order);
  LambdaExpr result = ln(upper, trunc_order) + LambdaExpr(Scalar::euler_gamma()) +
                      LambdaExpr(mpq_class(1, 2)) * inv;
  const LambdaExpr inv_sq = inv * inv;
  LambdaExpr inv_pow = inv_sq;
  for (int k = 1; 2 * k <= trunc_order; ++k) {
    result -= LambdaExpr(bernoulli(2 * k) / (2 * k)) * inv_pow;
    inv_pow = inv_pow * inv_sq;
  }
  const ScaleKey lead = upper.terms().front().key;
  return result.with_marker(ScaleKey::constant() - lead.scaled(trunc_order + 1));
}

LambdaExpr sum_shifted_reciprocal(const mpq_class& a, const LambdaExpr& shift, const LambdaExpr& upper,
                                  int trunc_order) {
  if (a <= 0) throw Error(ErrorCode::Domain, "reciprocal slope must be positive");
  const LambdaExpr c = shift * LambdaExpr(mpq_class(1 / a));
  return LambdaExpr(mpq_class(1 / a)) * shifted_harmonic(c, upper, trunc_order);
}

LambdaExpr sum_alternating_linear(const LambdaExpr& upper) {
  if (parity_sign(upper) != 1) {
    throw Error(ErrorCode::Domain, "alternating sum length must be even");
  }
  return -sum_power_geometric(1, LambdaExpr(-1), upper);
}

LambdaExpr sum_alternating_linear(unsigned m) {
  return sum_alternating_linear(LambdaExpr(2L * m) * LambdaExpr::lambda());
}

LambdaExpr binom_lambda(const BinomIndex& index) {
  switch (index.kind) {
    case BinomIndex::Kind::Finite:
    case BinomIndex::Kind::LambdaMinus: {
      LambdaExpr product(1);
      const LambdaExpr lam = LambdaExpr::lambda();
      for (unsigned long i = 0; i < index.k; ++i) product = product * (lam - LambdaExpr(static_cast<long>(i)));
      mpz_class f;
      mpz_fac_ui(f.get_mpz_t(), index.k);
      return product * LambdaExpr(mpq_class(1, f));
    }
    case BinomIndex::Kind::HalfLambda: {
      const Scalar coeff = Scalar(2).pow(mpq_class(1, 2)) * Scalar::pi().pow(mpq_class(-1, 2));
      const ScaleKey key{0, Scalar::ln_of(2), mpq_class(-1, 2), 0};
      const ScaleKey error{0, Scalar::ln_of(2), mpq_class(-3, 2), 0};
      return LambdaExpr::from_terms({{coeff, key}}, AsymptoticMarker{error, std::nullopt});
    }
  }
  throw Error(ErrorCode::Domain, "unsupported binomial index");
}

LambdaExpr summand_at(const Summand& s, const mpz_class& n, int trunc_order) {
  const LambdaExpr nn(mpq_class{n});
  const LambdaExpr sign_alt(mpz_odd_p(n.get_mpz_t()) ? 1L : -1L);
  return std::visit(
      [&](const auto& t) -> LambdaExpr {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, PolySummand>) {
          return poly_at(t.coeffs, nn);
        } else if constexpr (std::is_same_v<T, GeometricSummand>) {
          if (n == 0) return poly_at(t.poly, nn);
          return poly_at(t.poly, nn) * integer_power(t.ratio, n);
        } else if constexpr (std::is_same_v<T, RisingBinomialSummand>) {
          if (n <= 0) return LambdaExpr(t.b == 0 ? 1L : 0L);
          return LambdaExpr(mpq_class(binomial(n.get_ui() + t.b - 1, t.b)));
        } else if constexpr (std::is_same_v<T, ReciprocalSummand>) {
          return divide(LambdaExpr(t.numerator), LambdaExpr(t.a) * nn + t.shift, trunc_order);
        } else if constexpr (std::is_same_v<T, AlternatingPolySummand>) {
          return sign_alt * poly_at(t.poly, nn);
        } else {
          return sign_alt * divide(LambdaExpr(t.numerator), LambdaExpr(t.a) * nn + t.shift, trunc_order);
        }
      },
      s);
}

LambdaExpr sum_eval(const SumSpec& spec, int trunc_order) {
  auto lower = as_integer(spec.lower);
  if (!lower || *lower < 0) {
    throw Error(ErrorCode::Grammar, "lower limit must be a finite nonnegative integer");
  }
  if (*lower > kMaxExactTerms) throw Error(ErrorCode::OverflowGuard, "lower limit too large");
  if (compare(spec.upper, LambdaExpr(mpq_class(*lower - 1))) == OrderDecision::Less) {
    throw Error(ErrorCode::Domain, "upper limit is below the lower limit");
  }
  LambdaExpr total;
  for (const auto& s : spec.body) {
    total += sum_from_one(s, spec.upper, trunc_order);
    if (*lower == 0) total += summand_at(s, 0, trunc_order);
    for (mpz_class n = 1; n < *lower; ++n) total -= summand_at(s, n, trunc_order);
  }
  return total;
}

ReversalRewrite reverse_index(const std::vector<Scalar>& poly, const LambdaExpr& upper) {
  // P(U - n) = Σ_k p_k Σ_j C(k, j) U^{k-j} (-n)^j
  std::vector<LambdaExpr> in_n(poly.size());
  for (std::size_t k = 0; k < poly.size(); ++k) {
    std::vector<LambdaExpr> up{LambdaExpr(1)};
    for (std::size_t i = 1; i <= k; ++i) up.push_back(up.back() * upper);
    for (std::size_t j = 0; j <= k; ++j) {
      mpz_class c = binomial(k, j);
      if (j % 2 == 1) c = -c;
      in_n[j] += LambdaExpr(poly[k]) * LambdaExpr(mpq_class(c)) * up[k - j];
    }
  }
  SumSpec direct{"n", LambdaExpr(1), upper, {PolySummand{in_n}}};
  std::vector<LambdaExpr> as_is;
  for (const auto& c : poly) as_is.emplace_back(c);
  SumSpec reindexed{"m", LambdaExpr(0), upper - LambdaExpr(1), {PolySummand{as_is}}};
  ReversalRewrite r;
  r.direct = sum_eval(direct);
  r.reindexed = sum_eval(reindexed);
  r.delta = r.reindexed - r.direct;
  return r;
}

}  // namespace infcalc

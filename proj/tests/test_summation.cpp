#include <doctest.h>

#include <cmath>

#include "infcalc/error.hpp"
#include "infcalc/oracle.hpp"
#include "infcalc/render.hpp"
#include "infcalc/summation.hpp"

using namespace infcalc;

namespace {

const LambdaExpr lam = LambdaExpr::lambda();

LambdaExpr q(long n, long d = 1) { return LambdaExpr(mpq_class(n, d)); }

LambdaExpr lam_pow(long e) { return LambdaExpr::monomial(Scalar(1), ScaleKey::power(e)); }

Scalar std_part(const LambdaExpr& x) { return standard_part(x).value; }

mpq_class brute_power_sum(unsigned k, long n) {
  mpq_class s(0);
  for (long i = 1; i <= n; ++i) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(i), k);
    s += p;
  }
  return s;
}

}  // namespace

TEST_CASE("bernoulli numbers") {
  CHECK(bernoulli(0) == 1);
  CHECK(bernoulli(1) == mpq_class(1, 2));
  CHECK(bernoulli(2) == mpq_class(1, 6));
  CHECK(bernoulli(3) == 0);
  CHECK(bernoulli(4) == mpq_class(-1, 30));
  CHECK(bernoulli(6) == mpq_class(1, 42));
  CHECK(bernoulli(12) == mpq_class(-691, 2730));
  for (unsigned j = 3; j < 40; j += 2) CHECK(bernoulli(j) == 0);
  // Σ_{i<m} C(m, i) B_i = m
  for (unsigned long m = 2; m < 30; ++m) {
    mpq_class acc(0);
    for (unsigned long i = 0; i < m; ++i) {
      mpz_class c;
      mpz_bin_uiui(c.get_mpz_t(), m, i);
      acc += mpq_class(c) * bernoulli(static_cast<unsigned>(i));
    }
    CHECK(acc == mpq_class(m));
  }
}

TEST_CASE("faulhaber") {
  CHECK(sum_faulhaber(1, lam) == lam * lam * q(1, 2) + lam * q(1, 2));
  CHECK(render(sum_faulhaber(1, q(2) * lam)) == "2*lam^2 + lam");
  const LambdaExpr s2 = sum_faulhaber(2, lam);
  CHECK(s2 == lam * lam * lam * q(1, 3) + lam * lam * q(1, 2) + lam * q(1, 6));
  for (long n : {10L, 100L}) {
    CHECK(oracle_exact(s2, FiniteAssignment(n)) == brute_power_sum(2, n));
  }
  for (unsigned k = 0; k < 8; ++k) {
    CHECK(oracle_exact(sum_faulhaber(k, lam), FiniteAssignment(37)) == brute_power_sum(k, 37));
  }
}

TEST_CASE("geometric series") {
  const LambdaExpr x = q(1) - lam_pow(-1);
  const LambdaExpr s = sum_geometric(x, lam);
  REQUIRE(s.marker());
  CHECK(compare(s.marker()->scale, ScaleKey::constant()) <= 0);
  REQUIRE(!s.terms().empty());
  CHECK(compare(s.terms().front().key, ScaleKey::power(1)) == 0);
  CHECK(s.terms().front().coeff == Scalar(1) - Scalar::exp_of(-1));

  const LambdaExpr two = sum_geometric(q(2), lam);
  CHECK(two == q(2) * pow(q(2), lam) - q(1));
  CHECK(oracle_exact(two, FiniteAssignment(20)) == 2097151);
  CHECK(sum_geometric(q(1), lam) == lam + q(1));
}

TEST_CASE("squared geometric diagonals at a finite length") {
  const mpq_class x(1, 3);
  auto [first, second] = sum_geom_squared(LambdaExpr(x), q(50));
  mpq_class a(0);
  mpq_class b(0);
  mpq_class xp(1);
  std::vector<mpq_class> powers{1};
  for (int i = 1; i <= 101; ++i) powers.push_back(powers.back() * x);
  for (int n = 1; n <= 51; ++n) a += n * powers[n - 1];
  for (int n = 1; n <= 50; ++n) b += n * powers[101 - n];
  CHECK(first.as_constant()->as_rational() == a);
  CHECK(second.as_constant()->as_rational() == b);
  const mpq_class closed = (powers[51] - 1) / (x - 1);
  CHECK(a + b == closed * closed);
  (void)xp;
}

TEST_CASE("squared geometric diagonals at lambda") {
  const LambdaExpr x = q(1) - lam_pow(-1);
  auto [first, second] = sum_geom_squared(x, lam);
  const LambdaExpr dx2 = lam_pow(-2);
  const Scalar a = std_part(first * dx2);
  const Scalar b = std_part(second * dx2);
  const Scalar e1 = Scalar::exp_of(-1);
  CHECK(a == Scalar(1) - Scalar(2) * e1);
  CHECK(a + b == (e1 - Scalar(1)) * (e1 - Scalar(1)));
  auto [f0, s0] = sum_geom_squared(q(0), lam);
  CHECK(f0 == q(1));
  CHECK(s0 == q(0));
}

TEST_CASE("rising binomial sums") {
  CHECK(sum_binom(0, lam) == lam);
  CHECK(sum_binom(1, lam) == lam * (lam + q(1)) * q(1, 2));
  CHECK(sum_binom(2, lam) == lam * (lam + q(1)) * (lam + q(2)) * q(1, 6));
  // hockey stick: S_b(N) - S_b(N-1) = C(N+b-1, b)
  for (unsigned b = 0; b < 6; ++b) {
    const LambdaExpr s = sum_binom(b, lam);
    for (unsigned long n : {5UL, 12UL, 40UL}) {
      const mpq_class step = oracle_exact(s, FiniteAssignment(n)) - oracle_exact(s, FiniteAssignment(n - 1));
      mpz_class c;
      mpz_bin_uiui(c.get_mpz_t(), n + b - 1, b);
      CHECK(step == mpq_class(c));
    }
    const SumSpec spec{"n", q(1), lam, {RisingBinomialSummand{b}}};
    CHECK(oracle_identity(spec, s, {12, 120}).pass);
  }
}

TEST_CASE("harmonic asymptotics") {
  const Scalar ln2 = Scalar::ln_of(2);
  CHECK(std_part(sum_harmonic(lam) - sum_harmonic(lam * q(1, 2))) == ln2);
  const LambdaExpr quarter = q(1, 4) * (sum_harmonic(lam * q(1, 2)) - sum_harmonic(lam * q(1, 4)));
  CHECK(std_part(quarter) == ln2 * Scalar(mpq_class(1, 4)));
  const LambdaExpr zero = sum_harmonic(lam) - sum_harmonic(lam);
  CHECK(zero.terms().empty());
  CHECK_THROWS_AS(sum_harmonic(q(10)), Error);

  // against exact harmonic numbers
  const LambdaExpr h = sum_harmonic(lam);
  for (long n : {50L, 200L}) {
    mpq_class exact(0);
    for (long i = 1; i <= n; ++i) exact += mpq_class(1, i);
    const Interval diff = oracle_interval(h, FiniteAssignment(n)) - Interval::exact(exact, kOraclePrecision);
    CHECK(diff.magnitude() < 10.0 * std::pow(static_cast<double>(n), -9.0));
  }
}

TEST_CASE("shifted reciprocal sums") {
  const Scalar quarter_ln2 = Scalar::ln_of(2) * Scalar(mpq_class(1, 4));
  const LambdaExpr a = sum_shifted_reciprocal(4, lam, lam * q(1, 4));
  CHECK(std_part(a) == quarter_ln2);
  const LambdaExpr b = sum_shifted_reciprocal(4, lam - q(2), lam * q(1, 4));
  CHECK(std_part(b) == quarter_ln2);
  CHECK(sum_shifted_reciprocal(1, q(0), lam) == sum_harmonic(lam));

  // brute force at N = 1200
  const FiniteAssignment at(1200, {4});
  const SumSpec spec{"n", q(1), lam * q(1, 4), {ReciprocalSummand{Scalar(1), 4, lam - q(2)}}};
  const Interval brute = oracle_sum_interval(spec, at);
  const Interval closed = oracle_interval(b, at);
  CHECK((brute - closed).magnitude() < 1e-20);

  // half-integer shift: Σ 1/(2n + 1) = (1/2) Σ 1/(n + 1/2)
  const LambdaExpr odd = sum_shifted_reciprocal(2, q(1), lam);
  const SumSpec odd_spec{"n", q(1), lam, {ReciprocalSummand{Scalar(1), 2, q(1)}}};
  CHECK((oracle_sum_interval(odd_spec, FiniteAssignment(300)) - oracle_interval(odd, FiniteAssignment(300)))
            .magnitude() < 1e-15);
  CHECK_THROWS_AS(sum_shifted_reciprocal(1, q(-3), lam), Error);
  CHECK(sum_shifted_reciprocal(1, q(0), q(4)) == q(25, 12));
}

TEST_CASE("alternating linear sums") {
  CHECK(sum_alternating_linear(1U) == -lam);
  CHECK(sum_alternating_linear(2U) == q(-2) * lam);
  const SumSpec four{"n", q(1), q(4), {AlternatingPolySummand{{q(0), q(1)}}}};
  CHECK(sum_eval(four) == q(-2));
  try {
    (void)sum_alternating_linear(lam);
    FAIL("expected parity dependence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParityDependent);
  }
  CHECK_THROWS_AS(sum_alternating_linear(q(2) * lam + q(1)), Error);
  // oracle with 4N terms gives -2N
  const SumSpec spec{"n", q(1), q(4) * lam, {AlternatingPolySummand{{q(0), q(1)}}}};
  CHECK(oracle_identity(spec, sum_alternating_linear(2U), {10000}).pass);
}

TEST_CASE("binomials in lambda") {
  CHECK(binom_lambda(BinomIndex::finite(2)) == lam * (lam - q(1)) * q(1, 2));
  CHECK(binom_lambda(BinomIndex::finite(0)) == q(1));
  CHECK(binom_lambda(BinomIndex::finite(5)) == binom_lambda(BinomIndex::lambda_minus(5)));
  const LambdaExpr mid = binom_lambda(BinomIndex::half_lambda());
  REQUIRE(mid.terms().size() == 1);
  CHECK(render(mid) == "2^(1/2)*pi^(-1/2)*2^lam*lam^(-1/2) + O(2^lam*lam^(-3/2))");
}

TEST_CASE("general sum specs against brute force") {
  const std::vector<mpz_class> ns{12, 120, 1200};
  const SumSpec poly{"n", q(3), lam, {PolySummand{{q(1), q(-2), q(3)}}}};
  CHECK(oracle_identity(poly, sum_eval(poly), ns).pass);
  const SumSpec from_zero{"n", q(0), q(2) * lam, {PolySummand{{q(5), q(0), q(1)}}}};
  CHECK(oracle_identity(from_zero, sum_eval(from_zero), ns).pass);
  const SumSpec geo{"n", q(1), lam, {GeometricSummand{q(1, 2), {q(0), q(1)}}}};
  CHECK(oracle_identity(geo, sum_eval(geo), ns).pass);
  const SumSpec geo2{"n", q(2), lam, {GeometricSummand{q(3), {q(1), q(0), q(2)}}}};
  CHECK(oracle_identity(geo2, sum_eval(geo2), {12, 120}).pass);
  const SumSpec alt{"n", q(1), q(2) * lam + q(1), {AlternatingPolySummand{{q(0), q(0), q(1)}}}};
  CHECK(oracle_identity(alt, sum_eval(alt), ns).pass);
  const SumSpec lam_coeff{"n", q(1), lam, {PolySummand{{lam, q(-1)}}}};
  CHECK(oracle_identity(lam_coeff, sum_eval(lam_coeff), ns).pass);

  const SumSpec alt_harmonic{"n", q(1), q(2) * lam, {AlternatingReciprocalSummand{Scalar(1), 1, q(0)}}};
  CHECK(std_part(sum_eval(alt_harmonic)) == Scalar::ln_of(2));
  CHECK_THROWS_AS(sum_eval(SumSpec{"n", q(1), lam, {AlternatingReciprocalSummand{Scalar(1), 1, q(0)}}}), Error);
}

TEST_CASE("index reversal rewrite") {
  const ReversalRewrite r = reverse_index({Scalar(0), Scalar(1)}, lam);
  CHECK(r.delta.is_zero());
  CHECK(r.direct == lam * (lam - q(1)) * q(1, 2));
  CHECK(r.reindexed == binom_lambda(BinomIndex::finite(2)));
}

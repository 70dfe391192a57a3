#include <doctest.h>

#include <cmath>

#include "infcalc/error.hpp"
#include "infcalc/oracle.hpp"
#include "infcalc/summation.hpp"

using namespace infcalc;

namespace {

const LambdaExpr lam = LambdaExpr::lambda();

LambdaExpr q(long n, long d = 1) { return LambdaExpr(mpq_class(n, d)); }

LambdaExpr lam_pow(long e) { return LambdaExpr::monomial(Scalar(1), ScaleKey::power(e)); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::Domain;
}

}  // namespace

TEST_CASE("finite assignment validation") {
  CHECK(code_of([] { FiniteAssignment(1); }) == ErrorCode::Domain);
  CHECK(code_of([] { FiniteAssignment(10, {4}); }) == ErrorCode::Divisibility);
  CHECK_NOTHROW(FiniteAssignment(12, {2, 3, 4}));
  const auto ns = default_oracle_ns();
  REQUIRE(ns.size() == 4);
  for (const auto& n : ns) CHECK(n % 12 == 0);
}

TEST_CASE("exact evaluation") {
  CHECK(oracle_exact(lam * lam * q(1, 2) + lam * q(1, 2), FiniteAssignment(10)) == 55);
  CHECK(oracle_exact(pow(q(2), lam), FiniteAssignment(20)) == 1048576);
  CHECK(oracle_exact(lam * lam_pow(-2), FiniteAssignment(1000)) == mpq_class(1, 1000));
  CHECK(oracle_exact(pow(lam, lam), FiniteAssignment(5)) == 3125);
  CHECK(oracle_exact(pow(q(1, 3), lam), FiniteAssignment(4)) == mpq_class(1, 81));
  CHECK(oracle_exact(lam * q(1, 4), FiniteAssignment(12, {4})) == 3);
}

TEST_CASE("interval evaluation") {
  const FiniteAssignment at(1000);
  const Interval l = oracle_interval(ln(lam), at);
  CHECK(std::abs(l.midpoint() - std::log(1000.0)) < 1e-12);
  CHECK(l.width() < 1e-60);
  const Interval e = oracle_interval(exp(q(-1)) * lam, at);
  CHECK(std::abs(e.midpoint() - 1000.0 * std::exp(-1.0)) < 1e-9);
  CHECK(std::holds_alternative<Interval>(oracle_eval(ln(lam), at)));
  CHECK(std::holds_alternative<mpq_class>(oracle_eval(lam + q(1), at)));
  // N^N at N = 10^30 cannot be materialized or bounded in double range
  CHECK(code_of([] { (void)oracle_eval(pow(lam, lam), FiniteAssignment(mpz_class("1000000000000000000000000000000"))); }) ==
        ErrorCode::OverflowGuard);
}

TEST_CASE("sign in the log domain") {
  const mpz_class huge("10000000000000000000000000000000000000000");
  CHECK(oracle_sign(pow(lam, lam) - pow(q(2), lam), huge) == 1);
  CHECK(oracle_sign(pow(lam, q(100)) - pow(q(101, 100), lam), mpz_class(1000)) == 1);
  CHECK(oracle_sign(pow(lam, q(100)) - pow(q(101, 100), lam), mpz_class(1000000)) == -1);
  CHECK(oracle_sign(pow(lam, q(100)) - pow(q(101, 100), lam), huge) == -1);
  CHECK(oracle_sign(lam - lam, huge) == 0);
  CHECK(oracle_sign(q(3) - lam, huge) == -1);
}

TEST_CASE("identities") {
  const LambdaExpr s1 = lam * (lam + q(1)) * q(1, 2);
  const SumSpec linear{"n", q(1), lam, {PolySummand{{q(0), q(1)}}}};
  CHECK(oracle_identity(linear, s1, {10, 100, 1000}).pass);

  const IdentityRecord wrong = oracle_identity(linear, lam * lam * q(1, 2), {10, 100});
  CHECK_FALSE(wrong.pass);
  REQUIRE(wrong.first_failure);
  CHECK(*wrong.first_failure == 10);
  CHECK(wrong.lhs.front() == 55);
  CHECK(wrong.rhs.front() == 50);

  // two diagonal sums against the squared closed form at N = 50, x = 1/3
  const mpq_class x(1, 3);
  const ExactSequence diagonals = [&](const mpz_class& n) {
    const long m = n.get_si();
    mpq_class total(0);
    for (long i = 1; i <= m + 1; ++i) {
      mpq_class p(1);
      for (long j = 0; j < i - 1; ++j) p *= x;
      total += i * p;
    }
    for (long i = 1; i <= m; ++i) {
      mpq_class p(1);
      for (long j = 0; j < 2 * m + 1 - i; ++j) p *= x;
      total += i * p;
    }
    return total;
  };
  const LambdaExpr closed = (pow(LambdaExpr(x), lam + q(1)) - q(1)) * inverse(LambdaExpr(x - 1));
  CHECK(oracle_identity(diagonals, closed * closed, {50}).pass);

  CHECK(oracle_identity(sum_faulhaber(3, lam), s1 * s1, default_oracle_ns()).pass);
}

TEST_CASE("exact sums") {
  const SumSpec spec{"n", q(1), q(2) * lam, {PolySummand{{q(0), q(1)}}}};
  CHECK(oracle_sum(spec, FiniteAssignment(12)) == 2 * 144 + 12);
  const SumSpec geo{"n", q(0), lam, {GeometricSummand{q(2), {q(1)}}}};
  CHECK(oracle_sum(geo, FiniteAssignment(10)) == 2047);
  const SumSpec recip{"n", q(1), lam, {ReciprocalSummand{Scalar(1), 1, q(0)}}};
  CHECK(oracle_sum(recip, FiniteAssignment(4)) == mpq_class(25, 12));
}

TEST_CASE("convergence fits") {
  const std::vector<mpz_class> ns{1000, 10000, 100000};
  // right-endpoint Riemann sum of x^2 on [0,1]: Σ (n/N)^2 / N
  const LambdaExpr riemann = sum_faulhaber(2, lam) * lam_pow(-3);
  const ConvergenceRecord r = oracle_convergence(riemann, Scalar(mpq_class(1, 3)), ns);
  CHECK(!r.exact);
  CHECK(r.rate == doctest::Approx(1.0).epsilon(0.1));

  const NumericSequence compound = [](const mpz_class& n, long prec) {
    const Interval base = Interval::exact(mpq_class(n - 1, n), prec);
    return pow(base, mpq_class(n));
  };
  const ConvergenceRecord c = oracle_convergence(compound, Scalar::exp_of(-1), ns);
  CHECK(c.rate == doctest::Approx(1.0).epsilon(0.1));

  const LambdaExpr symbolic = pow(q(1) - lam_pow(-1), lam);
  const ConvergenceRecord s = oracle_convergence(symbolic, Scalar::exp_of(-1), ns);
  CHECK(s.rate == doctest::Approx(1.0).epsilon(0.1));

  const ConvergenceRecord self = oracle_convergence(lam - lam + q(1, 3), Scalar(mpq_class(1, 3)), ns);
  CHECK(self.exact);
  for (double e : self.errors) CHECK(e == 0.0);

  CHECK(predicted_rate(ScaleKey::power(-3)) == 3.0);
  CHECK(!predicted_rate(ScaleKey::exponential(2)));
  CHECK_THROWS(fit_convergence({10, 100}, {-1.0, -2.0}));
}

TEST_CASE("marker soundness of truncated expansions") {
  // 1/(λ-2) against its truncation: the remainder is exactly 16 N^-4 / (N - 2)
  const LambdaExpr t = inverse(lam - q(2), 3);
  for (long n : {1000L, 10000L}) {
    const FiniteAssignment at(n);
    const Interval err = Interval::exact(mpq_class(1, n - 2), kOraclePrecision) - oracle_interval(t, at);
    const double bound = 16.0 * std::pow(static_cast<double>(n), -4.0) / static_cast<double>(n - 2);
    CHECK(err.magnitude() <= bound * (1.0 + 1e-9));
    CHECK(err.magnitude() >= bound * (1.0 - 1e-9));
  }
  // ln(1 - 3/λ) at K = 2 against log at N = 10^4, error ~ 9 N^-3
  const LambdaExpr l = ln(q(1) - q(3) * lam_pow(-1), 2);
  const FiniteAssignment at(10000);
  const Interval exact = log(Interval::exact(mpq_class(9997, 10000), kOraclePrecision));
  CHECK((exact - oracle_interval(l, at)).magnitude() <= 10.0 * 1e-12);
}

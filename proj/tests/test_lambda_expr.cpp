#include <doctest.h>

#include "infcalc/error.hpp"
#include "infcalc/lambda_expr.hpp"
#include "infcalc/render.hpp"

using namespace infcalc;

namespace {

const LambdaExpr lam = LambdaExpr::lambda();

LambdaExpr q(long n, long d = 1) { return LambdaExpr(mpq_class(n, d)); }

LambdaExpr lam_pow(long e) { return LambdaExpr::monomial(Scalar(1), ScaleKey::power(e)); }

}  // namespace

TEST_CASE("addition merges scales") {
  CHECK(lam + lam == q(2) * lam);
  CHECK(render(lam + lam) == "2*lam");
  const LambdaExpr upper = lam * (lam + q(1)) * q(1, 2);
  const LambdaExpr lower = lam * (lam - q(1)) * q(1, 2);
  CHECK(upper + lower == lam * lam);
  CHECK(lam + q(0) == lam);
}

TEST_CASE("multiplication adds keys") {
  CHECK(render(lam * lam) == "lam^2");
  CHECK(lam * lam_pow(-2) == lam_pow(-1));
  CHECK(lam * lam_pow(-1) == q(1));
  CHECK(render(lam * lam_pow(-2)) == "lam^(-1)");
}

TEST_CASE("inverse") {
  CHECK(inverse(lam) == lam_pow(-1));
  const LambdaExpr inv = inverse(lam - q(2), 3);
  CHECK(render(inv) == "lam^(-1) + 2*lam^(-2) + 4*lam^(-3) + 8*lam^(-4) + O(lam^(-5))");
  CHECK(divide(lam * lam + lam, lam) == lam + q(1));
  CHECK(divide(lam * lam - q(1), lam - q(1)) == lam + q(1));
  CHECK_THROWS_AS(inverse(LambdaExpr()), Error);
}

TEST_CASE("ordering") {
  CHECK(compare(lam - q(2), lam) == OrderDecision::Less);
  CHECK(compare(q(5) * lam, lam * lam) == OrderDecision::Less);
  const LambdaExpr two_pow = pow(q(2), lam);
  const LambdaExpr lam_lam = pow(lam, lam);
  CHECK(render(two_pow) == "2^lam");
  CHECK(render(lam_lam) == "lam^lam");
  CHECK(compare(two_pow, lam_lam) == OrderDecision::Less);
  CHECK(compare(lam_pow(100), pow(q(101, 100), lam)) == OrderDecision::Less);
  CHECK(compare(lam, lam) == OrderDecision::Equal);
  CHECK(compare(lam * lam, lam) == OrderDecision::Greater);
  // an error bound swallowing the difference cannot be ordered
  CHECK(compare(q(1) + LambdaExpr::big_o(ScaleKey::constant()), q(1)) == OrderDecision::Undecided);
}

TEST_CASE("exp") {
  CHECK(exp(lam * LambdaExpr(Scalar::ln_of(2))) == pow(q(2), lam));
  const LambdaExpr e = exp(q(-3) + q(5) * lam_pow(-1), 2);
  const LambdaExpr expected =
      LambdaExpr(Scalar::exp_of(-3)) * (q(1) + q(5) * lam_pow(-1) + q(25, 2) * lam_pow(-2));
  CHECK(e.without_marker() == expected);
  REQUIRE(e.marker());
  CHECK(compare(e.marker()->scale, ScaleKey::power(-3)) == 0);
  CHECK(exp(q(0)) == q(1));
  CHECK_THROWS_AS(exp(lam * lam), Error);
}

TEST_CASE("ln") {
  CHECK(ln(lam * q(1, 2)) == LambdaExpr::monomial(Scalar(1), ScaleKey::log_power(1)) -
                                 LambdaExpr(Scalar::ln_of(2)));
  CHECK(ln(pow(lam, lam)) == LambdaExpr::monomial(Scalar(1), ScaleKey{0, Scalar(), 1, 1}));
  const LambdaExpr l = ln(q(1) - q(3) * lam_pow(-1), 2);
  CHECK(render(l) == "-3*lam^(-1) - 9*lam^(-2)/2 + O(lam^(-3))");
  CHECK_THROWS_AS(ln(-lam), Error);
  CHECK_THROWS_AS(ln(LambdaExpr::monomial(Scalar(1), ScaleKey::log_power(1))), Error);
}

TEST_CASE("pow limits") {
  const LambdaExpr a = pow(q(1) - q(3) * lam_pow(-1), lam);
  CHECK(standard_part(a).value == Scalar::exp_of(-3));
  CHECK(compare(a.marker()->scale, ScaleKey::power(-1)) <= 0);

  const LambdaExpr ratio = divide(lam - q(3), lam - q(2));
  const LambdaExpr b = pow(ratio, lam);
  CHECK(standard_part(b).value == Scalar::exp_of(-1));

  const LambdaExpr ten = pow(q(10), lam);
  const LambdaExpr c = pow(q(1) - inverse(ten), ten);
  CHECK(standard_part(c).value == Scalar::exp_of(-1));
  REQUIRE(c.marker());
  CHECK(compare(c.marker()->scale, ScaleKey::exponential(mpq_class(1, 10))) <= 0);

  CHECK(pow(lam + q(7), q(0)) == q(1));
  CHECK(pow(lam + q(1), q(2)) == lam * lam + q(2) * lam + q(1));
}

TEST_CASE("standard part") {
  const LambdaExpr s1 = lam * lam * q(1, 2) + lam * q(1, 2);
  CHECK(standard_part(s1 * lam_pow(-2)).value == Scalar(mpq_class(1, 2)));
  CHECK(standard_part(lam_pow(-1)).value.is_zero());
  try {
    (void)standard_part(lam + q(1));
    FAIL("expected unbounded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Unbounded);
  }
}

TEST_CASE("parity") {
  CHECK(std::get<LambdaExpr>(neg_one_power(q(2) * lam)) == q(1));
  CHECK(std::get<LambdaExpr>(neg_one_power(q(2) * lam + q(1))) == q(-1));
  CHECK(std::holds_alternative<ParityDependent>(neg_one_power(lam)));
  CHECK(std::get<LambdaExpr>(neg_one_power(lam * (lam + q(1)))) == q(1));
  CHECK(std::get<LambdaExpr>(neg_one_power(q(3))) == q(-1));
  try {
    (void)pow(q(-1), lam);
    FAIL("expected parity dependence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParityDependent);
  }
  CHECK(pow(q(-1), q(2) * lam) == q(1));
  CHECK(pow(q(-2), q(2) * lam) == pow(q(4), lam));
}

TEST_CASE("markers propagate through arithmetic") {
  const LambdaExpr a = q(1) + LambdaExpr::big_o(ScaleKey::power(-1));
  const LambdaExpr b = lam * a;
  REQUIRE(b.marker());
  CHECK(compare(b.marker()->scale, ScaleKey::constant()) == 0);
  CHECK(render(b) == "lam + O(1)");
  const LambdaExpr c = a + LambdaExpr::big_o(ScaleKey::power(-3));
  CHECK(compare(c.marker()->scale, ScaleKey::power(-1)) == 0);
}

TEST_CASE("rendering") {
  CHECK(render(LambdaExpr()) == "0");
  CHECK(render(lam * lam * q(1, 2) + lam * q(1, 2)) == "lam^2/2 + lam/2");
  CHECK(render(q(2) * lam * lam + lam) == "2*lam^2 + lam");
  CHECK(render(q(1) - inverse(pow(q(10), lam))) == "1 - (1/10)^lam");
  CHECK(render(LambdaExpr(Scalar::pi()) * lam) == "pi*lam");
  CHECK(render(LambdaExpr::monomial(Scalar(1), ScaleKey::log_power(2))) == "ln(lam)^2");
}

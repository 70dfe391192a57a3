#include <doctest.h>

#include <vector>

#include "infcalc/error.hpp"
#include "infcalc/oracle.hpp"
#include "infcalc/render.hpp"
#include "infcalc/riemann.hpp"

using namespace infcalc;

namespace {

const LambdaExpr lam = LambdaExpr::lambda();

LambdaExpr q(long n, long d = 1) { return LambdaExpr(mpq_class(n, d)); }

LambdaExpr lam_pow(long e) { return LambdaExpr::monomial(Scalar(1), ScaleKey::power(e)); }

Scalar r(long n, long d = 1) { return Scalar(mpq_class(n, d)); }

const FuncExpr x = FuncExpr::monomial(Scalar(1), 1);

// Direct finite Riemann sum Σ_{j=1}^{N} f(a + j dx) dx for rational data.
mpq_class finite_riemann(const std::vector<mpq_class>& poly, const mpq_class& a, const mpq_class& b, long n) {
  const mpq_class dx = (b - a) / n;
  mpq_class total(0);
  for (long j = 1; j <= n; ++j) {
    const mpq_class xj = a + j * dx;
    mpq_class v(0);
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) v = v * xj + *it;
    total += v * dx;
  }
  return total;
}

}  // namespace

TEST_CASE("linear Riemann sums") {
  const Scalar b(3);
  CHECK(riemann_sum(x, Scalar(0), b) == q(9, 2) + q(9, 2) * lam_pow(-1));
  CHECK(riemann_sum(FuncExpr::monomial(Scalar(2), 1), Scalar(0), b) == q(9) + q(9) * lam_pow(-1));
  CHECK(riemann_sum(FuncExpr::constant(Scalar(1)), Scalar(0), Scalar(1)) == q(1));
  CHECK_THROWS_AS(riemann_sum(x, Scalar(1), Scalar(1)), Error);
}

TEST_CASE("integral checks") {
  for (long bn : {1L, 2L, 5L}) {
    const Scalar b(bn);
    const IntegralCheckReport sq = integral_check(x * x, Scalar(0), b);
    CHECK(sq.match);
    CHECK(sq.analytic_value == b * b * b / Scalar(3));
    CHECK(sq.riemann_expr.is_exact());

    const IntegralCheckReport decay = integral_check(FuncExpr::exp_term(Scalar(1), 0, Scalar(-1)), Scalar(0), b);
    CHECK(decay.match);
    CHECK(decay.standard_part == Scalar(1) - Scalar::exp_of(-bn));

    const FuncExpr tent = (FuncExpr::constant(b) - x) * x;
    const IntegralCheckReport t = integral_check(tent, Scalar(0), b);
    CHECK(t.match);
    CHECK(t.analytic_value == b * b * b / Scalar(6));
    CHECK_FALSE(t.standard_part == b * b * b / Scalar(3));
  }
  const IntegralCheckReport shifted = integral_check(FuncExpr::exp_term(r(3), 2, Scalar(1)), r(1, 2), r(2));
  CHECK(shifted.match);
  const IntegralCheckReport logrates = integral_check(FuncExpr::exp_term(Scalar(1), 1, Scalar::ln_of(2)), Scalar(0), Scalar(1));
  CHECK(logrates.match);
}

TEST_CASE("standard part equals the integral for random grammar members") {
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  auto next = [&](long lo, long hi) {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return lo + static_cast<long>(state % static_cast<std::uint64_t>(hi - lo + 1));
  };
  for (int iter = 0; iter < 40; ++iter) {
    FuncExpr f;
    const int n_terms = static_cast<int>(next(1, 3));
    for (int i = 0; i < n_terms; ++i) {
      const Scalar c(mpq_class(next(-5, 5), next(1, 3)));
      const unsigned k = static_cast<unsigned>(next(0, 3));
      const Scalar s = next(0, 2) == 0 ? Scalar() : Scalar(mpq_class(next(-3, 3), next(1, 2)));
      f = f + FuncExpr::exp_term(c, k, s);
    }
    const long a_num = next(0, 8);
    const Scalar a(mpq_class(a_num, 4));
    const Scalar b(mpq_class(a_num + next(1, 36), 4));
    const IntegralCheckReport rep = integral_check(f, a, b);
    INFO("f = " << f.to_string() << " on [" << render(a) << ", " << render(b) << "]");
    CHECK(rep.match);
  }
}

TEST_CASE("finite Riemann sums against the symbolic sum") {
  const std::vector<mpq_class> poly{mpq_class(1), mpq_class(-2), mpq_class(3)};
  const FuncExpr f = FuncExpr::constant(Scalar(1)) + FuncExpr::monomial(Scalar(-2), 1) + FuncExpr::monomial(Scalar(3), 2);
  const mpq_class a(1, 2);
  const mpq_class b(7, 3);
  const LambdaExpr s = riemann_sum(f, Scalar(a), Scalar(b));
  for (long n : {12L, 120L, 1200L}) CHECK(oracle_exact(s, FiniteAssignment(n)) == finite_riemann(poly, a, b, n));

  const ConvergenceRecord rec = oracle_convergence(s, integral(f, Scalar(a), Scalar(b)), {1000, 10000, 100000});
  CHECK(rec.rate >= 0.9);

  // e^{-x}: the expansion converges to the finite sum at the marker's rate
  const LambdaExpr decay = riemann_sum(FuncExpr::exp_term(Scalar(1), 0, Scalar(-1)), Scalar(0), Scalar(1));
  REQUIRE(decay.marker());
  const NumericSequence direct = [](const mpz_class& n, long prec) {
    // Σ e^{-j/N}/N = e^{-1/N}(1 - e^{-1}) / (N (1 - e^{-1/N}))
    const Interval step = exp(Interval::exact(mpq_class(-1, n), prec));
    const Interval one = Interval::exact(mpq_class(1), prec);
    return step * (one - exp(-one)) / (Interval::exact(mpq_class(n), prec) * (one - step));
  };
  for (long n : {1000L, 10000L}) {
    const FiniteAssignment at(n);
    const Interval diff = oracle_interval(decay, at) - direct(mpz_class(n), kOraclePrecision);
    CHECK(diff.magnitude() < 1e-20);
  }
  const ConvergenceRecord d = oracle_convergence(decay, Scalar(1) - Scalar::exp_of(-1), {1000, 10000, 100000});
  CHECK(d.rate >= 0.9);
}

TEST_CASE("double Riemann sum by diagonals") {
  const DiagonalDecomposition d = double_riemann_diag(Scalar(1));
  CHECK(d.first_triangle + d.second_triangle == d.grid_terms);
  CHECK(d.value == q(1));
  CHECK(standard_part(d.twice_integral).value == Scalar(1));
  CHECK(d.difference == lam_pow(-1));
  const DiagonalDecomposition d3 = double_riemann_diag(Scalar(3));
  CHECK(d3.value == q(9));
  for (long n : {12L, 120L}) {
    CHECK(oracle_exact(d.second_triangle, FiniteAssignment(n)) == mpq_class(n * (n - 1) / 2));
  }
}

TEST_CASE("squared geometric bridge") {
  const GeomSquareReport rep = geom_square_bridge(Scalar(1));
  CHECK(rep.total.match);
  const Scalar e1 = Scalar::exp_of(-1);
  CHECK(rep.total.standard_part == (e1 - Scalar(1)) * (e1 - Scalar(1)));
  CHECK(rep.first_part == rep.first_integral);
  CHECK(rep.second_part == rep.second_integral);
  CHECK(rep.first_part + rep.second_part == rep.total.analytic_value);
  CHECK(sign(rep.first_part - Scalar(1)) != Sign::Zero);

  const GeomSquareReport two = geom_square_bridge(Scalar(2));
  CHECK(two.total.match);
  const GeomSquareReport tiny = geom_square_bridge(r(1, 1000));
  CHECK(tiny.total.match);
  CHECK(tiny.total.standard_part.eval(64).magnitude() < 1.1e-6);
}

TEST_CASE("shifted triangle rewrite") {
  const TriangleRewrite t = shifted_triangle(Scalar(1));
  CHECK(t.rewritten == t.column_form);
  CHECK(t.delta == q(1, 2) * lam_pow(-1) + q(1, 2) * lam_pow(-2));
  CHECK(standard_part(t.original).value == r(1, 6));
  CHECK(standard_part(t.rewritten).value == r(1, 6));
  const SumSpec spec{"n", q(1), lam, {PolySummand{{q(0), lam, q(-1)}}}};
  CHECK(oracle_identity(spec, t.original * lam * lam * lam, {12, 120, 1200}).pass);
}

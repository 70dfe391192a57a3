#include "infcalc/riemann.hpp"

#include <sstream>

#include "infcalc/error.hpp"
#include "infcalc/render.hpp"
#include "infcalc/summation.hpp"

namespace infcalc {

namespace {

LambdaExpr inverse_lambda() { return LambdaExpr::monomial(Scalar(1), ScaleKey::power(-1)); }

mpq_class binomial(unsigned n, unsigned k) {
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), n, k);
  return mpq_class(c);
}

mpq_class falling(unsigned k, unsigned m) {
  mpq_class r(1);
  for (unsigned i = 0; i < m; ++i) r *= k - i;
  return r;
}

void require_interval(const Scalar& a, const Scalar& b) {
  switch (sign(b - a)) {
    case Sign::Positive:
      return;
    case Sign::Undecided:
      throw Error(ErrorCode::Undecided, "cannot order the integration bounds");
    default:
      throw Error(ErrorCode::Domain, "integration requires b > a");
  }
}

FuncExpr collect(std::vector<FuncTerm> terms) {
  FuncExpr out;
  for (auto& t : terms) {
    if (t.power > kMaxFuncPower) {
      throw Error(ErrorCode::Grammar, "integrand power exceeds " + std::to_string(kMaxFuncPower));
    }
    bool merged = false;
    for (auto& o : out.terms) {
      if (o.power == t.power && o.rate == t.rate) {
        o.coeff += t.coeff;
        merged = true;
        break;
      }
    }
    if (!merged) out.terms.push_back(t);
  }
  std::erase_if(out.terms, [](const FuncTerm& t) { return t.coeff.is_zero(); });
  return out;
}

// Antiderivative of x^k e^{sx} at x.
Scalar antiderivative(const FuncTerm& t, const Scalar& x) {
  if (t.rate.is_zero()) return t.coeff * x.pow(t.power + 1) / Scalar(mpq_class(t.power + 1));
  Scalar acc;
  Scalar s_power = t.rate;
  for (unsigned m = 0; m <= t.power; ++m) {
    Scalar term = Scalar(falling(t.power, m)) * (t.power == m ? Scalar(1) : x.pow(t.power - m)) / s_power;
    acc += (m % 2 == 0) ? term : -term;
    s_power *= t.rate;
  }
  return t.coeff * exp(t.rate * x) * acc;
}

}  // namespace

FuncExpr FuncExpr::constant(const Scalar& c) { return monomial(c, 0); }

FuncExpr FuncExpr::monomial(const Scalar& c, unsigned k) { return exp_term(c, k, Scalar()); }

FuncExpr FuncExpr::exp_term(const Scalar& c, unsigned k, const Scalar& s) { return collect({FuncTerm{c, k, s}}); }

FuncExpr FuncExpr::operator-() const {
  FuncExpr out = *this;
  for (auto& t : out.terms) t.coeff = -t.coeff;
  return out;
}

FuncExpr operator+(const FuncExpr& a, const FuncExpr& b) {
  std::vector<FuncTerm> all = a.terms;
  all.insert(all.end(), b.terms.begin(), b.terms.end());
  return collect(std::move(all));
}

FuncExpr operator-(const FuncExpr& a, const FuncExpr& b) { return a + (-b); }

FuncExpr operator*(const FuncExpr& a, const FuncExpr& b) {
  std::vector<FuncTerm> all;
  for (const auto& x : a.terms) {
    for (const auto& y : b.terms) all.push_back({x.coeff * y.coeff, x.power + y.power, x.rate + y.rate});
  }
  return collect(std::move(all));
}

Scalar FuncExpr::at(const Scalar& x) const {
  Scalar acc;
  for (const auto& t : terms) {
    Scalar v = t.coeff * (t.power == 0 ? Scalar(1) : x.pow(t.power));
    if (!t.rate.is_zero()) v *= exp(t.rate * x);
    acc += v;
  }
  return acc;
}

std::string FuncExpr::to_string() const {
  if (terms.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& t : terms) {
    if (!first) out << " + ";
    first = false;
    out << "(" << render(t.coeff) << ")";
    if (t.power == 1) out << "*x";
    if (t.power > 1) out << "*x^" << t.power;
    if (!t.rate.is_zero()) out << "*exp((" << render(t.rate) << ")*x)";
  }
  return out.str();
}

Scalar integral(const FuncExpr& f, const Scalar& a, const Scalar& b) {
  Scalar acc;
  for (const auto& t : f.terms) acc += antiderivative(t, b) - antiderivative(t, a);
  return acc;
}

LambdaExpr riemann_sum(const FuncExpr& f, const Scalar& a, const Scalar& b, int trunc_order) {
  require_interval(a, b);
  const LambdaExpr lam = LambdaExpr::lambda();
  const LambdaExpr dx = LambdaExpr(b - a) * inverse_lambda();
  LambdaExpr total;
  for (const auto& t : f.terms) {
    if (t.power > kMaxFuncPower) throw Error(ErrorCode::Grammar, "integrand power too large");
    // c e^{sa} dx Σ_m C(k,m) a^{k−m} dx^m Σ_j j^m r^j with r = e^{s dx}
    const LambdaExpr ratio = t.rate.is_zero() ? LambdaExpr(1) : exp(LambdaExpr(t.rate) * dx, trunc_order);
    LambdaExpr inner;
    LambdaExpr dx_power(1);
    for (unsigned m = 0; m <= t.power; ++m) {
      const Scalar a_power = (m == t.power) ? Scalar(1) : a.pow(t.power - m);
      if (!a_power.is_zero()) {
        const LambdaExpr sj = t.rate.is_zero() ? sum_faulhaber(m, lam)
                                               : sum_power_geometric(m, ratio, lam, trunc_order);
        inner += LambdaExpr(Scalar(binomial(t.power, m)) * a_power) * dx_power * sj;
      }
      dx_power *= dx;
    }
    Scalar front = t.coeff;
    if (!t.rate.is_zero()) front *= exp(t.rate * a);
    total += LambdaExpr(front) * dx * inner;
  }
  return total;
}

IntegralCheckReport integral_check(const FuncExpr& f, const Scalar& a, const Scalar& b, int trunc_order) {
  IntegralCheckReport report;
  report.riemann_expr = riemann_sum(f, a, b, trunc_order);
  report.standard_part = standard_part(report.riemann_expr).value;
  report.analytic_value = integral(f, a, b);
  const Sign s = sign(report.standard_part - report.analytic_value);
  if (s == Sign::Undecided) throw Error(ErrorCode::Undecided, "cannot compare Riemann sum with the integral");
  report.match = s == Sign::Zero;
  return report;
}

DiagonalDecomposition double_riemann_diag(const Scalar& b) {
  require_interval(Scalar(0), b);
  const LambdaExpr lam = LambdaExpr::lambda();
  const LambdaExpr dx = LambdaExpr(b) * inverse_lambda();
  DiagonalDecomposition d;
  d.grid_terms = lam * lam;
  d.first_triangle = sum_faulhaber(1, lam);
  d.second_triangle = sum_faulhaber(1, lam - LambdaExpr(1));
  d.value = (d.first_triangle + d.second_triangle) * dx * dx;
  d.twice_integral = LambdaExpr(2) * riemann_sum(FuncExpr::monomial(Scalar(1), 1), Scalar(0), b);
  d.difference = d.twice_integral - d.value;
  return d;
}

GeomSquareReport geom_square_bridge(const Scalar& b, int trunc_order) {
  require_interval(Scalar(0), b);
  const LambdaExpr lam = LambdaExpr::lambda();
  const LambdaExpr dx = LambdaExpr(b) * inverse_lambda();
  const auto [first, second] = sum_geom_squared(LambdaExpr(1) - dx, lam, trunc_order);
  const LambdaExpr dx2 = dx * dx;

  GeomSquareReport r;
  r.total.riemann_expr = (first + second) * dx2;
  r.total.standard_part = standard_part(r.total.riemann_expr).value;
  const Scalar e = exp(-b);
  r.total.analytic_value = (e - Scalar(1)) * (e - Scalar(1));
  const Sign s = sign(r.total.standard_part - r.total.analytic_value);
  if (s == Sign::Undecided) throw Error(ErrorCode::Undecided, "cannot compare the squared series");
  r.total.match = s == Sign::Zero;
  r.first_part = standard_part(first * dx2).value;
  r.second_part = standard_part(second * dx2).value;
  r.first_integral = integral(FuncExpr::exp_term(Scalar(1), 1, Scalar(-1)), Scalar(0), b);
  r.second_integral = exp(Scalar(-2) * b) * integral(FuncExpr::exp_term(Scalar(1), 1, Scalar(1)), Scalar(0), b);
  return r;
}

TriangleRewrite shifted_triangle(const Scalar& b) {
  require_interval(Scalar(0), b);
  const LambdaExpr lam = LambdaExpr::lambda();
  const LambdaExpr dx = LambdaExpr(b) * inverse_lambda();
  const LambdaExpr dx3 = dx * dx * dx;
  TriangleRewrite t;
  t.original = sum_eval(SumSpec{"n", LambdaExpr(1), lam, {PolySummand{{LambdaExpr(), lam, LambdaExpr(-1)}}}}) * dx3;
  t.rewritten =
      sum_eval(SumSpec{"n", LambdaExpr(1), lam, {PolySummand{{LambdaExpr(), lam + LambdaExpr(1), LambdaExpr(-1)}}}}) *
      dx3;
  t.column_form = sum_binom(2, lam) * dx3;
  t.delta = t.rewritten - t.original;
  return t;
}

}  // namespace infcalc

#include "infcalc/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "infcalc/error.hpp"
#include "infcalc/oracle.hpp"
#include "infcalc/render.hpp"
#include "infcalc/riemann.hpp"
#include "infcalc/sets.hpp"
#include "infcalc/summation.hpp"

namespace infcalc {

namespace {

const mpz_class kHugeN("12000000000000000000000000000000000000000000000000000000000000");

LambdaExpr lam() { return LambdaExpr::lambda(); }
LambdaExpr q(long n, long d = 1) { return LambdaExpr(mpq_class(n, d)); }

std::string ns_text(const std::vector<mpz_class>& ns) {
  std::string out;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (i > 0) out += ",";
    out += ns[i].get_str();
  }
  return out;
}

EvidenceItem identity_evidence(const std::string& label, const IdentityRecord& r) {
  EvidenceItem e{label, r.pass, {}};
  if (r.pass) {
    e.detail = "exact at N=" + ns_text(r.ns);
  } else {
    const auto at = std::find(r.ns.begin(), r.ns.end(), *r.first_failure) - r.ns.begin();
    e.detail = "fails at N=" + r.first_failure->get_str() + ": " + r.lhs[at].get_str() + " != " + r.rhs[at].get_str();
  }
  return e;
}

EvidenceItem convergence_evidence(const std::string& label, const ConvergenceRecord& r, double predicted) {
  EvidenceItem e{label, r.exact || r.rate >= predicted - 0.1, {}};
  std::ostringstream out;
  if (r.exact) {
    out << "exact at N=" << ns_text(r.ns);
  } else {
    out << "fitted rate " << r.rate << " (predicted " << predicted << ") over N=" << ns_text(r.ns);
  }
  e.detail = out.str();
  return e;
}

EvidenceItem check(const std::string& label, bool pass, const std::string& detail) { return {label, pass, detail}; }

template <class F>
EvidenceItem expect_error(const std::string& label, ErrorCode code, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return {label, e.code() == code, std::string(code_name(e.code())) + ": " + e.what()};
  }
  return {label, false, "no error raised"};
}

std::string order_text(OrderDecision d) { return to_string(d); }

// Worst bound (as a multiple of 1/N) over a list of N.
struct BoundResult {
  bool pass = true;
  std::string detail;
};

BoundResult bound_over(const std::vector<long>& ns, double multiple,
                       const std::function<Interval(long)>& error_at) {
  BoundResult r;
  std::ostringstream out;
  for (long n : ns) {
    const double err = error_at(n).magnitude();
    const double limit = multiple / static_cast<double>(n);
    if (err > limit) r.pass = false;
    out << "N=" << n << ": " << err << (err <= limit ? " <= " : " > ") << limit << "; ";
  }
  r.detail = out.str();
  return r;
}

void set_catalog(ScenarioReport& r, const LambdaExpr& catalog) {
  r.catalog = ScenarioValue::of(catalog);
  r.catalog_match = r.corrected.expr && *r.corrected.expr == catalog;
}

void set_catalog(ScenarioReport& r, const Scalar& catalog) {
  r.catalog = ScenarioValue::of(catalog);
  r.catalog_match = r.corrected.scalar && *r.corrected.scalar == catalog;
}

// -- scenarios --------------------------------------------------------------

ScenarioReport galileo(const ScenarioParams&) {
  ScenarioReport r;
  r.name = "galileo";
  r.classical_claim = "every number has a square, so N holds as many squares as numbers and the sizes cannot be compared";
  r.classical_value = "|{n^2}| = |N|";
  const LambdaExpr s1 = sum_faulhaber(1, lam());
  const LambdaExpr s2 = sum_faulhaber(2, lam());
  const OrderDecision order = compare(s1, s2);
  r.corrected = ScenarioValue::of(card(SetExpr::segment(lam() * lam())));
  r.missing_terms = mapping_gap(MappingScheme::Square, lam());
  r.details = {{"1+2+...+lam", render(s1)},
               {"1+4+...+lam^2", render(s2)},
               {"ordering", order_text(order)},
               {"container", SetExpr::segment(lam() * lam()).to_string()}};

  const FuncExpr x = FuncExpr::monomial(Scalar(1), 1);
  const IntegralCheckReport lin = integral_check(x, Scalar(0), Scalar(2));
  const IntegralCheckReport sq = integral_check(x * x, Scalar(0), Scalar(2));
  r.evidence.push_back(check("integral x on [0,2]", lin.match, render(lin.standard_part)));
  r.evidence.push_back(check("integral x^2 on [0,2]", sq.match, render(sq.standard_part)));
  r.evidence.push_back(check("b^2/2 < b^3/3 at b=2", sign(sq.analytic_value - lin.analytic_value) == Sign::Positive,
                             render(lin.analytic_value) + " < " + render(sq.analytic_value)));
  r.evidence.push_back(check("ordering of the sums", order == OrderDecision::Less, order_text(order)));
  r.evidence.push_back(check("ordering at large N", oracle_sign(s2 - s1, kHugeN) == 1, "N=" + kHugeN.get_str()));
  r.evidence.push_back(identity_evidence(
      "sum of squares", oracle_identity(SumSpec{"n", q(1), lam(), {PolySummand{{q(0), q(0), q(1)}}}}, s2, {12, 120, 1200})));
  bool gaps = true;
  for (unsigned long n : {12UL, 120UL}) {
    gaps = gaps && oracle_exact(r.missing_terms, FiniteAssignment(n)) ==
                       mpq_class(static_cast<unsigned long>(mapping_gap_brute(MappingScheme::Square, n)));
  }
  r.evidence.push_back(check("unreached squares by enumeration", gaps, "N=12,120"));
  set_catalog(r, lam() * lam());
  return r;
}

ScenarioReport even_odd_riemann(const ScenarioParams&) {
  ScenarioReport r;
  r.name = "even_odd_riemann";
  r.classical_claim = "the evens match N one-to-one, so the 2x-sum only uses numbers of N yet exceeds the x-sum";
  r.classical_value = "terms of sum 2j lie in N";
  const Scalar b(3);
  const FuncExpr f1 = FuncExpr::monomial(Scalar(1), 1);
  const FuncExpr f2 = FuncExpr::monomial(Scalar(2), 1);
  const IntegralCheckReport c1 = integral_check(f1, Scalar(0), b);
  const IntegralCheckReport c2 = integral_check(f2, Scalar(0), b);
  const LambdaExpr top = LambdaExpr(2) * lam();  // last term of 2+4+...+2λ
  r.corrected = ScenarioValue::of(card(SetExpr::segment(top)));
  r.missing_terms = card(SetExpr::segment(top)) - card(SetExpr::naturals());
  r.details = {{"riemann x", render(c1.riemann_expr)},
               {"riemann 2x", render(c2.riemann_expr)},
               {"largest term of 2+4+...", render(top)},
               {"evens in N", render(card(SetExpr::evens()))}};
  r.evidence.push_back(check("integral x on [0,3]", c1.match, render(c1.standard_part)));
  r.evidence.push_back(check("integral 2x on [0,3]", c2.match, render(c2.standard_part)));
  r.evidence.push_back(check("2x-sum has more terms than N has evens",
                             compare(card(SetExpr::evens()), lam()) == OrderDecision::Less,
                             render(card(SetExpr::evens())) + " < lam"));
  r.evidence.push_back(identity_evidence(
      "sum of 2j", oracle_identity(SumSpec{"j", q(1), lam(), {PolySummand{{q(0), q(2)}}}},
                                   LambdaExpr(2) * sum_faulhaber(1, lam()), {12, 120, 1200})));
  const ExactSequence beyond = [](const mpz_class& n) {
    mpz_class count = 0;
    for (mpz_class j = 1; j <= n; ++j) {
      if (2 * j > n) ++count;
    }
    return mpq_class(count);
  };
  r.evidence.push_back(identity_evidence("terms 2j beyond N by count",
                                         oracle_identity(beyond, q(1, 2) * lam(), {12, 120, 1200})));
  set_catalog(r, LambdaExpr(2) * lam());
  return r;
}

ScenarioReport integers_bijection(const ScenarioParams&) {
  ScenarioReport r;
  r.name = "integers_bijection";
  r.classical_claim = "1, -1, 2, -2, ... pairs N with Z one-to-one";
  r.classical_value = "|Z| = |N|";
  r.corrected = ScenarioValue::of(card(SetExpr::integers()));
  r.missing_terms = mapping_gap(MappingScheme::InterleaveIntegers, lam());
  r.details = {{"|N_2lam|", render(card(SetExpr::segment(LambdaExpr(2) * lam())))},
               {"unit intervals on the left", render(LambdaExpr(2) * lam())},
               {"unit intervals on the right", render(lam()) + " (counted twice)"}};
  bool gaps = true;
  for (unsigned long n : {12UL, 120UL, 1200UL}) {
    gaps = gaps && oracle_exact(r.missing_terms, FiniteAssignment(n)) ==
                       mpq_class(static_cast<unsigned long>(mapping_gap_brute(MappingScheme::InterleaveIntegers, n)));
  }
  r.evidence.push_back(check("integers left out by enumeration", gaps, "N=12,120,1200"));
  r.evidence.push_back(check("|Z| = |N_2lam|", card(SetExpr::integers()) == card(SetExpr::segment(LambdaExpr(2) * lam())),
                             render(card(SetExpr::integers()))));
  // even-function split with f = x^2 over unit intervals
  const LambdaExpr right = sum_eval(SumSpec{"n", q(1), lam(), {PolySummand{{q(1, 3), q(-1), q(1)}}}});
  const ExactSequence left = [](const mpz_class& n) {
    mpq_class total(0);
    for (mpz_class k = -n; k < n; ++k) {
      const mpz_class k1 = k + 1;
      total += mpq_class(k1 * k1 * k1 - k * k * k, 3);
    }
    return total;
  };
  r.evidence.push_back(identity_evidence("2N unit integrals of x^2 equal twice N of them",
                                         oracle_identity(left, LambdaExpr(2) * right, {12, 120, 1200})));
  const FuncExpr sq = FuncExpr::monomial(Scalar(1), 2);
  const IntegralCheckReport whole = integral_check(sq, Scalar(-2), Scalar(2));
  const IntegralCheckReport half = integral_check(sq, Scalar(0), Scalar(2));
  r.evidence.push_back(check("even function split on [-2,2]",
                             whole.match && half.match && whole.standard_part == Scalar(2) * half.standard_part,
                             render(whole.standard_part) + " = 2*" + render(half.standard_part)));
  set_catalog(r, LambdaExpr(2) * lam());
  return r;
}

ScenarioReport rationals_bijection(const ScenarioParams&) {
  ScenarioReport r;
  r.name = "rationals_bijection";
  r.classical_claim = "the zigzag through the numerator/denominator square pairs N with Q one-to-one";
  r.classical_value = "|Q| = |N|";
  const LambdaExpr gap = mapping_gap(MappingScheme::ZigzagRationals, lam());
  const DiagonalDecomposition d = double_riemann_diag(Scalar(1));
  r.corrected = ScenarioValue::of(gap);
  r.missing_terms = gap;
  const LambdaExpr excluded = divide(lam() - q(3), lam() - q(2));
  const LambdaExpr excluded_power = pow(excluded, lam());
  r.details = {{"|Q|", render(card(SetExpr::rationals()))},
               {"diagonals", render(lam() + (lam() - q(1)))},
               {"((lam-3)/(lam-2))^lam", render(excluded_power)}};
  bool gaps = true;
  for (unsigned long n : {12UL, 120UL}) {
    gaps = gaps && oracle_exact(gap, FiniteAssignment(n)) ==
                       mpq_class(static_cast<unsigned long>(mapping_gap_brute(MappingScheme::ZigzagRationals, n)));
  }
  r.evidence.push_back(check("unreached diagonals by enumeration", gaps, "N=12,120"));
  r.evidence.push_back(identity_evidence("dots in the two triangles",
                                         oracle_identity(d.first_triangle + d.second_triangle, lam() * lam(),
                                                         {12, 120, 1200})));
  const Scalar st = standard_part(excluded_power).value;
  r.evidence.push_back(check("left-out element to the power lam", st == Scalar::exp_of(-1), render(st)));
  // the catalog counts both triangles with λ diagonals
  r.catalog = ScenarioValue::of(lam());
  r.catalog_match = lam() - gap == q(1);
  r.catalog_note = "exact count lam-1; the catalog's lam treats the second triangle as having lam diagonals, "
                   "one more than the square has";
  return r;
}

ScenarioReport divergent_geometric(const ScenarioParams& p) {
  const long base = p.base.value_or(2);
  if (base < 2) throw Error(ErrorCode::Domain, "divergent_geometric needs an integer ratio b >= 2");
  ScenarioReport r;
  r.name = "divergent_geometric";
  const LambdaExpr b(base);
  r.classical_claim = "s = 1 + b s, so s = 1/(1-b)";
  mpq_class classical(1, 1 - base);
  classical.canonicalize();
  r.classical_value = rational_to_string(classical);
  const LambdaExpr s = sum_geometric(b, lam());
  const LambdaExpr b_lam = pow(b, lam());
  r.corrected = ScenarioValue::of(s);
  r.missing_terms = b * b_lam;
  r.details = {{"s", render(s)}, {"1 + b(s - b^lam)", render(q(1) + b * (s - b_lam))}};
  r.evidence.push_back(check("s = 1 + b(s - b^lam)", s == q(1) + b * (s - b_lam), render(s)));
  r.evidence.push_back(identity_evidence(
      "partial sums", oracle_identity(SumSpec{"n", q(0), lam(), {GeometricSummand{b, {q(1)}}}}, s, {12, 120, 1200})));
  if (base == 2) {
    const mpq_class at20 = oracle_exact(s, FiniteAssignment(20));
    r.evidence.push_back(check("value at N=20", at20 == 2097151, at20.get_str()));
  }
  set_catalog(r, LambdaExpr::monomial(Scalar(mpq_class(base, base - 1)), ScaleKey::exponential(base)) -
                     LambdaExpr(mpq_class(1, base - 1)));
  return r;
}

ScenarioReport repeating_nines(const ScenarioParams&) {
  ScenarioReport r;
  r.name = "repeating_nines";
  r.classical_claim = "10x = 9 + x, so 0.999... = 1";
  r.classical_value = "1";
  const LambdaExpr x = q(9) * (sum_geometric(q(1, 10), lam()) - q(1));
  const LambdaExpr ten_lam = pow(q(10), lam());
  const LambdaExpr power = pow(x, ten_lam);
  r.corrected = ScenarioValue::of(x);
  r.missing_terms = q(1) - x;
  const Scalar st = standard_part(power).value;
  r.details = {{"x", render(x)}, {"x^(10^lam)", render(power)}, {"st(x^(10^lam))", render(st)}};
  r.evidence.push_back(identity_evidence(
      "partial sums of 9/10^n",
      oracle_identity(SumSpec{"n", q(1), lam(), {GeometricSummand{q(1, 10), {q(9)}}}}, x, {12, 120, 1200})));
  r.evidence.push_back(check("x < 1", compare(x, q(1)) == OrderDecision::Less, order_text(compare(x, q(1)))));
  r.evidence.push_back(check("x^(10^lam) has standard part e^(-1)", st == Scalar::exp_of(-1), render(st)));
  bool bounded = true;
  std::ostringstream detail;
  for (long n = 1; n <= 5; ++n) {
    mpz_class ten;
    mpz_ui_pow_ui(ten.get_mpz_t(), 10, static_cast<unsigned long>(n));
    const Interval v = pow(Interval::exact(mpq_class(ten - 1, ten), kOraclePrecision), mpq_class(ten));
    const double err = (v - Scalar::exp_of(-1).eval(kOraclePrecision)).magnitude();
    const double limit = std::pow(10.0, static_cast<double>(-n));
    bounded = bounded && err <= limit;
    detail << "N=" << n << ": " << err << "; ";
  }
  r.evidence.push_back(check("|(1-10^-N)^(10^N) - e^-1| <= 10^-N for N=1..5", bounded, detail.str()));
  set_catalog(r, q(1) - LambdaExpr::monomial(Scalar(1), ScaleKey::exponential(mpq_class(1, 10))));
  return r;
}

// Explicit duplication of a dictionary holding every word of length 1..max_len.
struct Dictionaries {
  std::size_t copies = 0;
  std::size_t longest = 0;
  bool all_empty = false;
};

Dictionaries duplicate(unsigned alphabet, unsigned max_len, unsigned steps) {
  std::vector<std::set<std::string>> books(1);
  std::vector<std::string> frontier{""};
  for (unsigned len = 1; len <= max_len; ++len) {
    std::vector<std::string> next;
    for (const auto& w : frontier) {
      for (unsigned c = 0; c < alphabet; ++c) next.push_back(w + static_cast<char>('a' + c));
    }
    books[0].insert(next.begin(), next.end());
    frontier = std::move(next);
  }
  for (unsigned s = 0; s < steps; ++s) {
    std::vector<std::set<std::string>> out;
    for (const auto& book : books) {
      std::vector<std::set<std::string>> volumes(alphabet);
      for (const auto& w : book) {
        if (w.size() > 1) volumes[static_cast<unsigned>(w[0] - 'a')].insert(w.substr(1));
      }
      for (auto& v : volumes) out.push_back(std::move(v));
    }
    books = std::move(out);
  }
  Dictionaries d;
  d.copies = books.size();
  d.all_empty = true;
  for (const auto& book : books) {
    for (const auto& w : book) d.longest = std::max(d.longest, w.size());
    if (!book.empty()) d.all_empty = false;
  }
  return d;
}

ScenarioReport hyperwebster(const ScenarioParams& p) {
  const LambdaExpr steps = p.steps.value_or(lam());
  if (!steps.is_exact() || compare(steps, q(0)) == OrderDecision::Less ||
      compare(steps, lam()) == OrderDecision::Greater) {
    throw Error(ErrorCode::Domain, "hyperwebster steps must lie between 0 and lam");
  }
  ScenarioReport r;
  r.name = "hyperwebster";
  r.classical_claim = "stripping the first letter turns each volume into a full copy, forever";
  r.classical_value = "26^k identical complete dictionaries for every k";
  const LambdaExpr copies = pow(q(26), steps);
  const LambdaExpr longest = lam() - steps;
  const bool empty = longest.is_zero();
  r.corrected = ScenarioValue::of(copies);
  r.missing_terms = steps;
  r.details = {{"copies", render(copies)},
               {"max word length", render(longest)},
               {"dictionaries empty", empty ? "yes" : "no"}};

  bool sim = true;
  std::ostringstream detail;
  constexpr unsigned kLen = 3;
  for (unsigned k = 0; k <= kLen; ++k) {
    const Dictionaries d = duplicate(26, kLen, k);
    const FiniteAssignment at(kLen);
    const bool copies_ok = mpq_class(static_cast<unsigned long>(d.copies)) == oracle_exact(pow(q(26), q(k)), at);
    const bool length_ok = mpq_class(static_cast<unsigned long>(d.longest)) == oracle_exact(lam() - q(k), at);
    const bool empty_ok = d.all_empty == (k == kLen);
    sim = sim && copies_ok && length_ok && empty_ok;
    detail << "k=" << k << ": " << d.copies << " copies, longest " << d.longest << "; ";
  }
  r.evidence.push_back(check("explicit duplication, 26 letters, words up to length 3", sim, detail.str()));
  if (const auto poly = steps.as_polynomial(); poly && poly->size() <= 1) {
    r.evidence.push_back(check("finite steps leave a finite number of copies", copies.is_constant(), render(copies)));
  } else {
    r.evidence.push_back(check("steps = lam empties every copy", empty == (steps == lam()), render(longest)));
  }
  if (steps == lam()) {
    set_catalog(r, LambdaExpr::monomial(Scalar(1), ScaleKey::exponential(26)));
  } else if (const auto k = steps.as_constant(); k && k->as_rational()) {
    set_catalog(r, LambdaExpr(Scalar(26).pow(*k->as_rational())));
  } else {
    set_catalog(r, copies);
  }
  return r;
}

ScenarioReport euler_alternating(const ScenarioParams& p) {
  const unsigned long m = p.m.value_or(1);
  if (m == 0) throw Error(ErrorCode::Domain, "euler_alternating needs m >= 1");
  ScenarioReport r;
  r.name = "euler_alternating";
  r.classical_claim = "1 - 2x + 3x^2 - ... = 1/(1+x)^2 at x = 1";
  r.classical_value = "1/4";
  const LambdaExpr corrected = sum_alternating_linear(static_cast<unsigned>(m));
  const LambdaExpr half = LambdaExpr(static_cast<long>(m)) * lam();
  const LambdaExpr odds = LambdaExpr(2) * sum_faulhaber(1, half) - half;
  const LambdaExpr evens = LambdaExpr(2) * sum_faulhaber(1, half);
  r.corrected = ScenarioValue::of(corrected);
  r.missing_terms = corrected - q(1, 4);
  r.details = {{"terms", render(LambdaExpr(2) * half)}, {"odd part", render(odds)}, {"even part", render(evens)}};
  const LambdaExpr upper = LambdaExpr(2) * half;
  std::vector<mpz_class> ns{12, 120, 1200};
  if (m <= 2) ns.push_back(10000);
  r.evidence.push_back(identity_evidence(
      "alternating partial sums",
      oracle_identity(SumSpec{"n", q(1), upper, {AlternatingPolySummand{{q(0), q(1)}}}}, corrected, ns)));
  r.evidence.push_back(check("odd part minus even part", odds - evens == corrected, render(odds - evens)));
  r.evidence.push_back(expect_error("lam terms are refused", ErrorCode::ParityDependent,
                                    [] { (void)sum_alternating_linear(LambdaExpr::lambda()); }));
  r.evidence.push_back(expect_error("(-1)^lam is refused", ErrorCode::ParityDependent,
                                    [] { (void)pow(LambdaExpr(-1), LambdaExpr::lambda()); }));
  set_catalog(r, LambdaExpr(-static_cast<long>(m)) * lam());
  return r;
}

ScenarioReport ramanujan(const ScenarioParams&) {
  ScenarioReport r;
  r.name = "ramanujan";
  r.classical_claim = "c - 4c = 1 - 2 + 3 - ... = 1/4, so c = -1/12";
  r.classical_value = "-1/12";
  const LambdaExpr two_lam = LambdaExpr(2) * lam();
  const LambdaExpr c = sum_faulhaber(1, two_lam);
  const LambdaExpr s1 = sum_faulhaber(1, lam());
  // -3c = alt - 4(c - S1) solved for c
  const LambdaExpr solved = sum_alternating_linear(1U) + LambdaExpr(4) * s1;
  r.corrected = ScenarioValue::of(c);
  r.missing_terms = LambdaExpr(4) * (c - s1);
  r.details = {{"entries of padded 4c", render(LambdaExpr(4) * lam())},
               {"unmatched numbers", render(lam())},
               {"4(c - S1)", render(r.missing_terms)},
               {"c from -3c = alt - 4(c - S1)", render(solved)}};
  r.evidence.push_back(identity_evidence(
      "sum of the first 2N numbers",
      oracle_identity(SumSpec{"n", q(1), two_lam, {PolySummand{{q(0), q(1)}}}}, c, default_oracle_ns())));
  r.evidence.push_back(check("solved equation agrees", solved == c, render(solved)));
  const ExactSequence tail = [](const mpz_class& n) {
    mpz_class total = 0;
    for (mpz_class k = n + 1; k <= 2 * n; ++k) total += 4 * k;
    return mpq_class(total);
  };
  r.evidence.push_back(identity_evidence("missing block by brute force", oracle_identity(tail, r.missing_terms, {12, 120, 1200})));
  set_catalog(r, LambdaExpr(2) * lam() * lam() + lam());
  return r;
}

ScenarioReport riemann_rearrangement(const ScenarioParams&) {
  ScenarioReport r;
  r.name = "riemann_rearrangement";
  r.classical_claim = "regrouping 1 - 1/2 + 1/3 - ... gives (1/2)(1 - 1/2 + 1/3 - ...)";
  r.classical_value = "ln(2) = ln(2)/2";
  const LambdaExpr half = q(1, 2) * lam();
  const LambdaExpr quarter = q(1, 4) * lam();
  const LambdaExpr odd = sum_shifted_reciprocal(2, q(-1), half);
  const LambdaExpr even = sum_shifted_reciprocal(2, q(0), half);
  const LambdaExpr series = odd - sum_shifted_reciprocal(4, q(-2), quarter) - sum_shifted_reciprocal(4, q(0), quarter);
  const LambdaExpr rearranged = sum_shifted_reciprocal(4, q(-2), half) - sum_shifted_reciprocal(4, q(0), half);
  const LambdaExpr miss_2 = sum_shifted_reciprocal(4, lam() - q(2), quarter);
  const LambdaExpr miss_3 = sum_shifted_reciprocal(4, lam(), quarter);
  const LambdaExpr restored = rearranged + miss_2 + miss_3;
  const Scalar st_restored = standard_part(restored).value;
  r.corrected = ScenarioValue::of(st_restored);
  r.missing_terms = miss_2 + miss_3;
  const Scalar ln2 = Scalar::ln_of(2);
  r.details = {{"lengths", "lam/2, lam/4, lam/4"},
               {"st(rearranged)", render(standard_part(rearranged).value)},
               {"st(missing from 1/(4n-2))", render(standard_part(miss_2).value)},
               {"st(missing from 1/(4n))", render(standard_part(miss_3).value)},
               {"st(missing total)", render(standard_part(r.missing_terms).value)}};

  r.evidence.push_back(check("original series has standard part ln 2",
                             standard_part(series).value == ln2 && standard_part(odd - even).value == ln2,
                             render(standard_part(series).value)));
  r.evidence.push_back(check("rearranged series has standard part ln(2)/2",
                             standard_part(rearranged).value == ln2 / Scalar(2), render(standard_part(rearranged).value)));
  r.evidence.push_back(check("missing tails total ln(2)/2", standard_part(r.missing_terms).value == ln2 / Scalar(2),
                             render(standard_part(r.missing_terms).value)));
  r.evidence.push_back(check("restored series equals the original", standard_part(series - restored).value.is_zero(),
                             render(standard_part(series - restored))));

  const std::vector<long> ns{10000, 100000, 1000000};
  const Interval quarter_ln2 = (ln2 / Scalar(4)).eval(kOraclePrecision);
  const Interval full_ln2 = ln2.eval(kOraclePrecision);
  auto tail = [](long n, long shift) {
    return oracle_sum_interval(SumSpec{"n", q(1), q(1, 4) * LambdaExpr::lambda(),
                                       {ReciprocalSummand{Scalar(1), 4, LambdaExpr::lambda() + q(shift)}}},
                               FiniteAssignment(n, {4}));
  };
  const BoundResult tail_bound = bound_over(ns, 1.0, [&](long n) { return tail(n, 0) - quarter_ln2; });
  r.evidence.push_back(check("|sum 1/(N+4n) - ln(2)/4| <= 1/N", tail_bound.pass, tail_bound.detail));
  const BoundResult total_bound = bound_over(ns, 10.0, [&](long n) {
    const Interval rearr = oracle_sum_interval(
        SumSpec{"n", q(1), q(1, 2) * LambdaExpr::lambda(),
                {ReciprocalSummand{Scalar(1), 4, q(-2)}, ReciprocalSummand{Scalar(-1), 4, q(0)}}},
        FiniteAssignment(n, {4}));
    return rearr + tail(n, -2) + tail(n, 0) - full_ln2;
  });
  r.evidence.push_back(check("|restored total - ln 2| <= 10/N", total_bound.pass, total_bound.detail));
  const NumericSequence tail_seq = [&](const mpz_class& n, long) { return tail(n.get_si(), 0); };
  r.evidence.push_back(convergence_evidence("tail convergence to ln(2)/4",
                                            oracle_convergence(tail_seq, ln2 / Scalar(4), {10000, 100000, 1000000}), 1.0));
  set_catalog(r, ln2);
  return r;
}

ScenarioReport diagonal_count(const ScenarioParams&) {
  ScenarioReport r;
  r.name = "diagonal_count";
  r.classical_claim = "infinities are only countable or uncountable; B has no numerical size";
  r.classical_value = "|B| uncountable";
  const DiagonalInfo info = diag_info_count(lam(), lam());
  const LambdaExpr strings = card(SetExpr::strings(2));
  r.corrected = ScenarioValue::of(info.digits);
  r.missing_terms = strings - info.specified;
  r.details = {{"digits in the list", render(info.digits)},
               {"strings specified", render(info.specified)},
               {"|B|", render(strings)},
               {"2^lam vs lam^lam", order_text(compare(strings, card(SetExpr::strings(1, lam())) * pow(lam(), lam())))}};
  r.evidence.push_back(check("lam < 2^lam", compare(info.specified, strings) == OrderDecision::Less, "Less"));
  r.evidence.push_back(check("2^lam < lam^lam", compare(strings, pow(lam(), lam())) == OrderDecision::Less, "Less"));
  r.evidence.push_back(check("lam^lam - 2^lam positive at large N",
                             oracle_sign(pow(lam(), lam()) - strings, kHugeN) == 1, "N=" + kHugeN.get_str()));
  bool flipped_missing = true;
  for (unsigned n = 2; n <= 12; ++n) {
    // list the first n strings in a scrambled order, flip the diagonal
    std::vector<std::uint32_t> list;
    for (std::uint32_t i = 0; i < n; ++i) list.push_back((i * 2654435761U) & ((1U << n) - 1));
    std::uint32_t flipped = 0;
    for (unsigned i = 0; i < n; ++i) {
      if (!((list[i] >> i) & 1U)) flipped |= 1U << i;
    }
    flipped_missing = flipped_missing && std::find(list.begin(), list.end(), flipped) == list.end();
  }
  r.evidence.push_back(check("flipped diagonal is never listed, n = 2..12", flipped_missing, "enumerated"));
  r.catalog = ScenarioValue::of(lam() * lam());
  r.catalog_match = info.digits == lam() * lam() && info.specified == lam();
  r.catalog_note = "digits lam^2, strings lam";
  return r;
}

using Runner = ScenarioReport (*)(const ScenarioParams&);

const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> r{
      {"galileo", galileo},
      {"even_odd_riemann", even_odd_riemann},
      {"integers_bijection", integers_bijection},
      {"rationals_bijection", rationals_bijection},
      {"divergent_geometric", divergent_geometric},
      {"repeating_nines", repeating_nines},
      {"hyperwebster", hyperwebster},
      {"euler_alternating", euler_alternating},
      {"ramanujan", ramanujan},
      {"riemann_rearrangement", riemann_rearrangement},
      {"diagonal_count", diagonal_count},
  };
  return r;
}

}  // namespace

std::string ScenarioValue::to_string() const {
  if (expr) return render(*expr);
  if (scalar) return render(*scalar);
  return "";
}

bool ScenarioReport::evidence_passed() const {
  return !evidence.empty() && std::all_of(evidence.begin(), evidence.end(), [](const EvidenceItem& e) { return e.pass; });
}

std::vector<std::string> scenario_names() {
  std::vector<std::string> names;
  for (const auto& [name, run] : registry()) names.push_back(name);
  return names;
}

ScenarioReport run_scenario(const std::string& name, const ScenarioParams& params) {
  for (const auto& [n, run] : registry()) {
    if (n == name) return run(params);
  }
  throw Error(ErrorCode::UnknownScenario, "unknown scenario: " + name);
}

}  // namespace infcalc

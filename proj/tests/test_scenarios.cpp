#include <doctest.h>

#include "infcalc/error.hpp"
#include "infcalc/render.hpp"
#include "infcalc/scenarios.hpp"

using namespace infcalc;

namespace {

const LambdaExpr lam = LambdaExpr::lambda();

LambdaExpr q(long n, long d = 1) { return LambdaExpr(mpq_class(n, d)); }

ScenarioReport run_checked(const std::string& name, const ScenarioParams& p = {}) {
  ScenarioReport r = run_scenario(name, p);
  for (const auto& e : r.evidence) {
    INFO(name << ": " << e.label << " -- " << e.detail);
    CHECK(e.pass);
  }
  CHECK(r.evidence_passed());
  CHECK(r.name == name);
  CHECK_FALSE(r.classical_claim.empty());
  return r;
}

}  // namespace

TEST_CASE("scenario registry") {
  const auto names = scenario_names();
  CHECK(names.size() == 11);
  try {
    run_scenario("hilbert_hotel");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownScenario);
  }
}

TEST_CASE("galileo") {
  const auto r = run_checked("galileo");
  CHECK(*r.corrected.expr == lam * lam);
  CHECK(r.missing_terms == lam * lam - lam);
  CHECK(r.catalog_match);
}

TEST_CASE("even_odd_riemann") {
  const auto r = run_checked("even_odd_riemann");
  CHECK(*r.corrected.expr == q(2) * lam);
  CHECK(r.missing_terms == lam);
  CHECK(r.catalog_match);
}

TEST_CASE("integers_bijection") {
  const auto r = run_checked("integers_bijection");
  CHECK(*r.corrected.expr == q(2) * lam);
  CHECK(r.missing_terms == lam);
  CHECK(r.catalog_match);
}

TEST_CASE("rationals_bijection") {
  const auto r = run_checked("rationals_bijection");
  CHECK(*r.corrected.expr == lam - q(1));
  CHECK(*r.catalog.expr == lam);
  CHECK(r.catalog_match);
  CHECK_FALSE(r.catalog_note.empty());
}

TEST_CASE("divergent_geometric") {
  auto r = run_checked("divergent_geometric");
  CHECK(render(*r.corrected.expr) == "2*2^lam - 1");
  CHECK(r.classical_value == "-1");
  CHECK(r.catalog_match);

  ScenarioParams p;
  p.base = 3;
  r = run_checked("divergent_geometric", p);
  CHECK(*r.corrected.expr == q(3, 2) * pow(q(3), lam) - q(1, 2));
  CHECK(r.missing_terms == q(3) * pow(q(3), lam));
  CHECK(r.catalog_match);

  p.base = 1;
  CHECK_THROWS_AS(run_scenario("divergent_geometric", p), Error);
}

TEST_CASE("repeating_nines") {
  const auto r = run_checked("repeating_nines");
  CHECK(*r.corrected.expr == q(1) - pow(q(1, 10), lam));
  CHECK(r.missing_terms == pow(q(1, 10), lam));
  CHECK(r.catalog_match);
}

TEST_CASE("hyperwebster") {
  auto r = run_checked("hyperwebster");
  CHECK(*r.corrected.expr == pow(q(26), lam));
  CHECK(r.catalog_match);
  bool empty_listed = false;
  for (const auto& [k, v] : r.details) {
    if (k == "dictionaries empty") empty_listed = v == "yes";
  }
  CHECK(empty_listed);

  ScenarioParams p;
  p.steps = q(5);
  r = run_checked("hyperwebster", p);
  CHECK(*r.corrected.expr == q(11881376));
  CHECK(r.catalog_match);

  p.steps = lam + q(1);
  CHECK_THROWS_AS(run_scenario("hyperwebster", p), Error);
}

TEST_CASE("euler_alternating") {
  auto r = run_checked("euler_alternating");
  CHECK(*r.corrected.expr == -lam);
  CHECK(r.classical_value == "1/4");
  CHECK(r.catalog_match);

  ScenarioParams p;
  p.m = 3;
  r = run_checked("euler_alternating", p);
  CHECK(*r.corrected.expr == q(-3) * lam);
  CHECK(r.catalog_match);

  p.m = 0;
  CHECK_THROWS_AS(run_scenario("euler_alternating", p), Error);
}

TEST_CASE("ramanujan") {
  const auto r = run_checked("ramanujan");
  CHECK(*r.corrected.expr == q(2) * lam * lam + lam);
  CHECK(r.missing_terms == q(6) * lam * lam + q(2) * lam);
  CHECK(r.catalog_match);
}

TEST_CASE("riemann_rearrangement") {
  const auto r = run_checked("riemann_rearrangement");
  CHECK(*r.corrected.scalar == Scalar::ln_of(2));
  CHECK(standard_part(r.missing_terms).value == Scalar::ln_of(2) / Scalar(2));
  CHECK(r.catalog_match);
}

TEST_CASE("diagonal_count") {
  const auto r = run_checked("diagonal_count");
  CHECK(*r.corrected.expr == lam * lam);
  CHECK(r.missing_terms == pow(q(2), lam) - lam);
  CHECK(r.catalog_match);
}

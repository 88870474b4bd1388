#include <doctest.h>

#include "../support/generators.hpp"
#include "plhvcsp/document.hpp"
#include "plhvcsp/errors.hpp"
#include "plhvcsp/oracle.hpp"
#include "plhvcsp/reference.hpp"

using namespace plhvcsp;
using gen::atom;
using gen::one;
using gen::var;

namespace {

ValuedStructure single(PLHCostFunction f) {
  ValuedStructure gamma;
  gamma["f"] = std::move(f);
  return gamma;
}

VcspInstance unary_instance() {
  VcspInstance inst;
  inst.variables = {"x"};
  inst.applications = {{"f", {0}}};
  return inst;
}

PLHCostFunction piece(const QFFormula& guard, const Term& value) {
  PLHCostFunction f;
  f.arity = 1;
  f.add_piece(guard, value);
  return f;
}

}  // namespace

TEST_CASE("brute_min matches the serial reference") {
  gen::Gen g(41);
  for (int trial = 0; trial < 200; ++trial) {
    FiniteValuedStructure delta;
    delta.domain_size = static_cast<std::size_t>(g.uniform(1, 4));
    // Small value ranges force ties, so argmin order matters.
    delta.tables["u"] = g.table(1, delta.domain_size, 0, 1, 20);
    delta.tables["b"] = g.table(2, delta.domain_size, 0, 1, 40);
    if (g.coin()) delta.tables["b"].values[0] = make_rational(1, 3);
    const auto inst = g.finite_instance(delta, g.uniform(1, 5), g.uniform(1, 5));
    const auto fast = brute_min(delta, inst);
    const auto slow = reference::brute_min_serial(delta, inst);
    CHECK(fast.value == slow.value);
    CHECK(fast.argmin == slow.argmin);
  }
}

TEST_CASE("brute_min edge cases") {
  FiniteValuedStructure delta;
  delta.domain_size = 3;
  delta.tables["f"] = FiniteTable{1, {ExtRational::infinity(), ExtRational::infinity(),
                                      ExtRational::infinity()}};
  VcspInstance inst;
  inst.variables = {"x", "y"};
  inst.applications = {{"f", {1}}};
  CHECK(brute_min(delta, inst).value.is_infinite());

  VcspInstance empty;
  empty.variables = {"x"};
  const auto r = brute_min(delta, empty);
  CHECK(r.value == ExtRational(0));
  CHECK(r.argmin == std::vector<int>{0});

  delta.tables["f"] = FiniteTable{1, {Rational(2), Rational(-1), Rational(-1)}};
  const auto m = brute_min(delta, inst);
  CHECK(m.value == ExtRational(-1));
  CHECK(m.argmin == std::vector<int>{0, 1});

  CHECK_THROWS_AS(brute_min(delta, inst, 5), SizeGuardError);
}

TEST_CASE("large values take the exact path") {
  FiniteValuedStructure delta;
  delta.domain_size = 2;
  const Rational big = Rational("123456789012345678901234567890");
  delta.tables["f"] = FiniteTable{1, {ExtRational(big), ExtRational(Rational(big - make_rational(1, 7)))}};
  VcspInstance inst;
  inst.variables = {"x", "y"};
  inst.applications = {{"f", {0}}, {"f", {1}}};
  const auto r = brute_min(delta, inst);
  CHECK(r.value == ExtRational(2 * big - make_rational(2, 7)));
  CHECK(r.value == reference::brute_min_serial(delta, inst).value);
}

TEST_CASE("q_decide on the running example") {
  const auto doc = parse_document(read_text_file(std::string(PLHVCSP_TEST_DATA) + "/example2.json"));
  REQUIRE(doc.instance);
  const auto yes = q_decide(doc.structure, *doc.instance, Rational(0));
  CHECK(yes.accept);
  REQUIRE(yes.witness.size() == doc.instance->variables.size());
  CHECK(evaluate_objective(doc.structure, *doc.instance, yes.witness) <= ExtRational(0));
  CHECK_FALSE(q_decide(doc.structure, *doc.instance, make_rational(-1, 1000)).accept);
  const auto inf = q_infimum(doc.structure, *doc.instance);
  CHECK(inf.kind == InfimumKind::Attained);
  CHECK(inf.value == 0);
}

TEST_CASE("q_infimum kinds") {
  const auto inst = unary_instance();
  CHECK(q_infimum(single(piece(QFFormula::top(), var(0))), inst).kind ==
        InfimumKind::MinusInfinity);

  const auto open = q_infimum(single(piece(atom(var(0), RawRel::Greater, one(1)), var(0))), inst);
  CHECK(open.kind == InfimumKind::NotAttained);
  CHECK(open.value == 1);

  const auto closed =
      q_infimum(single(piece(atom(var(0), RawRel::GreaterEq, one(1)), var(0, 2))), inst);
  CHECK(closed.kind == InfimumKind::Attained);
  CHECK(closed.value == 2);

  PLHCostFunction never;
  never.arity = 1;
  CHECK(q_infimum(single(never), inst).kind == InfimumKind::Infeasible);
}

TEST_CASE("q_decide thresholds on an open guard") {
  const auto gamma = single(piece(atom(var(0), RawRel::Greater, one(1)), var(0)));
  const auto inst = unary_instance();
  CHECK_FALSE(q_decide(gamma, inst, Rational(1)).accept);
  const auto yes = q_decide(gamma, inst, make_rational(11, 10));
  CHECK(yes.accept);
  REQUIRE(yes.witness.size() == 1);
  CHECK(yes.witness[0] > 1);
  CHECK(yes.witness[0] <= make_rational(11, 10));
}

TEST_CASE("selection_rows covers the chosen guards") {
  PLHCostFunction f;
  f.arity = 2;
  f.add_piece(atom(var(0), RawRel::Less, var(1)), one(0));
  f.add_piece(atom(var(1), RawRel::LessEq, var(0)), one(1));
  const auto gamma = single(f);
  VcspInstance inst;
  inst.variables = {"x", "y"};
  inst.applications = {{"f", {0, 1}}, {"f", {1, 0}}};
  const auto rows = selection_rows(gamma, inst, {0, 0});
  CHECK(rows.size() == 2);
  CHECK_FALSE(strict_feasibility(2, rows).feasible);
  CHECK(strict_feasibility(2, selection_rows(gamma, inst, {1, 1})).feasible);
}

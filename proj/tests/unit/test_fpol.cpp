#include <doctest.h>

#include "../support/generators.hpp"
#include "plhvcsp/errors.hpp"
#include "plhvcsp/fpol.hpp"
#include "plhvcsp/reference.hpp"

using namespace plhvcsp;
using gen::atom;
using gen::one;
using gen::var;

namespace {

int apply(const FiniteOperation& g, std::vector<int> args) { return g.apply(args); }

FiniteTable table(int arity, std::vector<ExtRational> values) {
  return FiniteTable{arity, std::move(values)};
}

}  // namespace

TEST_CASE("parse_op") {
  CHECK(parse_op("min").kind == OpKind::Min);
  CHECK(parse_op("max").kind == OpKind::Max);
  CHECK(parse_op("avg").kind == OpKind::Avg);
  CHECK(parse_op("median").kind == OpKind::Median);
  const auto s2 = parse_op("s2");
  CHECK(s2.kind == OpKind::KthSmallest);
  CHECK(s2.index == 2);
  CHECK(parse_op("kth:3").index == 3);
  CHECK_THROWS_AS(parse_op("sx"), Error);
  CHECK_THROWS_AS(parse_op("mode"), Error);
}

TEST_CASE("builtin operations") {
  const auto mn = builtin_operation(parse_op("min"), 3, 4);
  const auto mx = builtin_operation(parse_op("max"), 3, 4);
  const auto s2 = builtin_operation(parse_op("s2"), 3, 4);
  const auto med = builtin_operation(parse_op("median"), 4, 4);
  CHECK(apply(mn, {3, 1, 2}) == 1);
  CHECK(apply(mx, {3, 1, 2}) == 3);
  CHECK(apply(s2, {3, 1, 2}) == 2);
  CHECK(apply(med, {3, 0, 2, 1}) == 1);
  CHECK_THROWS_AS(builtin_operation(parse_op("s4"), 3, 4), Error);

  const std::vector<Rational> labels{Rational(0), Rational(1), Rational(2)};
  CHECK_THROWS_AS(builtin_operation(parse_op("avg"), 2, 3, labels), DomainNotClosed);
  const auto avg = builtin_operation(parse_op("avg"), 3, 1, std::vector<Rational>{Rational(5)});
  CHECK(apply(avg, {0, 0, 0}) == 0);
  CHECK_THROWS_AS(builtin_operation(parse_op("avg"), 2, 3), DomainNotClosed);
}

TEST_CASE("symmetry predicates") {
  const auto mn = builtin_operation(parse_op("min"), 3, 3);
  const auto med = builtin_operation(parse_op("median"), 3, 3);
  CHECK(is_fully_symmetric(mn));
  CHECK(is_totally_symmetric(mn));
  CHECK(is_fully_symmetric(med));
  // median(0,0,1) = 0 but median(0,1,1) = 1
  CHECK_FALSE(is_totally_symmetric(med));
  FiniteOperation proj = mn;
  for (std::size_t i = 0; i < proj.table.size(); ++i) {
    std::vector<int> t(3);
    decode_tuple(i, 3, t);
    proj.table[i] = t[0];
  }
  CHECK_FALSE(is_fully_symmetric(proj));
  CHECK_FALSE(is_totally_symmetric(proj));
}

TEST_CASE("fractional operations validate") {
  const auto w = omega_sub(3, 4);
  CHECK_NOTHROW(w.validate());
  CHECK(w.arity() == 3);
  REQUIRE(w.support.size() == 3);
  for (const auto& [g, weight] : w.support) CHECK(weight == make_rational(1, 3));
  CHECK_NOTHROW(omega_min(2, 3).validate());

  FractionalOperation bad = omega_sub(2, 3);
  bad.support[0].second = make_rational(2, 3);
  CHECK_THROWS_AS(bad.validate(), Error);
  FractionalOperation mixed = omega_sub(2, 3);
  mixed.support[1].first = builtin_operation(parse_op("min"), 3, 3);
  CHECK_THROWS_AS(mixed.validate(), Error);
}

TEST_CASE("submodularity and monotonicity witnesses") {
  // f(x, y) = min(x, y) on {0, 1}: supermodular, not submodular
  const auto f = table(2, {Rational(0), Rational(0), Rational(0), Rational(1)});
  const auto w = submodularity_witness(f, 2);
  REQUIRE(w);
  CHECK(w->first == std::vector<int>{0, 1});
  CHECK(w->second == std::vector<int>{1, 0});
  CHECK(is_componentwise_increasing(f, 2));

  const auto g = table(1, {Rational(1), Rational(0)});
  const auto m = monotonicity_witness(g, 2);
  REQUIRE(m);
  CHECK(m->first == std::vector<int>{0});
  CHECK(m->second == 0);
  CHECK_FALSE(submodularity_witness(g, 2));
}

TEST_CASE("improves agrees with the serial reference") {
  gen::Gen g(53);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = static_cast<std::size_t>(g.uniform(2, 3));
    const int arity = g.uniform(1, 2);
    const auto f = g.table(arity, n, 0, 3, 15);
    const int k = g.uniform(2, 3);
    const FractionalOperation omega = g.coin() ? omega_sub(k, n) : omega_min(k, n);
    const auto fast = improves(omega, f, n);
    const auto slow = reference::improves_serial(omega, f, n);
    CHECK(fast.improved == slow.improved);
    if (!fast.improved) CHECK(fast.witness.size() == static_cast<std::size_t>(k));
  }
}

TEST_CASE("omega_sub of arity 2 improves exactly the submodular tables") {
  gen::Gen g(59);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = static_cast<std::size_t>(g.uniform(2, 3));
    const auto f = g.table(2, n, 0, 2, 0);
    CHECK(improves(omega_sub(2, n), f, n).improved == !submodularity_witness(f, n).has_value());
  }
}

TEST_CASE("+inf entries break the min/increasing equivalence") {
  // f(0) = +inf, f(1) = 0: dom(f) = {1} is trivially improved by min, yet f
  // decreases from 0 to 1.
  const auto f = table(1, {ExtRational::infinity(), Rational(0)});
  CHECK(improves(omega_min(2, 2), f, 2).improved);
  CHECK_FALSE(is_componentwise_increasing(f, 2));
}

TEST_CASE("structure checks name the failing symbol") {
  FiniteValuedStructure delta;
  delta.domain_size = 2;
  delta.tables["a"] = table(1, {Rational(0), Rational(5)});
  delta.tables["b"] = table(2, {Rational(0), Rational(0), Rational(0), Rational(1)});
  const auto r = check_structure_improved(delta, omega_sub(2, 2));
  CHECK_FALSE(r.improved);
  CHECK(r.symbol == "b");
  CHECK(r.witness.size() == 2);
  delta.tables.erase("b");
  CHECK(check_structure_improved(delta, omega_sub(2, 2)).improved);
}

TEST_CASE("multiset structures and fractional homomorphisms") {
  FiniteValuedStructure delta;
  delta.domain_size = 2;
  delta.tables["u"] = table(1, {Rational(1), Rational(0)});
  delta.tables["f"] = table(2, {Rational(2), Rational(0), Rational(0), Rational(2)});

  const auto one_ms = multiset_structure(delta, 1);
  CHECK(one_ms.multisets.size() == 2);
  CHECK(one_ms.structure.tables == delta.tables);

  const auto two = multiset_structure(delta, 2);
  CHECK(two.multisets.size() == 3);
  CHECK(two.multisets[1] == std::vector<int>{0, 1});
  // u on {0, 1}: (1 + 0) / 2
  CHECK(two.structure.tables.at("u").values[1] == ExtRational(make_rational(1, 2)));
  // f on ({0,0}, {0,1}): either pairing gives (2 + 0) / 2
  CHECK(two.structure.tables.at("f").values[1] == ExtRational(Rational(1)));

  const auto self = check_fractional_homomorphism(delta, delta);
  CHECK(self.feasible);
  // f is not submodular on {0,1}, and the m = 2 structure does not map back
  CHECK(submodularity_witness(delta.tables.at("f"), 2));
  CHECK_FALSE(check_fractional_homomorphism(two.structure, delta).feasible);

  FiniteValuedStructure sub = delta;
  sub.tables["f"] = table(2, {Rational(0), Rational(1), Rational(1), Rational(0)});
  const auto sub2 = multiset_structure(sub, 2);
  const auto hom = check_fractional_homomorphism(sub2.structure, sub);
  CHECK(hom.feasible);
  Rational total = 0;
  for (const auto& [map, w] : hom.weights) total += w;
  CHECK(total == 1);

  CHECK_THROWS_AS(multiset_structure(delta, 4, 10), SizeGuardError);
}

TEST_CASE("certify_convex") {
  PLHCostFunction lin;
  lin.arity = 1;
  lin.add_piece(QFFormula::top(), var(0, 3));
  CHECK(certify_convex(lin).certified);

  PLHCostFunction abs;
  abs.arity = 1;
  abs.add_piece(atom(var(0), RawRel::GreaterEq, one(0)), var(0));
  abs.add_piece(atom(var(0), RawRel::Less, one(0)), var(0, -1));
  CHECK(certify_convex(abs).certified);

  PLHCostFunction concave;
  concave.arity = 1;
  concave.add_piece(QFFormula::top(), var(0));
  concave.add_piece(QFFormula::top(), var(0, -1));
  const auto c = certify_convex(concave);
  CHECK_FALSE(c.certified);
  CHECK_FALSE(c.reason.empty());

  PLHCostFunction partial;
  partial.arity = 1;
  partial.add_piece(atom(var(0), RawRel::Greater, one(0)), var(0));
  partial.add_piece(atom(var(0), RawRel::Less, one(0)), var(0, -1));
  CHECK_FALSE(certify_convex(partial).certified);
}

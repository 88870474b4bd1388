#include <doctest.h>

#include "../support/generators.hpp"
#include "../support/qe_oracle.hpp"
#include "plhvcsp/formula.hpp"

using namespace plhvcsp;
using gen::atom;
using gen::one;
using gen::var;

namespace {

Atom rel(Term l, Rel r, Term rhs) { return Atom::relation(std::move(l), r, std::move(rhs)); }
QFFormula single(Atom a) { return QFFormula{{Conjunction{std::move(a)}}}; }

bool negation_free_shapes(const QFFormula& f) {
  for (const auto& c : f.disjuncts)
    for (const auto& a : c)
      if (a.kind == Atom::Kind::Relation && a.rel == Rel::LessEq) return false;
  return true;
}

}  // namespace

TEST_CASE("normalize_atom") {
  SUBCASE("canonical atoms are unchanged") {
    CHECK(atom(var(0, 3), RawRel::Less, var(1, 2)) == single(rel(var(0, 3), Rel::Less, var(1, 2))));
  }
  SUBCASE("both coefficients negative flips the order") {
    CHECK(atom(var(0, -2), RawRel::Less, var(1, -4)) ==
          single(rel(var(1, 4), Rel::Less, var(0, 2))));
  }
  SUBCASE("variable-free atoms resolve") {
    CHECK(atom(var(0, 0), RawRel::Less, one(5)).is_top());
    CHECK(atom(one(5), RawRel::Less, one(5)).is_bottom());
    CHECK(atom(one(5), RawRel::LessEq, one(5)).is_top());
  }
  SUBCASE("weak relations become disjunctions") {
    const QFFormula f = atom(var(0), RawRel::LessEq, one(1));
    CHECK(f.disjuncts.size() == 2);
    CHECK(negation_free_shapes(f));
  }
  SUBCASE("one-variable atoms get coefficient 1") {
    // 2x < 6  ->  x < 3 ;  -2x < 6  ->  -3 < x
    CHECK(atom(var(0, 2), RawRel::Less, one(6)) == single(rel(var(0), Rel::Less, one(3))));
    CHECK(atom(var(0, -2), RawRel::Less, one(6)) == single(rel(one(-3), Rel::Less, var(0))));
  }
  SUBCASE("same variable on both sides") {
    // 2x < 3x  ->  0 < x
    CHECK(atom(var(0, 2), RawRel::Less, var(0, 3)) == single(rel(one(0), Rel::Less, var(0))));
  }
}

TEST_CASE("eliminate_quantifiers examples") {
  // exists x0 (x1 < x0 & x0 < 2 x2)  ->  x1 < 2 x2
  FOFormula f1{{{Quantifier::Exists, 0}},
               gen::all({atom(var(1), RawRel::Less, var(0)), atom(var(0), RawRel::Less, var(2, 2))})};
  CHECK(eliminate_quantifiers(f1) == atom(var(1), RawRel::Less, var(2, 2)));

  // exists x0 (x0 = 2 x1 & x0 < 3)  ->  2 x1 < 3
  FOFormula f2{{{Quantifier::Exists, 0}},
               gen::all({atom(var(0), RawRel::Equal, var(1, 2)), atom(var(0), RawRel::Less, one(3))})};
  CHECK(eliminate_quantifiers(f2) == atom(var(1, 2), RawRel::Less, one(3)));

  // exists x0 (x0 < x1 & x1 < x0)  ->  false
  FOFormula f3{{{Quantifier::Exists, 0}},
               gen::all({atom(var(0), RawRel::Less, var(1)), atom(var(1), RawRel::Less, var(0))})};
  CHECK(eliminate_quantifiers(f3).is_bottom());

  // forall x0 (x0 < x1)  ->  false ; forall x0 (x0 < x0 + ...) handled via negation
  FOFormula f4{{{Quantifier::ForAll, 0}}, atom(var(0), RawRel::Less, var(1))};
  CHECK(eliminate_quantifiers(f4).is_bottom());
  // exists x0 (x1 < x0): true for every x1
  FOFormula f5{{{Quantifier::Exists, 0}}, atom(var(1), RawRel::Less, var(0))};
  CHECK(eliminate_quantifiers(f5).is_top());
}

TEST_CASE("eval_formula on rationals and Laurent numbers") {
  const QFFormula f = atom(var(0), RawRel::Less, var(1, 2));
  const std::vector<Rational> ones{Rational(1), Rational(1)};
  CHECK(eval_formula<Rational>(f, ones));
  CHECK(!eval_formula<Rational>(QFFormula::bottom(), ones));
  const std::vector<LaurentNum> x{LaurentNum(1) - LaurentNum::epsilon()};
  CHECK(eval_formula<LaurentNum>(atom(var(0), RawRel::Less, one(1)), x));
  const std::vector<LaurentNum> y{LaurentNum(1) + LaurentNum::monomial(Rational(1), 4)};
  CHECK(!eval_formula<LaurentNum>(atom(var(0), RawRel::Less, one(1)), y));
}

TEST_CASE("closure_of") {
  CHECK(closure_of(rel(var(0), Rel::Less, var(1, 2))) == rel(var(0), Rel::LessEq, var(1, 2)));
  CHECK(closure_of(rel(var(0), Rel::Equal, var(1, 2))) == rel(var(0), Rel::Equal, var(1, 2)));
  CHECK(closure_of(Atom::top()).is_top());
}

TEST_CASE("extract_hk") {
  {
    const std::vector<Atom> atoms{rel(var(0, 2), Rel::Less, var(1, 3))};
    const HKSets hk = extract_hk(atoms);
    CHECK(hk.h == std::vector<Rational>{make_rational(2, 3)});
    CHECK(hk.k.empty());
  }
  {
    const std::vector<Atom> atoms{rel(var(0), Rel::Less, one(5)),
                                  rel(one(1), Rel::Less, var(2, 4))};
    const HKSets hk = extract_hk(atoms);
    CHECK(hk.h.empty());
    CHECK(hk.k == std::vector<LaurentNum>{LaurentNum(make_rational(1, 4)), LaurentNum(5)});
  }
  CHECK(extract_hk({}).h.empty());
}

TEST_CASE("quantifier-free formulas are fixed points of elimination") {
  gen::Gen g(31);
  const std::vector<Rational> grid{Rational(-2), make_rational(-1, 2), Rational(0), Rational(1),
                                   make_rational(3, 2)};
  for (int trial = 0; trial < 100; ++trial) {
    QFFormula m = QFFormula::bottom();
    for (int d = 0; d < 2; ++d)
      m = disjunction(m, gen::all({atom(var(g.uniform(0, 1), g.coeff(2)), RawRel::Less,
                                        g.coin() ? one(Rational(g.uniform(-2, 2)))
                                                 : var(g.uniform(0, 1), g.coeff(2))),
                                   atom(var(g.uniform(0, 1)), RawRel::LessEq, one(Rational(g.uniform(-1, 1))))}));
    const QFFormula e = eliminate_quantifiers(FOFormula{{}, m});
    CHECK(negation_free_shapes(e));
    for (const auto& a : grid)
      for (const auto& b : grid) {
        const std::vector<Rational> point{a, b};
        CHECK(eval_formula<Rational>(e, point) == eval_formula<Rational>(m, point));
      }
  }
}

TEST_CASE("negation and elimination keep formulas negation-free and sound") {
  gen::Gen g(77);
  for (int trial = 0; trial < 60; ++trial) {
    QFFormula m = QFFormula::bottom();
    for (int d = 0; d < 2; ++d)
      m = disjunction(m, gen::all({atom(var(g.uniform(0, 2), g.coeff(2)), RawRel::Less,
                                        var(g.uniform(0, 2), g.coeff(2))),
                                   atom(var(g.uniform(0, 2)), RawRel::Greater,
                                        one(Rational(g.uniform(-1, 1))))}));
    const QFFormula neg = negation(m);
    CHECK(negation_free_shapes(neg));
    FOFormula f{{{g.coin() ? Quantifier::Exists : Quantifier::ForAll, 2}}, m};
    const QFFormula e = eliminate_quantifiers(f);
    CHECK(negation_free_shapes(e));
    for (int a = -2; a <= 2; ++a)
      for (int b = -2; b <= 2; ++b) {
        const std::vector<Rational> point{Rational(a), make_rational(b, 2), Rational(0)};
        CHECK(eval_formula<Rational>(neg, point) != eval_formula<Rational>(m, point));
        std::map<int, Rational> env{{0, point[0]}, {1, point[1]}};
        CHECK(eval_formula<Rational>(e, point) == qe_oracle::evaluate(f, env));
      }
  }
}

TEST_CASE("to_string") {
  CHECK(to_string(QFFormula::top()) == "true");
  CHECK(to_string(QFFormula::bottom()) == "false");
  CHECK(to_string(var(1, make_rational(3, 2))) == "3/2*x1");
  CHECK(to_string(var(0)) == "x0");
}

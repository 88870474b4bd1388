#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "plhvcsp/laurent.hpp"
#include "plhvcsp/rational.hpp"

namespace plhvcsp {

// c * 1 or c * x_var. Scalar symbols are never composed, so this is every
// term of the homogeneous linear signature.
struct Term {
  Rational coeff{0};
  std::optional<int> var;

  static Term constant(Rational c) { return Term{std::move(c), std::nullopt}; }
  static Term scaled(Rational c, int v) { return Term{std::move(c), v}; }

  bool is_constant() const { return !var.has_value(); }

  friend bool operator==(const Term&, const Term&) = default;
};

std::strong_ordering operator<=>(const Term& a, const Term& b);

// Relations inside the core. LessEq is produced only by closure_of and is
// understood by the sampler and the oracle; everything else is {<, =}.
enum class Rel { Less, Equal, LessEq };

// Relations accepted at the input boundary.
enum class RawRel { Less, LessEq, Equal, GreaterEq, Greater };

struct Atom {
  enum class Kind { Top, Bottom, Relation };

  Kind kind = Kind::Top;
  Term lhs;
  Rel rel = Rel::Less;
  Term rhs;

  static Atom top() { return Atom{}; }
  static Atom bottom() { return Atom{Kind::Bottom, {}, Rel::Less, {}}; }
  // No normalization; see normalize_atom.
  static Atom relation(Term lhs, Rel rel, Term rhs) {
    return Atom{Kind::Relation, std::move(lhs), rel, std::move(rhs)};
  }

  bool is_top() const { return kind == Kind::Top; }
  bool is_bottom() const { return kind == Kind::Bottom; }
  bool is_trivial() const { return kind != Kind::Relation; }
  bool mentions(int v) const { return lhs.var == v || rhs.var == v; }
  // Number of distinct variables (0, 1 or 2).
  int variable_count() const;

  friend bool operator==(const Atom&, const Atom&) = default;
};

std::strong_ordering operator<=>(const Atom& a, const Atom& b);

using Conjunction = std::vector<Atom>;

// Negation-free formula in disjunctive normal form. No disjuncts is bottom;
// a disjunct with no atoms is top.
struct QFFormula {
  std::vector<Conjunction> disjuncts;

  static QFFormula top() { return QFFormula{{Conjunction{}}}; }
  static QFFormula bottom() { return QFFormula{}; }
  static QFFormula of(Atom a);

  bool is_bottom() const { return disjuncts.empty(); }
  bool is_top() const;

  friend bool operator==(const QFFormula&, const QFFormula&) = default;
};

enum class Quantifier { Exists, ForAll };

struct FOFormula {
  std::vector<std::pair<Quantifier, int>> prefix;
  QFFormula matrix;
};

// Rewrites lhs REL rhs into the canonical shapes
//   x < k*1, k*1 < x, x = k*1, c1*x {<,=} c2*y (c1, c2 not both negative),
// resolving variable-free atoms to top/bottom. <=, >=, > become {<,=}.
QFFormula normalize_atom(const Term& lhs, RawRel rel, const Term& rhs);
// Normalizes an atom already using Rel; LessEq expands to a disjunction.
QFFormula normalize_atom(const Atom& a);

QFFormula disjunction(QFFormula a, const QFFormula& b);
QFFormula conjunction(const QFFormula& a, const QFFormula& b);
QFFormula negation(const QFFormula& f);
// Sorts and deduplicates atoms and disjuncts, drops bottom disjuncts and
// disjuncts subsumed by smaller ones.
QFFormula simplify(QFFormula f);

// Equivalent quantifier-free formula (over every ordered Q-vector space).
QFFormula eliminate_exists(const QFFormula& matrix, int var);
QFFormula eliminate_quantifiers(const FOFormula& f);

// Replaces x_var by the given term everywhere and renormalizes.
QFFormula substitute(const QFFormula& f, int var, const Term& by);

// Closure: strict inequality becomes the weak one, equality unchanged.
Atom closure_of(const Atom& a);

struct HKSets {
  std::vector<Rational> h;    // c1/c2 of two-variable atoms
  std::vector<LaurentNum> k;  // constant/coefficient ratios of one-variable atoms
};

// Atoms must be normalized and non-trivial.
HKSets extract_hk(std::span<const Atom> atoms);

template <class T>
T term_value(const Term& t, std::span<const T> values) {
  if (!t.var) return T(t.coeff);
  return T(t.coeff * values[static_cast<std::size_t>(*t.var)]);
}

template <class T>
bool eval_atom(const Atom& a, std::span<const T> values) {
  switch (a.kind) {
    case Atom::Kind::Top:
      return true;
    case Atom::Kind::Bottom:
      return false;
    case Atom::Kind::Relation:
      break;
  }
  const T l = term_value(a.lhs, values);
  const T r = term_value(a.rhs, values);
  switch (a.rel) {
    case Rel::Less:
      return l < r;
    case Rel::Equal:
      return l == r;
    case Rel::LessEq:
      return l <= r;
  }
  return false;
}

template <class T>
bool eval_conjunction(const Conjunction& c, std::span<const T> values) {
  for (const auto& a : c)
    if (!eval_atom(a, values)) return false;
  return true;
}

// Works for any ordered carrier: Rational, LaurentNum, ...
template <class T>
bool eval_formula(const QFFormula& f, std::span<const T> values) {
  for (const auto& c : f.disjuncts)
    if (eval_conjunction(c, values)) return true;
  return false;
}

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const QFFormula& f);

}  // namespace plhvcsp

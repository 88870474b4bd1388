#include "plhvcsp/formula.hpp"

#include <algorithm>
#include <map>

namespace plhvcsp {

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.var != b.var) {
    if (!a.var) return std::strong_ordering::less;
    if (!b.var) return std::strong_ordering::greater;
    return *a.var <=> *b.var;
  }
  return compare(a.coeff, b.coeff);
}

std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
  if (a.kind != b.kind) return a.kind <=> b.kind;
  if (a.kind != Atom::Kind::Relation) return std::strong_ordering::equal;
  if (auto c = a.lhs <=> b.lhs; c != 0) return c;
  if (a.rel != b.rel) return a.rel <=> b.rel;
  return a.rhs <=> b.rhs;
}

int Atom::variable_count() const {
  if (kind != Kind::Relation) return 0;
  if (lhs.var && rhs.var) return *lhs.var == *rhs.var ? 1 : 2;
  return (lhs.var || rhs.var) ? 1 : 0;
}

QFFormula QFFormula::of(Atom a) {
  if (a.is_bottom()) return bottom();
  if (a.is_top()) return top();
  return QFFormula{{Conjunction{std::move(a)}}};
}

bool QFFormula::is_top() const {
  for (const auto& c : disjuncts)
    if (c.empty()) return true;
  return false;
}

namespace {

Atom truth(bool b) { return b ? Atom::top() : Atom::bottom(); }

bool holds(const Rational& l, Rel rel, const Rational& r) {
  switch (rel) {
    case Rel::Less:
      return l < r;
    case Rel::Equal:
      return l == r;
    case Rel::LessEq:
      return l <= r;
  }
  return false;
}

// lhs rel rhs with rel in {<, =}; returns a single canonical atom.
Atom normalize_strict_or_equal(Term l, Rel rel, Term r) {
  if (l.var && l.coeff == 0) l = Term::constant(0);
  if (r.var && r.coeff == 0) r = Term::constant(0);

  if (l.is_constant() && r.is_constant()) return truth(holds(l.coeff, rel, r.coeff));

  if (l.var && r.var && *l.var == *r.var) {
    Rational diff = l.coeff - r.coeff;
    return normalize_strict_or_equal(Term::scaled(std::move(diff), *l.var), rel,
                                     Term::constant(0));
  }

  if (l.var && r.is_constant()) {
    const int x = *l.var;
    const Rational bound = r.coeff / l.coeff;
    if (rel == Rel::Equal || l.coeff > 0)
      return Atom::relation(Term::scaled(1, x), rel, Term::constant(bound));
    return Atom::relation(Term::constant(bound), rel, Term::scaled(1, x));
  }

  if (l.is_constant() && r.var) {
    const int x = *r.var;
    const Rational bound = l.coeff / r.coeff;
    if (rel == Rel::Equal) return Atom::relation(Term::scaled(1, x), rel, Term::constant(bound));
    if (r.coeff > 0) return Atom::relation(Term::constant(bound), rel, Term::scaled(1, x));
    return Atom::relation(Term::scaled(1, x), rel, Term::constant(bound));
  }

  // Two distinct variables.
  const bool both_negative = l.coeff < 0 && r.coeff < 0;
  if (rel == Rel::Less) {
    if (both_negative)
      return Atom::relation(Term::scaled(-r.coeff, *r.var), rel, Term::scaled(-l.coeff, *l.var));
    return Atom::relation(std::move(l), rel, std::move(r));
  }
  if (both_negative) {
    l.coeff = -l.coeff;
    r.coeff = -r.coeff;
  }
  if (*r.var < *l.var) std::swap(l, r);
  return Atom::relation(std::move(l), rel, std::move(r));
}

// Consistency of constant bounds on each single variable.
bool bounds_consistent(const Conjunction& c) {
  struct Bounds {
    std::optional<Rational> lower, upper, equal;  // strict lower/upper
  };
  std::map<int, Bounds> by_var;
  for (const auto& a : c) {
    if (a.kind != Atom::Kind::Relation || a.variable_count() != 1) continue;
    if (a.lhs.var && a.rhs.var) continue;
    if (a.lhs.var && a.lhs.coeff != 1) continue;
    if (a.rhs.var && a.rhs.coeff != 1) continue;
    if (a.rel == Rel::LessEq) continue;
    const int x = a.lhs.var ? *a.lhs.var : *a.rhs.var;
    const Rational& k = a.lhs.var ? a.rhs.coeff : a.lhs.coeff;
    Bounds& b = by_var[x];
    if (a.rel == Rel::Equal) {
      if (b.equal && *b.equal != k) return false;
      b.equal = k;
    } else if (a.lhs.var) {
      if (!b.upper || k < *b.upper) b.upper = k;
    } else {
      if (!b.lower || k > *b.lower) b.lower = k;
    }
  }
  for (const auto& [x, b] : by_var) {
    if (b.lower && b.upper && !(*b.lower < *b.upper)) return false;
    if (b.equal && b.upper && !(*b.equal < *b.upper)) return false;
    if (b.equal && b.lower && !(*b.lower < *b.equal)) return false;
  }
  return true;
}

bool is_subset(const Conjunction& small, const Conjunction& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

QFFormula negate_atom(const Atom& a) {
  switch (a.kind) {
    case Atom::Kind::Top:
      return QFFormula::bottom();
    case Atom::Kind::Bottom:
      return QFFormula::top();
    case Atom::Kind::Relation:
      break;
  }
  switch (a.rel) {
    case Rel::Less:
      return normalize_atom(a.rhs, RawRel::LessEq, a.lhs);
    case Rel::Equal:
      return disjunction(normalize_atom(a.lhs, RawRel::Less, a.rhs),
                         normalize_atom(a.rhs, RawRel::Less, a.lhs));
    case Rel::LessEq:
      return normalize_atom(a.rhs, RawRel::Less, a.lhs);
  }
  return QFFormula::bottom();
}

QFFormula renormalize(const QFFormula& f) {
  QFFormula out = QFFormula::bottom();
  for (const auto& c : f.disjuncts) {
    QFFormula acc = QFFormula::top();
    for (const auto& a : c) {
      acc = conjunction(acc, normalize_atom(a));
      if (acc.is_bottom()) break;
    }
    out = disjunction(std::move(out), acc);
  }
  return simplify(std::move(out));
}

Term substitute_term(const Term& t, int var, const Term& by) {
  if (t.var != var) return t;
  return Term{t.coeff * by.coeff, by.var};
}

// Solves the equality atom a (which mentions x) for x.
Term solve_equality(const Atom& a, int x) {
  if (a.lhs.var == x) return Term{a.rhs.coeff / a.lhs.coeff, a.rhs.var};
  return Term{a.lhs.coeff / a.rhs.coeff, a.lhs.var};
}

QFFormula eliminate_in_conjunction(const Conjunction& c, int x) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Atom& a = c[i];
    if (a.kind != Atom::Kind::Relation || a.rel != Rel::Equal || !a.mentions(x)) continue;
    const Term by = solve_equality(a, x);
    QFFormula rest = QFFormula::top();
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (j == i) continue;
      rest = conjunction(rest, substitute(QFFormula::of(c[j]), x, by));
      if (rest.is_bottom()) break;
    }
    return rest;
  }

  std::vector<Term> lower, upper;
  QFFormula out = QFFormula::top();
  Conjunction others;
  for (const auto& a : c) {
    if (!a.mentions(x)) {
      others.push_back(a);
      continue;
    }
    if (a.lhs.var == x) {
      Term bound{a.rhs.coeff / a.lhs.coeff, a.rhs.var};
      (a.lhs.coeff > 0 ? upper : lower).push_back(std::move(bound));
    } else {
      Term bound{a.lhs.coeff / a.rhs.coeff, a.lhs.var};
      (a.rhs.coeff > 0 ? lower : upper).push_back(std::move(bound));
    }
  }
  out.disjuncts.front() = others;
  for (const auto& l : lower)
    for (const auto& u : upper) {
      out = conjunction(out, normalize_atom(l, RawRel::Less, u));
      if (out.is_bottom()) return out;
    }
  return out;
}

}  // namespace

QFFormula normalize_atom(const Term& lhs, RawRel rel, const Term& rhs) {
  switch (rel) {
    case RawRel::Less:
      return QFFormula::of(normalize_strict_or_equal(lhs, Rel::Less, rhs));
    case RawRel::Equal:
      return QFFormula::of(normalize_strict_or_equal(lhs, Rel::Equal, rhs));
    case RawRel::LessEq:
      return simplify(disjunction(QFFormula::of(normalize_strict_or_equal(lhs, Rel::Less, rhs)),
                                  QFFormula::of(normalize_strict_or_equal(lhs, Rel::Equal, rhs))));
    case RawRel::Greater:
      return normalize_atom(rhs, RawRel::Less, lhs);
    case RawRel::GreaterEq:
      return normalize_atom(rhs, RawRel::LessEq, lhs);
  }
  return QFFormula::bottom();
}

QFFormula normalize_atom(const Atom& a) {
  if (a.is_top()) return QFFormula::top();
  if (a.is_bottom()) return QFFormula::bottom();
  switch (a.rel) {
    case Rel::Less:
      return normalize_atom(a.lhs, RawRel::Less, a.rhs);
    case Rel::Equal:
      return normalize_atom(a.lhs, RawRel::Equal, a.rhs);
    case Rel::LessEq:
      return normalize_atom(a.lhs, RawRel::LessEq, a.rhs);
  }
  return QFFormula::bottom();
}

QFFormula simplify(QFFormula f) {
  std::vector<Conjunction> kept;
  for (auto& c : f.disjuncts) {
    Conjunction cleaned;
    bool dead = false;
    for (auto& a : c) {
      if (a.is_top()) continue;
      if (a.is_bottom()) {
        dead = true;
        break;
      }
      cleaned.push_back(std::move(a));
    }
    if (dead) continue;
    std::sort(cleaned.begin(), cleaned.end());
    cleaned.erase(std::unique(cleaned.begin(), cleaned.end()), cleaned.end());
    if (!bounds_consistent(cleaned)) continue;
    if (cleaned.empty()) return QFFormula::top();
    kept.push_back(std::move(cleaned));
  }
  std::sort(kept.begin(), kept.end(), [](const Conjunction& a, const Conjunction& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  QFFormula out;
  for (auto& c : kept) {
    bool absorbed = false;
    for (const auto& s : out.disjuncts)
      if (is_subset(s, c)) {
        absorbed = true;
        break;
      }
    if (!absorbed) out.disjuncts.push_back(std::move(c));
  }
  std::sort(out.disjuncts.begin(), out.disjuncts.end());
  return out;
}

QFFormula disjunction(QFFormula a, const QFFormula& b) {
  a.disjuncts.insert(a.disjuncts.end(), b.disjuncts.begin(), b.disjuncts.end());
  return simplify(std::move(a));
}

QFFormula conjunction(const QFFormula& a, const QFFormula& b) {
  QFFormula out;
  for (const auto& ca : a.disjuncts)
    for (const auto& cb : b.disjuncts) {
      Conjunction c = ca;
      c.insert(c.end(), cb.begin(), cb.end());
      out.disjuncts.push_back(std::move(c));
    }
  return simplify(std::move(out));
}

QFFormula negation(const QFFormula& f) {
  QFFormula out = QFFormula::top();
  for (const auto& c : f.disjuncts) {
    QFFormula neg = QFFormula::bottom();
    for (const auto& a : c) neg = disjunction(std::move(neg), negate_atom(a));
    out = conjunction(out, neg);
    if (out.is_bottom()) break;
  }
  return out;
}

QFFormula substitute(const QFFormula& f, int var, const Term& by) {
  QFFormula out = QFFormula::bottom();
  for (const auto& c : f.disjuncts) {
    QFFormula acc = QFFormula::top();
    for (const auto& a : c) {
      if (a.kind != Atom::Kind::Relation || !a.mentions(var)) {
        acc = conjunction(acc, QFFormula::of(a));
        continue;
      }
      Atom s = a;
      s.lhs = substitute_term(a.lhs, var, by);
      s.rhs = substitute_term(a.rhs, var, by);
      acc = conjunction(acc, normalize_atom(s));
      if (acc.is_bottom()) break;
    }
    out = disjunction(std::move(out), acc);
  }
  return out;
}

QFFormula eliminate_exists(const QFFormula& matrix, int var) {
  const QFFormula normalized = renormalize(matrix);
  QFFormula out = QFFormula::bottom();
  for (const auto& c : normalized.disjuncts)
    out = disjunction(std::move(out), eliminate_in_conjunction(c, var));
  return out;
}

QFFormula eliminate_quantifiers(const FOFormula& f) {
  QFFormula cur = renormalize(f.matrix);
  for (auto it = f.prefix.rbegin(); it != f.prefix.rend(); ++it) {
    const auto [q, x] = *it;
    if (q == Quantifier::Exists)
      cur = eliminate_exists(cur, x);
    else
      cur = negation(eliminate_exists(negation(cur), x));
  }
  return cur;
}

Atom closure_of(const Atom& a) {
  if (a.kind != Atom::Kind::Relation || a.rel != Rel::Less) return a;
  Atom c = a;
  c.rel = Rel::LessEq;
  return c;
}

HKSets extract_hk(std::span<const Atom> atoms) {
  HKSets out;
  for (const auto& a : atoms) {
    if (a.kind != Atom::Kind::Relation) continue;
    if (a.lhs.var && a.rhs.var) {
      if (a.lhs.coeff != 0 && a.rhs.coeff != 0) out.h.push_back(a.lhs.coeff / a.rhs.coeff);
    } else if (a.lhs.var && a.rhs.is_constant()) {
      if (a.lhs.coeff != 0) out.k.emplace_back(Rational(a.rhs.coeff / a.lhs.coeff));
    } else if (a.lhs.is_constant() && a.rhs.var) {
      if (a.rhs.coeff != 0) out.k.emplace_back(Rational(a.lhs.coeff / a.rhs.coeff));
    }
  }
  std::sort(out.h.begin(), out.h.end());
  out.h.erase(std::unique(out.h.begin(), out.h.end()), out.h.end());
  std::sort(out.k.begin(), out.k.end());
  out.k.erase(std::unique(out.k.begin(), out.k.end()), out.k.end());
  return out;
}

std::string to_string(const Term& t) {
  if (!t.var) return to_string(t.coeff);
  const std::string x = "x" + std::to_string(*t.var);
  if (t.coeff == 1) return x;
  return to_string(t.coeff) + "*" + x;
}

std::string to_string(const Atom& a) {
  switch (a.kind) {
    case Atom::Kind::Top:
      return "true";
    case Atom::Kind::Bottom:
      return "false";
    case Atom::Kind::Relation:
      break;
  }
  const char* rel = a.rel == Rel::Less ? " < " : a.rel == Rel::Equal ? " = " : " <= ";
  return to_string(a.lhs) + rel + to_string(a.rhs);
}

std::string to_string(const QFFormula& f) {
  if (f.is_bottom()) return "false";
  std::string out;
  for (const auto& c : f.disjuncts) {
    if (!out.empty()) out += " | ";
    if (c.empty()) {
      out += "true";
      continue;
    }
    out += "(";
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) out += " & ";
      out += to_string(c[i]);
    }
    out += ")";
  }
  return out;
}

}  // namespace plhvcsp

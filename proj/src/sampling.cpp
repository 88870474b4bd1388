#include "plhvcsp/sampling.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "plhvcsp/errors.hpp"

namespace plhvcsp {

namespace {

void enumerate_products(std::span<const Rational> h, std::size_t pos, int budget,
                        const Rational& acc, std::vector<Rational>& out, std::size_t max_size) {
  if (pos == h.size()) {
    out.push_back(acc);
    if (out.size() > max_size)
      throw SizeGuardError("sample magnitude set", static_cast<double>(out.size()),
                           static_cast<double>(max_size));
    return;
  }
  enumerate_products(h, pos + 1, budget, acc, out, max_size);
  Rational up = acc, down = acc;
  for (int e = 1; e <= budget; ++e) {
    up *= h[pos];
    down /= h[pos];
    enumerate_products(h, pos + 1, budget - e, up, out, max_size);
    enumerate_products(h, pos + 1, budget - e, down, out, max_size);
  }
}

Integer lcm_of_denominators(std::span<const Rational> values) {
  Integer l = 1;
  for (const auto& v : values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  return l;
}

// out = c * x, skipping the multiplication for c = 1 and c = -1.
void scaled_into(Rational& out, const Rational& c, const Rational& x) {
  if (c == 1)
    mpq_set(out.get_mpq_t(), x.get_mpq_t());
  else if (c == -1)
    mpq_neg(out.get_mpq_t(), x.get_mpq_t());
  else
    mpq_mul(out.get_mpq_t(), c.get_mpq_t(), x.get_mpq_t());
}

// rhs(x_j) - lhs(x_i) for one atom shape, computed into reused scratch
// storage; the pair loops below run it |D|^2 times per shape.
class AtomDifference {
 public:
  void set(const Atom& a, const LaurentNum& xi, const LaurentNum& xj) {
    for (int e = LaurentNum::kMinExponent; e <= LaurentNum::kMaxExponent; ++e) {
      Rational& c = at(e);
      c = 0;
      accumulate(c, a.rhs, xj, e, true);
      accumulate(c, a.lhs, xi, e, false);
    }
  }

  int sign() const {
    for (const auto& c : c_)
      if (sgn(c) != 0) return sgn(c);
    return 0;
  }

  // As sign_safe_bound, for the stored difference.
  std::optional<Rational> bound() {
    int m = LaurentNum::kMinExponent;
    while (m <= LaurentNum::kMaxExponent && sgn(at(m)) == 0) ++m;
    if (m > LaurentNum::kMaxExponent) return std::nullopt;
    rest_ = 0;
    for (int j = m + 1; j <= LaurentNum::kMaxExponent; ++j) {
      mpq_abs(tmp_.get_mpq_t(), at(j).get_mpq_t());
      rest_ += tmp_;
    }
    if (sgn(rest_) == 0) return std::nullopt;
    mpq_abs(tmp_.get_mpq_t(), at(m).get_mpq_t());
    return Rational(tmp_ / rest_);
  }

 private:
  Rational& at(int e) { return c_[static_cast<std::size_t>(e - LaurentNum::kMinExponent)]; }

  void accumulate(Rational& c, const Term& t, const LaurentNum& x, int e, bool plus) {
    if (t.is_constant()) {
      if (e != 0) return;
      if (plus)
        c += t.coeff;
      else
        c -= t.coeff;
      return;
    }
    const Rational& xe = x.coeff(e);
    if (sgn(xe) == 0) return;
    scaled_into(tmp_, t.coeff, xe);
    if (plus)
      c += tmp_;
    else
      c -= tmp_;
  }

  std::array<Rational, LaurentNum::kSpan> c_;
  Rational tmp_, rest_;
};


int sign_of(const Rational& a, const Rational& b) {
  const int c = cmp(a, b);
  return (c > 0) - (c < 0);
}

// Calls fn(lhs-side index, rhs-side index) for every way of assigning D
// elements to the atom's variables.
template <class Fn>
void for_each_instantiation(const Atom& a, std::size_t n, Fn&& fn) {
  const bool two = a.variable_count() == 2;
  if (two) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) fn(i, j);
  } else {
    for (std::size_t i = 0; i < n; ++i) fn(i, i);
  }
}

// Atoms with distinct coefficient shapes; variables are renamed away.
std::vector<Atom> atom_shapes(std::span<const Atom> atoms) {
  std::vector<Atom> out;
  for (const auto& a : atoms) {
    if (a.kind != Atom::Kind::Relation || a.variable_count() == 0) continue;
    Atom s = a;
    const bool two = a.variable_count() == 2;
    if (s.lhs.var) s.lhs.var = 0;
    if (s.rhs.var) s.rhs.var = two ? 1 : 0;
    s.rel = Rel::Less;  // sign safety does not depend on the relation
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Rational objective_safe_eps(const ObjectiveHint& hint, std::span<const LaurentNum> d) {
  std::vector<Rational> constants{hint.threshold}, coefficients, d_coeffs;
  Rational s = abs(hint.threshold);
  Rational m = 0;
  for (const auto& x : d) {
    Rational sum = 0;
    for (int e = LaurentNum::kMinExponent; e <= LaurentNum::kMaxExponent; ++e) {
      sum += abs(x.coeff(e));
      d_coeffs.push_back(x.coeff(e));
    }
    m = std::max(m, sum);
  }
  for (const auto& cands : hint.candidates) {
    Rational max_const = 0, max_coeff = 0;
    for (const auto& t : cands) {
      if (t.is_constant()) {
        constants.push_back(t.coeff);
        max_const = std::max(max_const, abs(t.coeff));
      } else {
        coefficients.push_back(t.coeff);
        max_coeff = std::max(max_coeff, abs(t.coeff));
      }
    }
    s += max_const + max_coeff * m;
  }
  if (s == 0) return Rational(1);
  const Integer l = lcm_of_denominators(constants) * lcm_of_denominators(coefficients) *
                    lcm_of_denominators(d_coeffs);
  return Rational(Rational(1) / (Rational(2) * Rational(l) * s));
}

void check_order(const SampleDomain& s) {
  for (std::size_t i = 1; i < s.rational_elements.size(); ++i)
    if (!(s.rational_elements[i - 1] < s.rational_elements[i]))
      throw OrderViolation("eta does not preserve the order of the sample at " +
                           to_string(s.elements[i]));
}

// Largest 2^-k <= x, for 0 < x. Every bound above survives shrinking eps,
// and power-of-two denominators keep the sample's arithmetic cheap.
Rational power_of_two_below(const Rational& x) {
  Rational p = 1;
  while (p > x) p /= 2;
  return p;
}

void rational_term(Rational& out, const Term& t, const Rational& x) {
  if (t.is_constant())
    mpq_set(out.get_mpq_t(), t.coeff.get_mpq_t());
  else
    scaled_into(out, t.coeff, x);
}

void check_atoms(std::span<const Atom> shapes, const SampleDomain& s) {
  const auto n = static_cast<long long>(s.elements.size());
  for (const auto& a : shapes) {
    const bool two = a.variable_count() == 2;
    bool ok = true;
#pragma omp parallel reduction(&& : ok)
    {
      AtomDifference diff;
      Rational l, r;
#pragma omp for schedule(static)
      for (long long i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        for (std::size_t j = two ? 0 : ui; j < (two ? static_cast<std::size_t>(n) : ui + 1); ++j) {
          diff.set(a, s.elements[ui], s.elements[j]);
          rational_term(l, a.lhs, s.rational_elements[ui]);
          rational_term(r, a.rhs, s.rational_elements[j]);
          ok = ok && diff.sign() == sign_of(r, l);
        }
      }
    }
    if (!ok) throw OrderViolation("eta does not preserve atom " + to_string(a));
  }
}

}  // namespace

std::vector<LaurentNum> compute_C(const HKSets& hk, int d, std::size_t max_size) {
  if (d < 1) throw Error("sample parameter d must be positive");
  std::vector<Rational> h;
  for (const auto& v : hk.h) {
    Rational m = abs(v);
    if (m != 0 && m != 1) h.push_back(m);
  }
  std::sort(h.begin(), h.end());
  h.erase(std::unique(h.begin(), h.end()), h.end());
  // h and 1/h generate the same products.
  std::vector<Rational> reduced;
  for (const auto& v : h)
    if (v > 1 || !std::binary_search(h.begin(), h.end(), Rational(1 / v))) reduced.push_back(v);

  std::vector<Rational> products;
  enumerate_products(reduced, 0, d - 1, Rational(1), products, max_size);
  std::sort(products.begin(), products.end());
  products.erase(std::unique(products.begin(), products.end()), products.end());

  std::vector<LaurentNum> out;
  for (const auto& k : hk.k) {
    const LaurentNum mk = abs(k);
    if (mk.is_zero()) continue;
    for (const auto& p : products) {
      out.push_back(p * mk);
      if (out.size() > max_size)
        throw SizeGuardError("sample magnitude set", static_cast<double>(out.size()),
                             static_cast<double>(max_size));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

HKSets augment_hk(HKSets hk) {
  hk.k.push_back(LaurentNum::epsilon());
  hk.k.push_back(LaurentNum::monomial(Rational(1), -1));
  std::sort(hk.k.begin(), hk.k.end());
  hk.k.erase(std::unique(hk.k.begin(), hk.k.end()), hk.k.end());
  return hk;
}

std::vector<LaurentNum> compute_D(std::span<const LaurentNum> c, int d) {
  std::vector<LaurentNum> out{LaurentNum()};
  for (const auto& x : c) {
    const LaurentNum step = x.shifted(3);
    for (int n = -d; n <= d; ++n) {
      LaurentNum v = x + Rational(n) * step;
      out.push_back(-v);
      out.push_back(std::move(v));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Rational compute_epsilon(std::span<const Rational> c) {
  if (c.empty()) throw EmptyInput("compute_epsilon needs a nonempty set");
  std::vector<Rational> values(c.begin(), c.end());
  values.push_back(0);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  // Smallest positive difference is between neighbours; largest is max - min.
  Rational min_diff = values.back() - values.front();
  for (std::size_t i = 1; i < values.size(); ++i)
    min_diff = std::min(min_diff, Rational(values[i] - values[i - 1]));
  const Rational max_diff = values.back() - values.front();
  return Rational(min_diff / (Rational(6) * max_diff));
}

Rational eta_map(const LaurentNum& x, const Rational& eps_value) {
  return laurent_eval(x, eps_value);
}

SampleDomain build_sample_domain(std::span<const Atom> atoms, const SampleOptions& options) {
  const std::vector<LaurentNum> c = compute_C(augment_hk(extract_hk(atoms)), options.d,
                                              options.max_domain);
  SampleDomain s;
  s.elements = compute_D(c, options.d);
  if (s.elements.size() > options.max_domain)
    throw SizeGuardError("sample domain", static_cast<double>(s.elements.size()),
                         static_cast<double>(options.max_domain));

  std::vector<Rational> magnitudes;
  for (const auto& x : c) magnitudes.push_back(x.coeff(x.leading_exponent()));
  s.base_eps = compute_epsilon(magnitudes);

  // The order itself is the atom x0 < x1.
  std::vector<Atom> with_order(atoms.begin(), atoms.end());
  with_order.push_back(Atom::relation(Term::scaled(1, 0), Rel::Less, Term::scaled(1, 1)));
  const std::vector<Atom> shapes = atom_shapes(with_order);

  Rational eps = s.base_eps;
  const std::size_t n = s.elements.size();
  for (const auto& a : shapes) {
    const bool two = a.variable_count() == 2;
#pragma omp parallel
    {
      AtomDifference diff;
      Rational local = eps;
#pragma omp for schedule(static)
      for (long long i = 0; i < static_cast<long long>(n); ++i) {
        const auto ui = static_cast<std::size_t>(i);
        for (std::size_t j = two ? 0 : ui; j < (two ? n : ui + 1); ++j) {
          diff.set(a, s.elements[ui], s.elements[j]);
          if (auto b = diff.bound(); b && *b / 2 < local) local = *b / 2;
        }
      }
#pragma omp critical
      if (local < eps) eps = local;
    }
  }
  if (options.objective) eps = std::min(eps, objective_safe_eps(*options.objective, s.elements));
  s.eps = power_of_two_below(eps);

  s.rational_elements.reserve(n);
  for (const auto& x : s.elements) s.rational_elements.push_back(eta_map(x, s.eps));
  check_order(s);
  check_atoms(shapes, s);
  return s;
}

namespace {

// Cost function with guards flattened for repeated evaluation; reuses its
// scratch rationals, so each thread needs its own copy.
class CompiledCost {
 public:
  explicit CompiledCost(const PLHCostFunction& f) {
    for (const auto& p : f.pieces) {
      Piece c;
      for (const auto& a : p.guard) {
        if (a.is_top()) continue;
        if (a.is_bottom()) {
          c.dead = true;
          break;
        }
        c.atoms.push_back(Compiled{a.lhs.coeff, a.lhs.var.value_or(-1), a.rhs.coeff,
                                   a.rhs.var.value_or(-1), a.rel});
      }
      if (c.dead) continue;
      c.value_coeff = p.value.coeff;
      c.value_var = p.value.var.value_or(-1);
      pieces_.push_back(std::move(c));
    }
  }

  ExtRational operator()(std::span<const Rational> x) {
    bool found = false;
    for (const auto& p : pieces_) {
      bool holds = true;
      for (const auto& a : p.atoms) {
        eval_term(lhs_, a.lc, a.lv, x);
        eval_term(rhs_, a.rc, a.rv, x);
        const int c = cmp(lhs_, rhs_);
        holds = a.rel == Rel::Less ? c < 0 : a.rel == Rel::Equal ? c == 0 : c <= 0;
        if (!holds) break;
      }
      if (!holds) continue;
      eval_term(value_, p.value_coeff, p.value_var, x);
      if (!found || value_ < best_) {
        mpq_set(best_.get_mpq_t(), value_.get_mpq_t());
        found = true;
      }
    }
    return found ? ExtRational(best_) : ExtRational::infinity();
  }

 private:
  struct Compiled {
    Rational lc;
    int lv;
    Rational rc;
    int rv;
    Rel rel;
  };
  struct Piece {
    std::vector<Compiled> atoms;
    Rational value_coeff;
    int value_var = -1;
    bool dead = false;
  };

  static void eval_term(Rational& out, const Rational& c, int v, std::span<const Rational> x) {
    if (v < 0)
      mpq_set(out.get_mpq_t(), c.get_mpq_t());
    else
      mpq_mul(out.get_mpq_t(), c.get_mpq_t(), x[static_cast<std::size_t>(v)].get_mpq_t());
  }

  std::vector<Piece> pieces_;
  Rational lhs_, rhs_, value_, best_;
};

}  // namespace

FiniteTable tabulate_cost(const PLHCostFunction& f, std::span<const Rational> domain) {
  FiniteTable t;
  t.arity = f.arity;
  const std::size_t n = domain.size();
  const std::size_t total = power(n, f.arity);
  t.values.assign(total, ExtRational());
  const auto count = static_cast<long long>(total);
  const CompiledCost compiled(f);
#pragma omp parallel
  {
    CompiledCost eval = compiled;
    std::vector<int> tuple(static_cast<std::size_t>(f.arity));
    std::vector<Rational> point(static_cast<std::size_t>(f.arity));
#pragma omp for schedule(static)
    for (long long i = 0; i < count; ++i) {
      decode_tuple(static_cast<std::size_t>(i), n, tuple);
      for (std::size_t k = 0; k < tuple.size(); ++k)
        point[k] = domain[static_cast<std::size_t>(tuple[k])];
      t.values[static_cast<std::size_t>(i)] = eval(point);
    }
  }
  return t;
}

Sample build_sample(const ValuedStructure& gamma, const SampleOptions& options) {
  const std::vector<Atom> atoms = signature_atoms(gamma, options.include_value_atoms);
  Sample s;
  s.domain = build_sample_domain(atoms, options);
  const std::size_t n = s.domain.rational_elements.size();
  for (const auto& [name, f] : gamma) {
    const double tuples = static_cast<double>(power(n, f.arity));
    if (tuples > static_cast<double>(options.max_tuples))
      throw SizeGuardError("cost table of '" + name + "'", tuples,
                           static_cast<double>(options.max_tuples));
  }
  s.structure.domain_size = n;
  s.structure.labels = s.domain.rational_elements;
  for (const auto& [name, f] : gamma)
    s.structure.tables.emplace(name, tabulate_cost(f, s.structure.labels));
  return s;
}

ObjectiveHint objective_hint(const ValuedStructure& gamma, const VcspInstance& instance,
                             const Rational& u) {
  ObjectiveHint hint;
  hint.threshold = u;
  for (const auto& app : instance.applications) {
    std::vector<Term> cands;
    for (const auto& p : gamma.at(app.symbol).pieces) cands.push_back(p.value);
    hint.candidates.push_back(std::move(cands));
  }
  return hint;
}

}  // namespace plhvcsp

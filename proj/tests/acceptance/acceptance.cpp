// One line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "../support/generators.hpp"
#include "../support/qe_oracle.hpp"
#include "plhvcsp/blp.hpp"
#include "plhvcsp/document.hpp"
#include "plhvcsp/fpol.hpp"
#include "plhvcsp/oracle.hpp"
#include "plhvcsp/sampling.hpp"

using namespace plhvcsp;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  int failures = 0;

  void fail(const std::string& why) {
    if (pass) note.str("");
    pass = false;
    if (++failures <= 3) note << why << "; ";
    if (failures == 4) note << "...";
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class Fn>
auto timed(double& secs, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  auto r = fn();
  secs = seconds_since(t0);
  return r;
}

Document load(const std::string& name) {
  return parse_document(read_text_file(std::string(PLHVCSP_TEST_DATA) + "/" + name));
}

Sample plain_sample(const ValuedStructure& gamma, const VcspInstance& inst) {
  SampleOptions s;
  s.d = static_cast<int>(inst.variables.size());
  return build_sample(gamma, s);
}

VcspInstance with_threshold(VcspInstance inst, const Rational& u) {
  inst.threshold = u;
  return inst;
}

// --- 1 -------------------------------------------------------------------

Outcome running_example() {
  Outcome o;
  const Document two = load("example2.json");
  const VcspInstance& i2 = *two.instance;
  double t = 0;
  const Decision at0 = timed(t, [&] { return solve_decide(two.structure, with_threshold(i2, 0)); });
  if (!at0.accept) o.fail("instance (2) rejected at 0");
  if (t >= 10) o.fail("instance (2) took " + std::to_string(t) + "s");
  double t_neg = 0;
  const Decision below = timed(t_neg, [&] {
    return solve_decide(two.structure, with_threshold(i2, make_rational(-1, 1000)));
  });
  if (below.accept) o.fail("instance (2) accepted at -1/1000");
  if (!q_decide(two.structure, i2, 0).accept) o.fail("oracle rejects (2) at 0");
  if (q_decide(two.structure, i2, make_rational(-1, 1000)).accept)
    o.fail("oracle accepts (2) at -1/1000");
  const QInfimum inf2 = q_infimum(two.structure, i2);
  if (inf2.kind != InfimumKind::Attained || inf2.value != 0) o.fail("infimum of (2) is not 0");

  const Document one = load("example2_instance1.json");
  double t1 = 0;
  const Decision d1 = timed(t1, [&] { return solve_decide(one.structure, *one.instance); });
  if (!d1.accept) o.fail("instance (1) rejected at -10^6");
  if (t1 >= 10) o.fail("instance (1) took " + std::to_string(t1) + "s");
  if (!q_decide(one.structure, *one.instance, *one.instance->threshold).accept)
    o.fail("oracle rejects (1)");
  if (o.pass)
    o.note << "(2): blp " << to_string(at0.blp) << " accept@0 " << t << "s, reject@-1/1000 "
           << t_neg << "s, oracle min 0; (1): blp " << to_string(d1.blp) << " accept@-10^6 "
           << t1 << "s";
  return o;
}

// --- 2, 3 ----------------------------------------------------------------

Outcome exactness_suite(bool increasing, int count, unsigned seed) {
  Outcome o;
  gen::Gen g(seed);
  const auto t0 = std::chrono::steady_clock::now();
  int decisions = 0;
  for (int trial = 0; trial < count; ++trial) {
    ValuedStructure gamma;
    if (increasing) {
      gamma["u"] = g.unary_increasing();
      gamma["b"] = g.binary_increasing();
      gamma["c"] = g.binary_increasing();
    } else {
      gamma["u"] = g.unary_any();
      gamma["b"] = g.binary_submodular();
      gamma["c"] = g.binary_submodular();
    }
    const VcspInstance inst = g.instance(gamma, g.uniform(1, 3), g.uniform(1, 4));
    const Sample s = plain_sample(gamma, inst);
    const ExtRational brute = brute_min(s.structure, inst).value;
    const ExtRational relax = blp_value(inst, s.structure);
    if (brute != relax) {
      o.fail("trial " + std::to_string(trial) + ": blp " + to_string(relax) + " != brute " +
             to_string(brute));
      continue;
    }
    const Rational m = brute.is_finite() ? brute.value() : Rational(0);
    for (const Rational& u : std::vector<Rational>{m - 1, m, m + 1}) {
      const bool pipeline = solve_decide(gamma, with_threshold(inst, u)).accept;
      const bool exact = q_decide(gamma, inst, u).accept;
      ++decisions;
      if (pipeline != exact)
        o.fail("trial " + std::to_string(trial) + " at u=" + to_string(u) + ": solve " +
               std::to_string(pipeline) + " oracle " + std::to_string(exact));
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= 300) o.fail("took " + std::to_string(secs) + "s");
  if (o.pass)
    o.note << count << " structures, blp == brute_min exactly, " << decisions
           << " threshold decisions agree, " << secs << "s";
  return o;
}

// --- 4 -------------------------------------------------------------------

Outcome lower_bound() {
  Outcome o;
  gen::Gen g(4004);
  int strict = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = static_cast<std::size_t>(g.uniform(2, 3));
    FiniteValuedStructure delta;
    delta.domain_size = n;
    delta.tables["u"] = g.table(1, n, -3, 3, 10);
    delta.tables["b"] = g.table(2, n, -3, 3, 15);
    delta.tables["t"] = g.table(3, n, -3, 3, 20);
    ValuedStructure shape;
    shape["u"].arity = 1;
    shape["b"].arity = 2;
    shape["t"].arity = 3;
    const VcspInstance inst = g.instance(shape, g.uniform(1, 4), g.uniform(1, 4));
    const ExtRational brute = brute_min(delta, inst).value;
    const ExtRational relax = blp_value(inst, delta);
    if (relax > brute)
      o.fail("trial " + std::to_string(trial) + ": blp " + to_string(relax) + " > brute " +
             to_string(brute));
    if (relax < brute) ++strict;
  }
  const FiniteDocument xor_doc =
      parse_finite_document(read_text_file(std::string(PLHVCSP_TEST_DATA) + "/xor_gap.json"));
  const ExtRational xb = brute_min(xor_doc.structure, *xor_doc.instance).value;
  const ExtRational xr = blp_value(*xor_doc.instance, xor_doc.structure);
  if (xr != ExtRational(0) || xb != ExtRational(1))
    o.fail("xor fixture: blp " + to_string(xr) + " brute " + to_string(xb));
  if (o.pass)
    o.note << "1000 instances, blp <= brute_min always (" << strict
           << " strict gaps); xor fixture blp 0 < brute 1";
  return o;
}

// --- 5 -------------------------------------------------------------------

FiniteTable restrict_table(const FiniteTable& t, std::size_t n, const std::vector<int>& keep) {
  return tabulate(keep.size(), t.arity, [&](std::span<const int> idx) {
    std::vector<int> orig;
    for (int i : idx) orig.push_back(keep[static_cast<std::size_t>(i)]);
    return t.values[tuple_index(orig, n)];
  });
}

Outcome omega_sub_improves() {
  Outcome o;
  gen::Gen g(5005);
  long checks = 0;
  for (int trial = 0; trial < 40; ++trial) {
    ValuedStructure gamma;
    gamma["u"] = g.unary_any();
    gamma["b"] = g.binary_submodular();
    SampleOptions opt;
    opt.d = 2;
    const Sample s = build_sample(gamma, opt);
    const std::size_t n = s.structure.domain_size;
    // Whole tables at k = 2.
    for (const auto& [name, t] : s.structure.tables) {
      ++checks;
      if (!improves(omega_sub(2, n), t, n).improved)
        o.fail("trial " + std::to_string(trial) + " '" + name + "' k=2 full table");
    }
    // Random sub-chains for k = 3, 4: at most 5 elements for binary tables.
    for (int rep = 0; rep < 3; ++rep) {
      std::vector<int> keep;
      for (std::size_t a = 0; a < n; ++a) keep.push_back(static_cast<int>(a));
      while (keep.size() > 5)
        keep.erase(keep.begin() + g.uniform(0, static_cast<int>(keep.size()) - 1));
      for (const auto& [name, t] : s.structure.tables) {
        const FiniteTable r = restrict_table(t, n, keep);
        for (int k = 2; k <= 4; ++k) {
          ++checks;
          if (!improves(omega_sub(k, keep.size()), r, keep.size()).improved)
            o.fail("trial " + std::to_string(trial) + " '" + name + "' k=" + std::to_string(k));
        }
      }
    }
  }
  if (o.pass) o.note << checks << " exhaustive scans (k = 2, 3, 4), zero violations";
  return o;
}

// --- 6 -------------------------------------------------------------------

Outcome min_improves_iff_increasing() {
  Outcome o;
  long tables = 0;
  for (std::size_t n : {2u, 3u}) {
    const FractionalOperation w = omega_min(2, n);
    for (int arity : {1, 2}) {
      const std::size_t cells = power(n, arity);
      for (std::size_t code = 0; code < power(3, static_cast<int>(cells)); ++code) {
        FiniteTable t{arity, {}};
        std::size_t c = code;
        for (std::size_t i = 0; i < cells; ++i, c /= 3) t.values.emplace_back(static_cast<long>(c % 3));
        ++tables;
        if (improves(w, t, n).improved != is_componentwise_increasing(t, n))
          o.fail("n=" + std::to_string(n) + " arity " + std::to_string(arity) + " table " +
                 std::to_string(code));
      }
    }
  }
  if (o.pass) o.note << tables << " tables (values 0..2), equivalence holds on all";
  return o;
}

// --- 7 -------------------------------------------------------------------

Outcome sampling_completeness() {
  Outcome o;
  gen::Gen g(7007);
  int probes = 0;
  for (int trial = 0; trial < 200; ++trial) {
    ValuedStructure gamma;
    gamma["u"] = g.unary_any();
    gamma["b"] = g.binary_any();
    const VcspInstance inst = g.instance(gamma, g.uniform(1, 3), g.uniform(1, 3));
    const ExtRational m0 = brute_min(plain_sample(gamma, inst).structure, inst).value;
    const Rational m = m0.is_finite() ? m0.value() : Rational(0);
    for (const Rational& u : std::vector<Rational>{m - 1, m, m + 1}) {
      const VcspInstance at = with_threshold(inst, u);
      const Sample s = build_sample(gamma, sample_options_for(gamma, at, {}));
      const bool sample_accepts = brute_min(s.structure, at).value <= ExtRational(u);
      const bool exact = q_decide(gamma, at, u).accept;
      ++probes;
      if (sample_accepts != exact)
        o.fail("trial " + std::to_string(trial) + " u=" + to_string(u) + ": sample " +
               std::to_string(sample_accepts) + " oracle " + std::to_string(exact));
    }
  }
  if (o.pass) o.note << "200 instances, " << probes << " threshold probes, zero disagreements";
  return o;
}

// --- 8 -------------------------------------------------------------------

Outcome eta_monotone() {
  Outcome o;
  std::vector<ValuedStructure> structures{load("example2.json").structure};
  gen::Gen g(8008);
  for (int i = 0; i < 12; ++i) {
    ValuedStructure gamma;
    gamma["u"] = g.unary_any();
    gamma["b"] = i % 2 ? g.binary_any() : g.binary_submodular();
    structures.push_back(std::move(gamma));
  }
  long pairs = 0;
  std::ostringstream growth;
  for (std::size_t si = 0; si < structures.size(); ++si) {
    const std::vector<Atom> atoms = signature_atoms(structures[si], false);
    std::size_t previous = 0;
    for (int d = 1; d <= 6; ++d) {
      SampleOptions opt;
      opt.d = d;
      opt.max_domain = 200000;
      const SampleDomain dom = build_sample_domain(atoms, opt);
      const auto& D = dom.elements;
      const auto& E = dom.rational_elements;
      for (std::size_t i = 0; i < D.size(); ++i)
        for (std::size_t j = 0; j < D.size(); ++j) {
          ++pairs;
          if (laurent_compare(D[i], D[j]) != compare(E[i], E[j]))
            o.fail("structure " + std::to_string(si) + " d=" + std::to_string(d) + " pair " +
                   to_string(D[i]) + ", " + to_string(D[j]));
        }
      if (D.size() < previous)
        o.fail("sample shrank at d=" + std::to_string(d) + " for structure " + std::to_string(si));
      previous = D.size();
      if (si == 0) growth << (d > 1 ? "," : "") << D.size();
    }
  }
  if (o.pass)
    o.note << structures.size() << " structures x d=1..6, " << pairs
           << " ordered pairs agree; |D| growth for example2.json: " << growth.str();
  return o;
}

// --- 9 -------------------------------------------------------------------

Outcome max_closed() {
  Outcome o;
  gen::Gen g(9009);
  int sat = 0;
  for (int trial = 0; trial < 100; ++trial) {
    ValuedStructure gamma;
    gamma["r1"] = g.max_closed_relation(1);
    gamma["r2"] = g.max_closed_relation(2);
    gamma["r3"] = g.max_closed_relation(3);
    const VcspInstance inst = with_threshold(g.instance(gamma, g.uniform(2, 3), g.uniform(2, 4)), 0);
    const Sample s = build_sample(gamma, sample_options_for(gamma, inst, {}));
    const bool sample_feasible = brute_min(s.structure, inst).value.is_finite();
    const bool exact = q_decide(gamma, inst, 0).accept;
    if (exact) ++sat;
    if (sample_feasible != exact)
      o.fail("trial " + std::to_string(trial) + ": sample " + std::to_string(sample_feasible) +
             " oracle " + std::to_string(exact));
  }
  if (o.pass) o.note << "100 max-closed structures (" << sat << " satisfiable), zero disagreements";
  return o;
}

// --- 10 ------------------------------------------------------------------

Outcome qe_soundness() {
  Outcome o;
  gen::Gen g(10010);
  const std::vector<Rational> grid{make_rational(-2), make_rational(-1), make_rational(-1, 2),
                                   make_rational(0),  make_rational(1, 3), make_rational(1),
                                   make_rational(2),  make_rational(5, 2)};
  long points = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int nfree = g.uniform(1, 3);
    const int nq = g.uniform(1, 3);
    const int total = nfree + nq;
    auto term = [&] {
      if (g.uniform(0, 3) == 0) return gen::one(Rational(g.uniform(-2, 2)));
      return gen::var(g.uniform(0, total - 1), g.coeff(2));
    };
    const std::vector<RawRel> rels{RawRel::Less, RawRel::LessEq, RawRel::Equal,
                                   RawRel::GreaterEq, RawRel::Greater};
    FOFormula f;
    f.matrix = QFFormula::bottom();
    const int disjuncts = g.uniform(1, 3);
    for (int d = 0; d < disjuncts; ++d) {
      QFFormula c = QFFormula::top();
      const int atoms = g.uniform(1, nq == 3 ? 2 : 3);
      for (int a = 0; a < atoms; ++a) c = conjunction(c, normalize_atom(term(), g.pick(rels), term()));
      f.matrix = disjunction(f.matrix, c);
    }
    for (int q = 0; q < nq; ++q)
      f.prefix.emplace_back(g.coin() ? Quantifier::Exists : Quantifier::ForAll, nfree + q);
    const QFFormula qf = eliminate_quantifiers(f);
    for (int p = 0; p < 8; ++p) {
      std::map<int, Rational> env;
      std::vector<Rational> values;
      for (int v = 0; v < nfree; ++v) {
        env[v] = g.pick(grid);
        values.push_back(env[v]);
      }
      values.resize(static_cast<std::size_t>(total));
      ++points;
      const bool expected = qe_oracle::evaluate(f, env);
      const bool got = eval_formula<Rational>(qf, values);
      if (expected != got)
        o.fail("formula " + std::to_string(trial) + ": " + to_string(f.matrix) + " -> " +
               to_string(qf));
    }
  }
  if (o.pass) o.note << "200 formulas, " << points << " evaluation points, zero disagreements";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  // Optional arguments select criteria by number.
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::stoi(argv[i]));
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"running example reproduction", running_example},
      {"BLP exactness, submodular", [] { return exactness_suite(false, 100, 2002); }},
      {"BLP exactness, componentwise increasing", [] { return exactness_suite(true, 100, 3003); }},
      {"relaxation lower bound", lower_bound},
      {"omega_sub improvement", omega_sub_improves},
      {"omega_min improvement iff increasing", min_improves_iff_increasing},
      {"sampling completeness", sampling_completeness},
      {"eta monotonicity", eta_monotone},
      {"max-closed feasibility", max_closed},
      {"quantifier elimination soundness", qe_soundness},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && std::find(only.begin(), only.end(), static_cast<int>(i) + 1) == only.end())
      continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    all = all && o.pass;
    std::cout << "criterion " << i + 1 << " [" << (o.pass ? "PASS" : "FAIL") << "] "
              << criteria[i].first << ": " << o.note.str() << " (" << seconds_since(t0) << "s)"
              << std::endl;
  }
  return all ? 0 : 1;
}

#include "plhvcsp/fpol.hpp"

#include <atomic>
#include <climits>
#include <cmath>

#include "plhvcsp/errors.hpp"
#include "plhvcsp/lp.hpp"

namespace plhvcsp {

OpSpec parse_op(std::string_view text) {
  if (text == "min") return OpSpec{OpKind::Min, 1};
  if (text == "max") return OpSpec{OpKind::Max, 1};
  if (text == "avg") return OpSpec{OpKind::Avg, 1};
  if (text == "median") return OpSpec{OpKind::Median, 1};
  std::string_view digits;
  if (text.size() > 1 && text.front() == 's') digits = text.substr(1);
  if (text.starts_with("kth:")) digits = text.substr(4);
  if (!digits.empty() && std::all_of(digits.begin(), digits.end(),
                                     [](char c) { return c >= '0' && c <= '9'; }))
    return OpSpec{OpKind::KthSmallest, std::stoi(std::string(digits))};
  throw Error("unknown operation '" + std::string(text) + "'");
}

FiniteOperation builtin_operation(const OpSpec& op, int k, std::size_t n,
                                  std::span<const Rational> labels) {
  if (k < 1) throw Error("operation arity must be positive");
  if (op.kind == OpKind::KthSmallest && (op.index < 1 || op.index > k))
    throw Error("order statistic index out of range");
  if (op.kind == OpKind::Avg && labels.size() != n)
    throw DomainNotClosed("avg needs a rational domain");
  FiniteOperation g;
  g.arity = k;
  g.domain_size = n;
  switch (op.kind) {
    case OpKind::Min:
      g.name = "min";
      break;
    case OpKind::Max:
      g.name = "max";
      break;
    case OpKind::KthSmallest:
      g.name = "s" + std::to_string(op.index);
      break;
    case OpKind::Avg:
      g.name = "avg";
      break;
    case OpKind::Median:
      g.name = "median";
      break;
  }
  const std::size_t total = power(n, k);
  g.table.resize(total);
  std::vector<int> t(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < total; ++i) {
    decode_tuple(i, n, t);
    std::sort(t.begin(), t.end());
    int v = 0;
    switch (op.kind) {
      case OpKind::Min:
        v = t.front();
        break;
      case OpKind::Max:
        v = t.back();
        break;
      case OpKind::KthSmallest:
        v = t[static_cast<std::size_t>(op.index - 1)];
        break;
      case OpKind::Median:
        v = t[static_cast<std::size_t>((k - 1) / 2)];
        break;
      case OpKind::Avg: {
        Rational sum = 0;
        for (int a : t) sum += labels[static_cast<std::size_t>(a)];
        const Rational mean = sum / k;
        auto it = std::lower_bound(labels.begin(), labels.end(), mean);
        if (it == labels.end() || *it != mean)
          throw DomainNotClosed("average " + to_string(mean) + " is not a domain element");
        v = static_cast<int>(it - labels.begin());
        break;
      }
    }
    g.table[i] = v;
  }
  return g;
}

bool is_fully_symmetric(const FiniteOperation& g) {
  return is_fully_symmetric_fn(g.arity, g.domain_size,
                               [&](std::span<const int> a) { return g.apply(a); });
}

bool is_totally_symmetric(const FiniteOperation& g) {
  return is_totally_symmetric_fn(g.arity, g.domain_size,
                                 [&](std::span<const int> a) { return g.apply(a); });
}

void FractionalOperation::validate() const {
  if (support.empty()) throw Error("fractional operation with empty support");
  Rational total = 0;
  for (const auto& [g, w] : support) {
    if (g.arity != arity()) throw Error("fractional operation mixes arities");
    if (sgn(w) <= 0) throw Error("fractional operation weights must be positive");
    total += w;
  }
  if (total != 1) throw Error("fractional operation weights must sum to 1");
}

FractionalOperation omega_sub(int k, std::size_t n) {
  FractionalOperation w;
  for (int i = 1; i <= k; ++i)
    w.support.emplace_back(builtin_operation(OpSpec{OpKind::KthSmallest, i}, k, n),
                           make_rational(1, k));
  return w;
}

FractionalOperation omega_min(int k, std::size_t n) {
  return point_mass(builtin_operation(OpSpec{OpKind::Min, 1}, k, n));
}

FractionalOperation point_mass(FiniteOperation g) {
  FractionalOperation w;
  w.support.emplace_back(std::move(g), Rational(1));
  return w;
}

namespace {

struct ImprovementScan {
  const FractionalOperation& omega;
  const FiniteTable& f;
  std::size_t n;
  int m;
  int k;
  std::vector<std::vector<int>> tuples;  // decoded dom(f)
  std::vector<Rational> values;          // f on dom(f)
  std::vector<Rational> scaled_weights;  // m * w(g)

  ImprovementScan(const FractionalOperation& o, const FiniteTable& table, std::size_t size)
      : omega(o), f(table), n(size), m(o.arity()), k(table.arity) {
    std::vector<int> t(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      if (f.values[i].is_infinite()) continue;
      decode_tuple(i, n, t);
      tuples.push_back(t);
      values.push_back(f.values[i].value());
    }
    for (const auto& [g, w] : omega.support) scaled_weights.push_back(w * m);
  }

  // True if the chosen argument tuples violate the inequality.
  bool violated(std::span<const std::size_t> chosen, std::vector<int>& args,
                std::vector<int>& image) const {
    Rational rhs = 0;
    for (std::size_t idx : chosen) rhs += values[idx];
    Rational lhs = 0;
    for (std::size_t s = 0; s < omega.support.size(); ++s) {
      const FiniteOperation& g = omega.support[s].first;
      for (int c = 0; c < k; ++c) {
        for (int i = 0; i < m; ++i)
          args[static_cast<std::size_t>(i)] =
              tuples[chosen[static_cast<std::size_t>(i)]][static_cast<std::size_t>(c)];
        image[static_cast<std::size_t>(c)] = g.apply(args);
      }
      const ExtRational& v = f.values[tuple_index(image, n)];
      if (v.is_infinite()) return true;
      lhs += scaled_weights[s] * v.value();
    }
    return lhs > rhs;
  }

  // Scans all continuations of chosen[0..depth) in order; true on the first
  // violation, leaving it in chosen.
  bool scan(std::vector<std::size_t>& chosen, std::size_t depth, bool sorted,
            std::vector<int>& args, std::vector<int>& image) const {
    if (depth == chosen.size()) return violated(chosen, args, image);
    const std::size_t start = sorted && depth > 0 ? chosen[depth - 1] : 0;
    for (std::size_t i = start; i < tuples.size(); ++i) {
      chosen[depth] = i;
      if (scan(chosen, depth + 1, sorted, args, image)) return true;
    }
    return false;
  }
};

}  // namespace

Improvement improves(const FractionalOperation& omega, const FiniteTable& f, std::size_t n) {
  omega.validate();
  for (const auto& [g, w] : omega.support)
    if (g.domain_size != n) throw Error("operation and table use different domains");
  const ImprovementScan scan(omega, f, n);
  bool sorted = true;
  for (const auto& [g, w] : omega.support) sorted = sorted && is_fully_symmetric(g);

  const auto count = static_cast<long long>(scan.tuples.size());
  std::atomic<long long> first{LLONG_MAX};
  std::vector<std::size_t> best_chosen;
#pragma omp parallel
  {
    std::vector<std::size_t> chosen(static_cast<std::size_t>(scan.m));
    std::vector<int> args(static_cast<std::size_t>(scan.m));
    std::vector<int> image(static_cast<std::size_t>(scan.k));
#pragma omp for schedule(dynamic)
    for (long long i = 0; i < count; ++i) {
      if (i > first.load()) continue;
      chosen[0] = static_cast<std::size_t>(i);
      if (!scan.scan(chosen, 1, sorted, args, image)) continue;
#pragma omp critical
      {
        if (i < first.load()) {
          first.store(i);
          best_chosen = chosen;
        }
      }
    }
  }
  Improvement out;
  if (first.load() == LLONG_MAX) return out;
  out.improved = false;
  for (std::size_t idx : best_chosen) out.witness.push_back(scan.tuples[idx]);
  return out;
}

StructureImprovement check_structure_improved(const FiniteValuedStructure& delta,
                                              const FractionalOperation& omega) {
  for (const auto& [name, table] : delta.tables) {
    Improvement r = improves(omega, table, delta.domain_size);
    if (!r.improved) return StructureImprovement{false, name, std::move(r.witness)};
  }
  return {};
}

namespace {

void enumerate_multisets(std::size_t n, int m, std::size_t start, std::vector<int>& cur,
                         std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == m) {
    out.push_back(cur);
    return;
  }
  for (std::size_t a = start; a < n; ++a) {
    cur.push_back(static_cast<int>(a));
    enumerate_multisets(n, m, a, cur, out);
    cur.pop_back();
  }
}

// Minimum over orderings of columns 1..k-1 of sum_i f(column entries at i).
void min_over_orderings(const FiniteTable& f, std::size_t n, std::vector<std::vector<int>>& cols,
                        std::size_t l, ExtRational& best) {
  const std::size_t k = cols.size();
  if (l == k) {
    ExtRational sum(0);
    std::vector<int> t(k);
    for (std::size_t i = 0; i < cols[0].size(); ++i) {
      for (std::size_t c = 0; c < k; ++c) t[c] = cols[c][i];
      sum += f.values[tuple_index(t, n)];
      if (sum.is_infinite()) return;
    }
    if (sum < best) best = sum;
    return;
  }
  std::sort(cols[l].begin(), cols[l].end());
  do {
    min_over_orderings(f, n, cols, l + 1, best);
  } while (std::next_permutation(cols[l].begin(), cols[l].end()));
}

}  // namespace

MultisetStructure multiset_structure(const FiniteValuedStructure& delta, int m,
                                     std::size_t max_entries) {
  if (m < 1) throw Error("multiset size must be positive");
  MultisetStructure out;
  out.m = m;
  std::vector<int> cur;
  enumerate_multisets(delta.domain_size, m, 0, cur, out.multisets);
  const std::size_t size = out.multisets.size();
  double factorial = 1;
  for (int i = 2; i <= m; ++i) factorial *= i;
  for (const auto& [name, t] : delta.tables) {
    const double work = std::pow(static_cast<double>(size), t.arity) *
                        std::pow(factorial, t.arity - 1);
    if (work > static_cast<double>(max_entries))
      throw SizeGuardError("multiset structure of '" + name + "'", work,
                           static_cast<double>(max_entries));
  }
  out.structure.domain_size = size;
  const Rational inv_m = make_rational(1, m);
  for (const auto& [name, t] : delta.tables) {
    out.structure.tables.emplace(name, tabulate(size, t.arity, [&](std::span<const int> alpha) {
      std::vector<std::vector<int>> cols;
      for (int a : alpha) cols.push_back(out.multisets[static_cast<std::size_t>(a)]);
      ExtRational best = ExtRational::infinity();
      min_over_orderings(t, delta.domain_size, cols, 1, best);
      return best.scaled(inv_m);
    }));
  }
  return out;
}

FractionalHomomorphism check_fractional_homomorphism(const FiniteValuedStructure& source,
                                                     const FiniteValuedStructure& target,
                                                     std::size_t max_maps) {
  const std::size_t ns = source.domain_size, nt = target.domain_size;
  const double maps_d = std::pow(static_cast<double>(nt), static_cast<double>(ns));
  if (maps_d > static_cast<double>(max_maps))
    throw SizeGuardError("maps between domains", maps_d, static_cast<double>(max_maps));
  for (const auto& [name, t] : source.tables) {
    auto it = target.tables.find(name);
    if (it == target.tables.end()) throw Error("target lacks cost function '" + name + "'");
    if (it->second.arity != t.arity) throw Error("arity mismatch for '" + name + "'");
  }

  struct Row {
    const FiniteTable* target;
    std::vector<int> tuple;
    Rational bound;
  };
  std::vector<Row> rows;
  for (const auto& [name, t] : source.tables) {
    std::vector<int> tuple(static_cast<std::size_t>(t.arity));
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      if (t.values[i].is_infinite()) continue;
      decode_tuple(i, ns, tuple);
      rows.push_back(Row{&target.tables.at(name), tuple, t.values[i].value()});
    }
  }

  // Allowed maps and their image costs per row.
  const std::size_t total = static_cast<std::size_t>(maps_d);
  std::vector<std::vector<int>> maps;
  std::vector<std::vector<Rational>> costs;
  std::vector<int> g(ns), image;
  for (std::size_t code = 0; code < total; ++code) {
    decode_tuple(code, nt, g);
    std::vector<Rational> c;
    bool allowed = true;
    for (const auto& row : rows) {
      image.clear();
      for (int a : row.tuple) image.push_back(g[static_cast<std::size_t>(a)]);
      const ExtRational& v = row.target->values[tuple_index(image, nt)];
      if (v.is_infinite()) {
        allowed = false;
        break;
      }
      c.push_back(v.value());
    }
    if (!allowed) continue;
    maps.push_back(g);
    costs.push_back(std::move(c));
  }

  FractionalHomomorphism out;
  if (maps.empty()) return out;
  LinearProgram lp;
  std::vector<LinearTerm> all;
  for (std::size_t j = 0; j < maps.size(); ++j) {
    const int v = lp.add_variable("w" + std::to_string(j));
    all.push_back(LinearTerm{v, 1});
  }
  lp.add_constraint(all, Sense::Equal, 1);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<LinearTerm> terms;
    for (std::size_t j = 0; j < maps.size(); ++j)
      if (sgn(costs[j][r]) != 0) terms.push_back(LinearTerm{static_cast<int>(j), costs[j][r]});
    lp.add_constraint(std::move(terms), Sense::LessEq, rows[r].bound);
  }
  const LPResult res = solve_lp(lp);
  if (res.status != LPStatus::Optimal) return out;
  out.feasible = true;
  for (std::size_t j = 0; j < maps.size(); ++j)
    if (sgn(res.point[j]) > 0) out.weights.emplace_back(maps[j], res.point[j]);
  return out;
}

std::optional<std::pair<std::vector<int>, std::vector<int>>> submodularity_witness(
    const FiniteTable& f, std::size_t n) {
  const std::size_t k = static_cast<std::size_t>(f.arity);
  std::vector<int> a(k), b(k), lo(k), hi(k);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (f.values[i].is_infinite()) continue;
    decode_tuple(i, n, a);
    for (std::size_t j = i + 1; j < f.values.size(); ++j) {
      if (f.values[j].is_infinite()) continue;
      decode_tuple(j, n, b);
      for (std::size_t c = 0; c < k; ++c) {
        lo[c] = std::min(a[c], b[c]);
        hi[c] = std::max(a[c], b[c]);
      }
      const ExtRational lhs = f.values[i] + f.values[j];
      const ExtRational rhs = f.values[tuple_index(lo, n)] + f.values[tuple_index(hi, n)];
      if (lhs < rhs) return std::make_pair(a, b);
    }
  }
  return std::nullopt;
}

std::optional<std::pair<std::vector<int>, int>> monotonicity_witness(const FiniteTable& f,
                                                                     std::size_t n) {
  const std::size_t k = static_cast<std::size_t>(f.arity);
  std::vector<int> t(k), u(k);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    decode_tuple(i, n, t);
    for (std::size_t c = 0; c < k; ++c) {
      if (static_cast<std::size_t>(t[c]) + 1 >= n) continue;
      u = t;
      ++u[c];
      if (f.values[i] > f.values[tuple_index(u, n)])
        return std::make_pair(t, static_cast<int>(c));
    }
  }
  return std::nullopt;
}

namespace {

std::vector<MixedConstraint> guard_rows(const Conjunction& guard, int arity) {
  std::vector<int> identity(static_cast<std::size_t>(arity));
  for (int i = 0; i < arity; ++i) identity[static_cast<std::size_t>(i)] = i;
  std::vector<MixedConstraint> rows;
  for (const auto& a : guard) {
    if (a.is_top()) continue;
    MixedConstraint row;
    Rational constant = 0;
    for (const auto& [t, sign] : {std::pair{&a.lhs, 1}, std::pair{&a.rhs, -1}}) {
      if (t->is_constant())
        constant += sign * t->coeff;
      else
        row.terms.push_back(LinearTerm{*t->var, sign * t->coeff});
    }
    row.rhs = -constant;
    row.rel = a.is_bottom()          ? MixedRel::Less
              : a.rel == Rel::Less   ? MixedRel::Less
              : a.rel == Rel::Equal  ? MixedRel::Equal
                                     : MixedRel::LessEq;
    if (a.is_bottom()) row = MixedConstraint{{}, MixedRel::Less, Rational(0)};
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

ConvexityCertificate certify_convex(const PLHCostFunction& f) {
  if (f.pieces.size() == 1) return {true, "single linear piece on a convex guard"};
  if (f.pieces.empty()) return {false, "empty domain"};

  // Coverage: the negated union of guards must be unsatisfiable.
  QFFormula uncovered = QFFormula::top();
  for (const auto& p : f.pieces) uncovered = conjunction(uncovered, negation(QFFormula{{p.guard}}));
  for (const auto& c : uncovered.disjuncts)
    if (strict_feasibility(f.arity, guard_rows(c, f.arity)).feasible)
      return {false, "guards do not cover every point"};

  // Domination: on the closure of guard p, value_q - value_p <= 0.
  for (std::size_t p = 0; p < f.pieces.size(); ++p) {
    LinearProgram base;
    for (int i = 0; i < f.arity; ++i) base.add_free_variable("x" + std::to_string(i));
    for (const auto& row : guard_rows(f.pieces[p].guard, f.arity))
      base.add_constraint(row.terms, row.rel == MixedRel::Equal ? Sense::Equal : Sense::LessEq,
                          row.rhs);
    for (std::size_t q = 0; q < f.pieces.size(); ++q) {
      if (q == p) continue;
      LinearProgram lp = base;
      Rational offset = 0;
      // minimize value_p - value_q
      for (const auto& [t, sign] :
           {std::pair{&f.pieces[p].value, 1}, std::pair{&f.pieces[q].value, -1}}) {
        if (t->is_constant())
          offset += sign * t->coeff;
        else
          lp.objective[static_cast<std::size_t>(*t->var)] += sign * t->coeff;
      }
      const LPResult r = solve_lp(lp);
      if (r.status == LPStatus::Infeasible) continue;
      if (r.status == LPStatus::Unbounded || r.value + offset < 0)
        return {false, "piece " + std::to_string(q) + " exceeds piece " + std::to_string(p) +
                           " on its guard"};
    }
  }
  return {true, "pointwise maximum of linear pieces"};
}

}  // namespace plhvcsp

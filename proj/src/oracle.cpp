#include "plhvcsp/oracle.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include "plhvcsp/errors.hpp"

namespace plhvcsp {

namespace {

struct BoundApplication {
  const FiniteTable* table;
  std::vector<int> args;
};

std::vector<BoundApplication> bind(const FiniteValuedStructure& delta,
                                   const VcspInstance& instance) {
  std::vector<BoundApplication> out;
  for (const auto& app : instance.applications) {
    auto it = delta.tables.find(app.symbol);
    if (it == delta.tables.end()) throw Error("unknown cost function '" + app.symbol + "'");
    out.push_back(BoundApplication{&it->second, app.args});
  }
  return out;
}

ExtRational cost_at(const std::vector<BoundApplication>& apps, std::size_t n,
                    std::span<const int> assignment) {
  ExtRational total(0);
  for (const auto& app : apps) {
    std::size_t idx = 0;
    for (int a : app.args) idx = idx * n + static_cast<std::size_t>(assignment[static_cast<std::size_t>(a)]);
    total += app.table->values[idx];
    if (total.is_infinite()) break;
  }
  return total;
}

// Tables rescaled to a common denominator, as int64 with a sentinel for
// +inf. Empty when some scaled sum could overflow.
struct ScaledTables {
  Integer denominator;
  std::vector<std::vector<std::int64_t>> values;  // per application
};

constexpr std::int64_t kScaledInfinity = std::numeric_limits<std::int64_t>::max();

std::optional<ScaledTables> scaled_tables(const std::vector<BoundApplication>& apps) {
  ScaledTables out;
  out.denominator = 1;
  for (const auto& app : apps)
    for (const auto& v : app.table->values)
      if (v.is_finite())
        mpz_lcm(out.denominator.get_mpz_t(), out.denominator.get_mpz_t(),
                v.value().get_den_mpz_t());
  const Integer limit = Integer(1) << (62 - 8);  // headroom for up to 256 summands
  if (apps.size() > 256) return std::nullopt;
  for (const auto& app : apps) {
    std::vector<std::int64_t> row;
    row.reserve(app.table->values.size());
    for (const auto& v : app.table->values) {
      if (v.is_infinite()) {
        row.push_back(kScaledInfinity);
        continue;
      }
      const Integer scaled = v.value().get_num() * (out.denominator / v.value().get_den());
      if (abs(scaled) >= limit) return std::nullopt;
      row.push_back(scaled.get_si());
    }
    out.values.push_back(std::move(row));
  }
  return out;
}

BruteResult brute_min_scaled(const ScaledTables& tables, const std::vector<BoundApplication>& apps,
                             std::size_t n, int vars, long long total) {
  std::int64_t best = kScaledInfinity;
  long long best_index = -1;
#pragma omp parallel
  {
    std::int64_t local = kScaledInfinity;
    long long local_index = -1;
    std::vector<int> assignment(static_cast<std::size_t>(vars));
#pragma omp for schedule(static)
    for (long long i = 0; i < total; ++i) {
      decode_tuple(static_cast<std::size_t>(i), n, assignment);
      std::int64_t c = 0;
      for (std::size_t j = 0; j < apps.size(); ++j) {
        std::size_t idx = 0;
        for (int a : apps[j].args)
          idx = idx * n + static_cast<std::size_t>(assignment[static_cast<std::size_t>(a)]);
        const std::int64_t v = tables.values[j][idx];
        if (v == kScaledInfinity) {
          c = kScaledInfinity;
          break;
        }
        c += v;
      }
      if (local_index < 0 || c < local) {
        local = c;
        local_index = i;
      }
    }
#pragma omp critical
    {
      if (local_index >= 0 &&
          (best_index < 0 || local < best || (local == best && local_index < best_index))) {
        best = local;
        best_index = local_index;
      }
    }
  }
  BruteResult r{ExtRational::infinity(), std::vector<int>(static_cast<std::size_t>(vars))};
  if (best != kScaledInfinity) r.value = ExtRational(make_rational(Integer(static_cast<long>(best)), tables.denominator));
  if (best_index >= 0) decode_tuple(static_cast<std::size_t>(best_index), n, r.argmin);
  return r;
}

void add_term(std::vector<LinearTerm>& terms, Rational& constant, const Term& t,
              const std::vector<int>& args, const Rational& sign) {
  if (t.is_constant()) {
    constant += sign * t.coeff;
  } else {
    terms.push_back(LinearTerm{args[static_cast<std::size_t>(*t.var)], sign * t.coeff});
  }
}

MixedConstraint atom_row(const Atom& a, const std::vector<int>& args) {
  // lhs - rhs REL 0, constants moved right.
  MixedConstraint row;
  Rational constant = 0;
  add_term(row.terms, constant, a.lhs, args, Rational(1));
  add_term(row.terms, constant, a.rhs, args, Rational(-1));
  row.rhs = -constant;
  row.rel = a.rel == Rel::Less ? MixedRel::Less : a.rel == Rel::Equal ? MixedRel::Equal
                                                                       : MixedRel::LessEq;
  return row;
}

MixedConstraint objective_row(const ValuedStructure& gamma, const VcspInstance& instance,
                              const std::vector<std::size_t>& selection, const Rational& u) {
  MixedConstraint row;
  row.rel = MixedRel::LessEq;
  Rational constant = 0;
  for (std::size_t j = 0; j < instance.applications.size(); ++j) {
    const auto& app = instance.applications[j];
    const Piece& p = gamma.at(app.symbol).pieces[selection[j]];
    add_term(row.terms, constant, p.value, app.args, Rational(1));
  }
  row.rhs = u - constant;
  return row;
}

std::size_t count_selections(const ValuedStructure& gamma, const VcspInstance& instance,
                             std::size_t cap) {
  double total = 1;
  for (const auto& app : instance.applications)
    total *= static_cast<double>(gamma.at(app.symbol).pieces.size());
  if (total > static_cast<double>(cap))
    throw SizeGuardError("piece selections", total, static_cast<double>(cap));
  return static_cast<std::size_t>(total);
}

// Advances a mixed-radix counter; false after the last selection.
bool next_selection(const ValuedStructure& gamma, const VcspInstance& instance,
                    std::vector<std::size_t>& sel) {
  for (std::size_t j = sel.size(); j-- > 0;) {
    if (++sel[j] < gamma.at(instance.applications[j].symbol).pieces.size()) return true;
    sel[j] = 0;
  }
  return false;
}

}  // namespace

BruteResult brute_min(const FiniteValuedStructure& delta, const VcspInstance& instance,
                      std::size_t max_assignments) {
  const std::size_t n = delta.domain_size;
  const int vars = static_cast<int>(instance.variables.size());
  const double total_d = std::pow(static_cast<double>(n), vars);
  if (total_d > static_cast<double>(max_assignments))
    throw SizeGuardError("brute-force assignments", total_d, static_cast<double>(max_assignments));
  const auto apps = bind(delta, instance);
  const auto total = static_cast<long long>(power(n, vars));
  if (auto fast = scaled_tables(apps)) return brute_min_scaled(*fast, apps, n, vars, total);

  ExtRational best = ExtRational::infinity();
  long long best_index = -1;
#pragma omp parallel
  {
    ExtRational local = ExtRational::infinity();
    long long local_index = -1;
    std::vector<int> assignment(static_cast<std::size_t>(vars));
#pragma omp for schedule(static)
    for (long long i = 0; i < total; ++i) {
      decode_tuple(static_cast<std::size_t>(i), n, assignment);
      ExtRational c = cost_at(apps, n, assignment);
      if (local_index < 0 || c < local) {
        local = std::move(c);
        local_index = i;
      }
    }
#pragma omp critical
    {
      if (local_index >= 0 &&
          (best_index < 0 || local < best || (local == best && local_index < best_index))) {
        best = local;
        best_index = local_index;
      }
    }
  }
  BruteResult r{best, std::vector<int>(static_cast<std::size_t>(vars))};
  if (best_index >= 0) decode_tuple(static_cast<std::size_t>(best_index), n, r.argmin);
  return r;
}

std::vector<MixedConstraint> selection_rows(const ValuedStructure& gamma,
                                            const VcspInstance& instance,
                                            const std::vector<std::size_t>& selection) {
  std::vector<MixedConstraint> rows;
  for (std::size_t j = 0; j < instance.applications.size(); ++j) {
    const auto& app = instance.applications[j];
    const Piece& p = gamma.at(app.symbol).pieces[selection[j]];
    for (const auto& a : p.guard) {
      if (a.is_top()) continue;
      if (a.is_bottom()) {
        rows.push_back(MixedConstraint{{}, MixedRel::Less, Rational(0)});  // 0 < 0
        continue;
      }
      rows.push_back(atom_row(a, app.args));
    }
  }
  return rows;
}

QDecision q_decide(const ValuedStructure& gamma, const VcspInstance& instance, const Rational& u,
                   std::size_t max_selections) {
  validate(gamma, instance);
  QDecision out;
  const int vars = static_cast<int>(instance.variables.size());
  for (const auto& app : instance.applications)
    if (gamma.at(app.symbol).pieces.empty()) return out;
  count_selections(gamma, instance, max_selections);
  std::vector<std::size_t> sel(instance.applications.size(), 0);
  do {
    ++out.selections_tried;
    auto rows = selection_rows(gamma, instance, sel);
    rows.push_back(objective_row(gamma, instance, sel, u));
    StrictResult r = strict_feasibility(vars, rows);
    if (r.feasible) {
      out.accept = true;
      out.witness = std::move(r.point);
      return out;
    }
  } while (next_selection(gamma, instance, sel));
  return out;
}

QInfimum q_infimum(const ValuedStructure& gamma, const VcspInstance& instance,
                   std::size_t max_selections) {
  validate(gamma, instance);
  QInfimum out;
  const int vars = static_cast<int>(instance.variables.size());
  for (const auto& app : instance.applications)
    if (gamma.at(app.symbol).pieces.empty()) return out;
  count_selections(gamma, instance, max_selections);
  std::optional<Rational> best;
  std::vector<std::size_t> sel(instance.applications.size(), 0);
  do {
    const auto rows = selection_rows(gamma, instance, sel);
    if (!strict_feasibility(vars, rows).feasible) continue;
    LinearProgram lp;
    for (int i = 0; i < vars; ++i) lp.add_free_variable("x" + std::to_string(i));
    for (const auto& row : rows)
      lp.add_constraint(row.terms, row.rel == MixedRel::Equal ? Sense::Equal : Sense::LessEq,
                        row.rhs);
    const MixedConstraint obj = objective_row(gamma, instance, sel, Rational(0));
    for (const auto& t : obj.terms) lp.objective[static_cast<std::size_t>(t.var)] += t.coeff;
    const LPResult r = solve_lp(lp);
    if (r.status == LPStatus::Unbounded) return QInfimum{InfimumKind::MinusInfinity, 0};
    if (r.status != LPStatus::Optimal) continue;
    const Rational v = r.value - obj.rhs;  // obj.rhs = -(constant part)
    if (!best || v < *best) best = v;
  } while (next_selection(gamma, instance, sel));
  if (!best) return out;
  out.value = *best;
  out.kind = q_decide(gamma, instance, *best, max_selections).accept ? InfimumKind::Attained
                                                                     : InfimumKind::NotAttained;
  return out;
}

}  // namespace plhvcsp

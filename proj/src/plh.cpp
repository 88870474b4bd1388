#include "plhvcsp/plh.hpp"

#include <algorithm>

#include "plhvcsp/errors.hpp"

namespace plhvcsp {

void PLHCostFunction::add_piece(const QFFormula& guard, const Term& value) {
  QFFormula normalized = QFFormula::bottom();
  for (const auto& c : guard.disjuncts) {
    QFFormula acc = QFFormula::top();
    for (const auto& a : c) acc = conjunction(acc, normalize_atom(a));
    normalized = disjunction(std::move(normalized), acc);
  }
  for (auto& c : normalized.disjuncts) pieces.push_back(Piece{std::move(c), value});
}

void PLHCostFunction::add_piece(std::span<const Atom> guard, const Term& value) {
  add_piece(QFFormula{{Conjunction(guard.begin(), guard.end())}}, value);
}

int VcspInstance::variable_index(const std::string& name) const {
  auto it = std::find(variables.begin(), variables.end(), name);
  return it == variables.end() ? -1 : static_cast<int>(it - variables.begin());
}

namespace {

void check_term(const Term& t, int arity, const std::string& name) {
  if (t.var && (*t.var < 0 || *t.var >= arity))
    throw Error("cost function '" + name + "' references argument " + std::to_string(*t.var) +
                " but has arity " + std::to_string(arity));
}

}  // namespace

void validate(const ValuedStructure& gamma) {
  for (const auto& [name, f] : gamma) {
    if (f.arity <= 0) throw Error("cost function '" + name + "' must have positive arity");
    for (const auto& p : f.pieces) {
      check_term(p.value, f.arity, name);
      for (const auto& a : p.guard) {
        check_term(a.lhs, f.arity, name);
        check_term(a.rhs, f.arity, name);
      }
    }
  }
}

void validate(const ValuedStructure& gamma, const VcspInstance& instance) {
  validate(gamma);
  const int n = static_cast<int>(instance.variables.size());
  for (std::size_t i = 0; i < instance.variables.size(); ++i)
    for (std::size_t j = i + 1; j < instance.variables.size(); ++j)
      if (instance.variables[i] == instance.variables[j])
        throw Error("duplicate variable '" + instance.variables[i] + "'");
  for (const auto& app : instance.applications) {
    auto it = gamma.find(app.symbol);
    if (it == gamma.end()) throw Error("unknown cost function '" + app.symbol + "'");
    if (static_cast<int>(app.args.size()) != it->second.arity)
      throw Error("cost function '" + app.symbol + "' applied to " +
                  std::to_string(app.args.size()) + " arguments, arity is " +
                  std::to_string(it->second.arity));
    for (int a : app.args)
      if (a < 0 || a >= n) throw Error("application of '" + app.symbol + "' uses unknown variable");
  }
}

ExtRational evaluate_cost(const PLHCostFunction& f, std::span<const Rational> point) {
  ExtRational best = ExtRational::infinity();
  for (const auto& p : f.pieces) {
    if (!eval_conjunction(p.guard, point)) continue;
    ExtRational v(term_value(p.value, point));
    if (v < best) best = std::move(v);
  }
  return best;
}

ExtRational evaluate_objective(const ValuedStructure& gamma, const VcspInstance& instance,
                               std::span<const Rational> assignment) {
  ExtRational total(0);
  std::vector<Rational> point;
  for (const auto& app : instance.applications) {
    point.clear();
    for (int a : app.args) point.push_back(assignment[static_cast<std::size_t>(a)]);
    total += evaluate_cost(gamma.at(app.symbol), point);
    if (total.is_infinite()) break;
  }
  return total;
}

std::vector<Atom> signature_atoms(const ValuedStructure& gamma, bool include_graph) {
  std::vector<Atom> out;
  auto add = [&out](const QFFormula& f) {
    for (const auto& c : f.disjuncts)
      for (const auto& a : c) out.push_back(a);
  };
  for (const auto& [name, f] : gamma)
    for (const auto& p : f.pieces) {
      for (const auto& a : p.guard) add(normalize_atom(a));
      if (include_graph)
        add(normalize_atom(Term::scaled(1, f.arity), RawRel::Equal, p.value));
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::map<std::string, QFFormula> feas_structure(const ValuedStructure& gamma) {
  std::map<std::string, QFFormula> out;
  for (const auto& [name, f] : gamma) {
    QFFormula r = QFFormula::bottom();
    for (const auto& p : f.pieces) r = disjunction(std::move(r), QFFormula{{p.guard}});
    out.emplace(name, std::move(r));
  }
  return out;
}

ValuedStructure feasibility_encoding(const ValuedStructure& gamma) {
  ValuedStructure out = gamma;
  for (auto& [name, f] : out)
    for (auto& p : f.pieces) p.value = Term::constant(0);
  return out;
}

}  // namespace plhvcsp

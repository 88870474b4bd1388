#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plhvcsp/formula.hpp"
#include "plhvcsp/rational.hpp"

namespace plhvcsp {

// One piece of a cost function: where `guard` holds, `value` is a candidate
// cost. Variable indices refer to argument positions.
struct Piece {
  Conjunction guard;
  Term value;

  friend bool operator==(const Piece&, const Piece&) = default;
};

// f(x) = min{ value_p(x) : guard_p(x) }, +inf if no guard holds.
struct PLHCostFunction {
  int arity = 0;
  std::vector<Piece> pieces;

  // Normalizes the guard and splits it into one piece per DNF disjunct.
  void add_piece(const QFFormula& guard, const Term& value);
  void add_piece(std::span<const Atom> guard, const Term& value);
};

using ValuedStructure = std::map<std::string, PLHCostFunction>;

struct Application {
  std::string symbol;
  std::vector<int> args;  // indices into VcspInstance::variables

  friend bool operator==(const Application&, const Application&) = default;
};

struct VcspInstance {
  std::vector<std::string> variables;
  std::vector<Application> applications;
  std::optional<Rational> threshold;

  int variable_index(const std::string& name) const;  // -1 if absent
};

// Values indexed like VcspInstance::variables.
using Assignment = std::vector<Rational>;

// Throws Error on arity mismatch, unknown symbols or out-of-range indices.
void validate(const ValuedStructure& gamma);
void validate(const ValuedStructure& gamma, const VcspInstance& instance);

ExtRational evaluate_cost(const PLHCostFunction& f, std::span<const Rational> point);
ExtRational evaluate_objective(const ValuedStructure& gamma, const VcspInstance& instance,
                               std::span<const Rational> assignment);

// Normalized guard atoms of every piece, sorted and deduplicated. With
// include_graph, also the atom v = c*x_i (or v = c*1) of each piece value,
// where v is the reserved slot index `arity` of its cost function.
std::vector<Atom> signature_atoms(const ValuedStructure& gamma, bool include_graph = true);

// Per symbol, the disjunction of its piece guards.
std::map<std::string, QFFormula> feas_structure(const ValuedStructure& gamma);

// Same guards, every value replaced by 0: the 0/+inf encoding of feas(gamma).
ValuedStructure feasibility_encoding(const ValuedStructure& gamma);

}  // namespace plhvcsp

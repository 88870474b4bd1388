#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plhvcsp/rational.hpp"

namespace plhvcsp {

enum class Sense { LessEq, Equal, GreaterEq };

struct LinearTerm {
  int var;
  Rational coeff;
};

struct Constraint {
  std::vector<LinearTerm> terms;
  Sense sense = Sense::LessEq;
  Rational rhs;
};

// minimize sum objective_v * v subject to constraints and per-variable
// bounds. A missing bound is infinite; variables default to v >= 0.
struct LinearProgram {
  std::vector<std::string> names;
  std::vector<std::optional<Rational>> lower;
  std::vector<std::optional<Rational>> upper;
  std::vector<Rational> objective;
  std::vector<Constraint> constraints;

  int add_variable(std::string name, std::optional<Rational> lo = Rational(0),
                   std::optional<Rational> hi = std::nullopt, Rational cost = 0);
  int add_free_variable(std::string name, Rational cost = 0) {
    return add_variable(std::move(name), std::nullopt, std::nullopt, std::move(cost));
  }
  void add_constraint(std::vector<LinearTerm> terms, Sense sense, Rational rhs);
  std::size_t variable_count() const { return names.size(); }
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPResult {
  LPStatus status = LPStatus::Infeasible;
  Rational value;              // Optimal only
  std::vector<Rational> point;  // Optimal only, indexed like the program's variables
};

enum class PivotRule {
  Bland,
  // Most negative reduced cost. A run of degenerate pivots turns on the
  // lexicographic ratio test, a much longer one Bland's rule.
  DantzigBland,
};

struct LPOptions {
  PivotRule rule = PivotRule::DantzigBland;
  int lexicographic_after = 1000;
  int degenerate_run_limit = 20000;
};

LPResult solve_lp(const LinearProgram& program, const LPOptions& options = {});

// Objective line first ("min: ..."), then one line per constraint, then
// the finite bounds; rationals as p/q.
std::string dump_lp(const LinearProgram& program);

enum class MixedRel { Less, LessEq, Equal };

// sum terms REL rhs over free variables 0..variable_count-1.
struct MixedConstraint {
  std::vector<LinearTerm> terms;
  MixedRel rel = MixedRel::LessEq;
  Rational rhs;
};

struct StrictResult {
  bool feasible = false;
  Rational slack;               // optimal delta
  std::vector<Rational> point;  // a solution when feasible
};

// Decides a system mixing strict and weak linear constraints: every strict
// row s < t becomes s + delta <= t, delta in [0, 1] is maximized, and the
// system is feasible iff the optimum is positive.
StrictResult strict_feasibility(int variable_count, const std::vector<MixedConstraint>& rows,
                                const LPOptions& options = {});

bool satisfies(const LinearProgram& program, const std::vector<Rational>& point);

}  // namespace plhvcsp

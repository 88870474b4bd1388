#pragma once

#include <cstddef>
#include <vector>

#include "plhvcsp/finite.hpp"
#include "plhvcsp/lp.hpp"
#include "plhvcsp/plh.hpp"

namespace plhvcsp {

struct BruteResult {
  ExtRational value;
  std::vector<int> argmin;  // domain indices; the lexicographically first minimizer
};

// Exhaustive minimum over domain^variables. OpenMP-parallel; ties resolve to
// the lexicographically first assignment, as in the serial reference.
BruteResult brute_min(const FiniteValuedStructure& delta, const VcspInstance& instance,
                      std::size_t max_assignments = 50000000);

struct QDecision {
  bool accept = false;
  Assignment witness;  // when accepted
  std::size_t selections_tried = 0;
};

// Exact decision over Q: some choice of one piece per application has a
// point satisfying the chosen guards with total value <= u.
QDecision q_decide(const ValuedStructure& gamma, const VcspInstance& instance, const Rational& u,
                   std::size_t max_selections = 2000000);

enum class InfimumKind { Infeasible, Attained, NotAttained, MinusInfinity };

struct QInfimum {
  InfimumKind kind = InfimumKind::Infeasible;
  Rational value;  // Attained / NotAttained only
};

// Advisory: infimum of the objective over Q, by minimizing over the closure
// of each satisfiable piece selection.
QInfimum q_infimum(const ValuedStructure& gamma, const VcspInstance& instance,
                   std::size_t max_selections = 2000000);

// Constraint rows of one piece selection (guards only, over instance variables).
std::vector<MixedConstraint> selection_rows(const ValuedStructure& gamma,
                                            const VcspInstance& instance,
                                            const std::vector<std::size_t>& selection);

}  // namespace plhvcsp

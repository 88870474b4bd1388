#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "plhvcsp/finite.hpp"
#include "plhvcsp/lp.hpp"
#include "plhvcsp/plh.hpp"
#include "plhvcsp/sampling.hpp"

namespace plhvcsp {

struct BLPModel {
  LinearProgram lp;
  // Per application: (tuple index, LP variable) for tuples of finite cost.
  std::vector<std::vector<std::pair<std::size_t, int>>> lambda;
  // Per instance variable and domain element: LP variable.
  std::vector<std::vector<int>> mu;
};

BLPModel build_blp(const VcspInstance& instance, const FiniteValuedStructure& delta);

struct BLPSolution {
  ExtRational value;  // +inf when the relaxation is infeasible
  std::vector<Rational> point;
};

BLPSolution solve_blp(const BLPModel& model, const LPOptions& options = {});
ExtRational blp_value(const VcspInstance& instance, const FiniteValuedStructure& delta);

struct SolveOptions {
  std::optional<int> d;  // defaults to the number of instance variables
  std::size_t max_domain = 5000;
  std::size_t max_tuples = 20000000;
};

struct Decision {
  bool accept = false;
  ExtRational blp;
  Sample sample;
};

// Sampling + BLP: accept iff blp(I, sample) <= threshold. Throws Error if
// the instance has no threshold.
Decision solve_decide(const ValuedStructure& gamma, const VcspInstance& instance,
                      const SolveOptions& options = {});

SampleOptions sample_options_for(const ValuedStructure& gamma, const VcspInstance& instance,
                                 const SolveOptions& options);

// Self-reduction: pins variables in declared order to the first domain
// element (ascending) that keeps blp <= u. Returns domain indices. Throws
// NoExtension when no pin works.
std::vector<int> extract_assignment(const VcspInstance& instance,
                                    const FiniteValuedStructure& delta, const Rational& u);

ExtRational finite_objective(const FiniteValuedStructure& delta, const VcspInstance& instance,
                             std::span<const int> assignment);

}  // namespace plhvcsp

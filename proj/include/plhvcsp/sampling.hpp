#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "plhvcsp/finite.hpp"
#include "plhvcsp/formula.hpp"
#include "plhvcsp/laurent.hpp"
#include "plhvcsp/plh.hpp"

namespace plhvcsp {

// Magnitudes |k| * prod |h_i|^{e_i} with sum |e_i| < d, over k in hk.k and
// h in hk.h. Zero magnitudes are dropped; the result is sorted and
// deduplicated. Throws SizeGuardError past max_size elements.
std::vector<LaurentNum> compute_C(const HKSets& hk, int d, std::size_t max_size = 100000);

// Adds eps and 1/eps to K (the bounding atoms of the augmented atom set).
HKSets augment_hk(HKSets hk);

// -C* u {0} u C*, with C* = { x + n x eps^3 : x in C, |n| <= d }. Sorted.
std::vector<LaurentNum> compute_D(std::span<const LaurentNum> c, int d);

// (1/6) min(diff) / max(diff), diff = positive differences over c u {0}.
// Throws EmptyInput when c is empty.
Rational compute_epsilon(std::span<const Rational> c);

Rational eta_map(const LaurentNum& x, const Rational& eps_value);

// Linear objective sum_j values_j <= threshold; the terms' variables are
// ignored, only their coefficients and constants matter.
struct ObjectiveHint {
  std::vector<std::vector<Term>> candidates;  // per application: candidate value terms
  Rational threshold;
};

struct SampleOptions {
  int d = 1;
  // Put value-graph atoms into the atom set driving C.
  bool include_value_atoms = false;
  std::optional<ObjectiveHint> objective;
  std::size_t max_domain = 5000;
  std::size_t max_tuples = 20000000;
};

struct SampleDomain {
  std::vector<LaurentNum> elements;  // D, sorted
  Rational eps;
  std::vector<Rational> rational_elements;  // eta(D), same order
  Rational base_eps;  // value of compute_epsilon before refinement
};

// D for the given atoms, with eps small enough that eta preserves every
// atom of `atoms` on D (and the objective, if given). Throws OrderViolation
// if the post-check fails.
SampleDomain build_sample_domain(std::span<const Atom> atoms, const SampleOptions& options);

struct Sample {
  SampleDomain domain;
  FiniteValuedStructure structure;
};

// Restriction of gamma to eta(D).
Sample build_sample(const ValuedStructure& gamma, const SampleOptions& options);

// Hint for instance at threshold u.
ObjectiveHint objective_hint(const ValuedStructure& gamma, const VcspInstance& instance,
                             const Rational& u);

// Tabulates f over domain^arity; OpenMP-parallel over tuples.
FiniteTable tabulate_cost(const PLHCostFunction& f, std::span<const Rational> domain);

}  // namespace plhvcsp

#pragma once

// Serial counterparts of the OpenMP kernels. Kept simple on purpose; the
// tests compare them against the parallel versions and the benchmark times
// both.

#include <cstddef>
#include <span>

#include "plhvcsp/finite.hpp"
#include "plhvcsp/fpol.hpp"
#include "plhvcsp/oracle.hpp"
#include "plhvcsp/plh.hpp"

namespace plhvcsp::reference {

BruteResult brute_min_serial(const FiniteValuedStructure& delta, const VcspInstance& instance);

FiniteTable tabulate_cost_serial(const PLHCostFunction& f, std::span<const Rational> domain);

// Visits every m-tuple of dom(f) tuples, with no symmetry shortcut.
Improvement improves_serial(const FractionalOperation& omega, const FiniteTable& f,
                            std::size_t n);

}  // namespace plhvcsp::reference

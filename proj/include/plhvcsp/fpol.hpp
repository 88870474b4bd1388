#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "plhvcsp/finite.hpp"
#include "plhvcsp/plh.hpp"

namespace plhvcsp {

// k-ary operation on {0..n-1}, tabulated like FiniteTable.
struct FiniteOperation {
  int arity = 0;
  std::size_t domain_size = 0;
  std::vector<int> table;
  std::string name;

  int apply(std::span<const int> args) const { return table[tuple_index(args, domain_size)]; }
};

enum class OpKind { Min, Max, KthSmallest, Avg, Median };

struct OpSpec {
  OpKind kind = OpKind::Min;
  int index = 1;  // KthSmallest only, 1-based
};

// "min", "max", "avg", "median", "s<i>" (i-th smallest).
OpSpec parse_op(std::string_view text);

// Avg needs rational labels and throws DomainNotClosed when some average is
// not a domain element. Median of an even number of arguments is the lower one.
FiniteOperation builtin_operation(const OpSpec& op, int k, std::size_t n,
                                  std::span<const Rational> labels = {});

// Invariant under every permutation of the arguments.
bool is_fully_symmetric(const FiniteOperation& g);
// Value depends only on the set of arguments.
bool is_totally_symmetric(const FiniteOperation& g);

template <class Fn>
bool is_fully_symmetric_fn(int k, std::size_t n, Fn&& fn) {
  std::vector<int> t(static_cast<std::size_t>(k)), s;
  for (std::size_t i = 0; i < power(n, k); ++i) {
    decode_tuple(i, n, t);
    s = t;
    std::sort(s.begin(), s.end());
    if (!(fn(std::span<const int>(t)) == fn(std::span<const int>(s)))) return false;
  }
  return true;
}

template <class Fn>
bool is_totally_symmetric_fn(int k, std::size_t n, Fn&& fn) {
  std::vector<int> a(static_cast<std::size_t>(k)), b(static_cast<std::size_t>(k));
  const std::size_t total = power(n, k);
  auto set_of = [](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  for (std::size_t i = 0; i < total; ++i) {
    decode_tuple(i, n, a);
    const auto sa = set_of(a);
    for (std::size_t j = i + 1; j < total; ++j) {
      decode_tuple(j, n, b);
      if (set_of(b) != sa) continue;
      if (!(fn(std::span<const int>(a)) == fn(std::span<const int>(b)))) return false;
    }
  }
  return true;
}

struct FractionalOperation {
  std::vector<std::pair<FiniteOperation, Rational>> support;

  int arity() const { return support.empty() ? 0 : support.front().first.arity; }
  // Throws Error unless weights are positive, sum to 1 and arities agree.
  void validate() const;
};

// Uniform over the k order statistics.
FractionalOperation omega_sub(int k, std::size_t n);
// Point mass on min^(k).
FractionalOperation omega_min(int k, std::size_t n);
FractionalOperation point_mass(FiniteOperation g);

struct Improvement {
  bool improved = true;
  std::vector<std::vector<int>> witness;  // the m argument tuples
};

// Exhaustive check of sum_g w(g) f(g(a^1..a^m)) <= (1/m) sum_i f(a^i) over
// all m-tuples of tuples in dom(f). When every operation in the support is
// fully symmetric only sorted m-tuples are visited. OpenMP-parallel; the
// witness is the first violation in enumeration order.
Improvement improves(const FractionalOperation& omega, const FiniteTable& f, std::size_t n);

struct StructureImprovement {
  bool improved = true;
  std::string symbol;
  std::vector<std::vector<int>> witness;
};

StructureImprovement check_structure_improved(const FiniteValuedStructure& delta,
                                              const FractionalOperation& omega);

struct MultisetStructure {
  int m = 0;
  std::vector<std::vector<int>> multisets;  // sorted, in domain order
  FiniteValuedStructure structure;
};

MultisetStructure multiset_structure(const FiniteValuedStructure& delta, int m,
                                     std::size_t max_entries = 5000000);

struct FractionalHomomorphism {
  bool feasible = false;
  // Maps (as tables from source to target index) with positive weight.
  std::vector<std::pair<std::vector<int>, Rational>> weights;
};

// LP over distributions on maps source.domain -> target.domain. Symbols are
// matched by name; every source symbol must exist in target.
FractionalHomomorphism check_fractional_homomorphism(const FiniteValuedStructure& source,
                                                     const FiniteValuedStructure& target,
                                                     std::size_t max_maps = 200000);

// Pair (a, b) with f(a) + f(b) < f(min(a, b)) + f(max(a, b)), first in
// lexicographic order of (index of a, index of b), a < b.
std::optional<std::pair<std::vector<int>, std::vector<int>>> submodularity_witness(
    const FiniteTable& f, std::size_t n);

// Tuple t and coordinate i with f(t) > f(t + e_i).
std::optional<std::pair<std::vector<int>, int>> monotonicity_witness(const FiniteTable& f,
                                                                     std::size_t n);
inline bool is_componentwise_increasing(const FiniteTable& f, std::size_t n) {
  return !monotonicity_witness(f, n).has_value();
}

struct ConvexityCertificate {
  bool certified = false;
  std::string reason;
};

// Sufficient structural test: a single piece, or pieces whose guards cover
// Q^n and on whose guard each piece's value dominates every other value, so
// f is the pointwise maximum of linear functions.
ConvexityCertificate certify_convex(const PLHCostFunction& f);

}  // namespace plhvcsp

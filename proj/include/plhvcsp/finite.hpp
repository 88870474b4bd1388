#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "plhvcsp/rational.hpp"

namespace plhvcsp {

// Explicit cost table over {0..n-1}^arity. Tuples are laid out
// lexicographically with the first argument most significant.
struct FiniteTable {
  int arity = 0;
  std::vector<ExtRational> values;

  friend bool operator==(const FiniteTable&, const FiniteTable&) = default;
};

// Finite-domain valued structure. Domain elements are the indices 0..n-1;
// `labels`, when present, gives the rational each index stands for (sorted
// ascending, so index order is the numeric order).
struct FiniteValuedStructure {
  std::size_t domain_size = 0;
  std::vector<Rational> labels;
  std::map<std::string, FiniteTable> tables;

  const ExtRational& value(const std::string& symbol, std::span<const int> tuple) const;
};

std::size_t power(std::size_t base, int exponent);
std::size_t tuple_index(std::span<const int> tuple, std::size_t n);
void decode_tuple(std::size_t index, std::size_t n, std::span<int> out);

// Tabulates fn over all tuples of {0..n-1}^arity.
template <class Fn>
FiniteTable tabulate(std::size_t n, int arity, Fn&& fn) {
  FiniteTable t;
  t.arity = arity;
  const std::size_t total = power(n, arity);
  t.values.reserve(total);
  std::vector<int> tuple(static_cast<std::size_t>(arity));
  for (std::size_t i = 0; i < total; ++i) {
    decode_tuple(i, n, tuple);
    t.values.push_back(fn(std::span<const int>(tuple)));
  }
  return t;
}

}  // namespace plhvcsp

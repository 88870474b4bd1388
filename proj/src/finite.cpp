#include "plhvcsp/finite.hpp"

#include "plhvcsp/errors.hpp"

namespace plhvcsp {

const ExtRational& FiniteValuedStructure::value(const std::string& symbol,
                                                std::span<const int> tuple) const {
  auto it = tables.find(symbol);
  if (it == tables.end()) throw Error("unknown cost function '" + symbol + "'");
  return it->second.values[tuple_index(tuple, domain_size)];
}

std::size_t power(std::size_t base, int exponent) {
  std::size_t r = 1;
  for (int i = 0; i < exponent; ++i) r *= base;
  return r;
}

std::size_t tuple_index(std::span<const int> tuple, std::size_t n) {
  std::size_t idx = 0;
  for (int v : tuple) idx = idx * n + static_cast<std::size_t>(v);
  return idx;
}

void decode_tuple(std::size_t index, std::size_t n, std::span<int> out) {
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<int>(index % n);
    index /= n;
  }
}

}  // namespace plhvcsp

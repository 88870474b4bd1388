#include "plhvcsp/reference.hpp"

#include "plhvcsp/errors.hpp"

namespace plhvcsp::reference {

BruteResult brute_min_serial(const FiniteValuedStructure& delta, const VcspInstance& instance) {
  const std::size_t n = delta.domain_size;
  const int vars = static_cast<int>(instance.variables.size());
  BruteResult best{ExtRational::infinity(), {}};
  std::vector<int> x(static_cast<std::size_t>(vars)), args;
  for (std::size_t code = 0; code < power(n, vars); ++code) {
    decode_tuple(code, n, x);
    ExtRational total(0);
    for (const auto& app : instance.applications) {
      args.clear();
      for (int v : app.args) args.push_back(x[static_cast<std::size_t>(v)]);
      total += delta.value(app.symbol, args);
    }
    if (best.argmin.empty() || total < best.value) {
      best.value = total;
      best.argmin = x;
    }
  }
  return best;
}

FiniteTable tabulate_cost_serial(const PLHCostFunction& f, std::span<const Rational> domain) {
  return tabulate(domain.size(), f.arity, [&](std::span<const int> t) {
    std::vector<Rational> point;
    for (int i : t) point.push_back(domain[static_cast<std::size_t>(i)]);
    return evaluate_cost(f, point);
  });
}

Improvement improves_serial(const FractionalOperation& omega, const FiniteTable& f,
                            std::size_t n) {
  omega.validate();
  const int m = omega.arity();
  const auto k = static_cast<std::size_t>(f.arity);
  std::vector<std::size_t> dom;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    if (f.values[i].is_finite()) dom.push_back(i);

  std::vector<std::vector<int>> rows(static_cast<std::size_t>(m), std::vector<int>(k));
  std::vector<int> args(static_cast<std::size_t>(m)), image(k), pick(static_cast<std::size_t>(m));
  for (std::size_t code = 0; code < power(dom.size(), m); ++code) {
    decode_tuple(code, dom.size(), pick);
    ExtRational rhs(0);
    for (int i = 0; i < m; ++i) {
      const std::size_t t = dom[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])];
      decode_tuple(t, n, rows[static_cast<std::size_t>(i)]);
      rhs += f.values[t];
    }
    ExtRational lhs(0);
    for (const auto& [g, w] : omega.support) {
      for (std::size_t c = 0; c < k; ++c) {
        for (int i = 0; i < m; ++i) args[static_cast<std::size_t>(i)] = rows[static_cast<std::size_t>(i)][c];
        image[c] = g.apply(args);
      }
      lhs += f.values[tuple_index(image, n)].scaled(w * m);
    }
    if (lhs > rhs) return Improvement{false, rows};
  }
  return {};
}

}  // namespace plhvcsp::reference

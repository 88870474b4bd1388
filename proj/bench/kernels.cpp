// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "support/generators.hpp"
#include "plhvcsp/fpol.hpp"
#include "plhvcsp/oracle.hpp"
#include "plhvcsp/reference.hpp"
#include "plhvcsp/sampling.hpp"

using namespace plhvcsp;

namespace {

struct BruteCase {
  FiniteValuedStructure delta;
  VcspInstance instance;
};

// Domain n, 6 variables, a mix of unary and binary tables.
BruteCase brute_case(std::size_t n) {
  gen::Gen g(17);
  BruteCase c;
  c.delta.domain_size = n;
  c.delta.tables["u"] = g.table(1, n, -5, 5, 5);
  c.delta.tables["b"] = g.table(2, n, -5, 5, 10);
  c.instance = g.finite_instance(c.delta, 6, 10);
  return c;
}

// Binary submodular cost sampled at depth 2.
struct TableCase {
  PLHCostFunction f;
  std::vector<Rational> domain;
};

TableCase table_case() {
  gen::Gen g(23);
  ValuedStructure gamma;
  gamma["b"] = g.binary_submodular();
  gamma["c"] = g.binary_submodular();
  SampleOptions so;
  so.d = 2;
  const auto s = build_sample(gamma, so);
  return TableCase{gamma.at("c"), s.domain.rational_elements};
}

void BM_brute_min_parallel(benchmark::State& state) {
  const auto c = brute_case(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(brute_min(c.delta, c.instance));
}

void BM_brute_min_serial(benchmark::State& state) {
  const auto c = brute_case(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::brute_min_serial(c.delta, c.instance));
}

void BM_tabulate_parallel(benchmark::State& state) {
  const auto c = table_case();
  state.counters["domain"] = static_cast<double>(c.domain.size());
  for (auto _ : state) benchmark::DoNotOptimize(tabulate_cost(c.f, c.domain));
}

void BM_tabulate_serial(benchmark::State& state) {
  const auto c = table_case();
  state.counters["domain"] = static_cast<double>(c.domain.size());
  for (auto _ : state) benchmark::DoNotOptimize(reference::tabulate_cost_serial(c.f, c.domain));
}

FiniteTable submodular_table(std::size_t n) {
  return tabulate(n, 2, [](std::span<const int> t) {
    return ExtRational(Rational(std::max(t[0], t[1]) + (t[0] - t[1]) * (t[0] - t[1])));
  });
}

void BM_improves_parallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto f = submodular_table(n);
  const auto omega = omega_sub(3, n);
  for (auto _ : state) benchmark::DoNotOptimize(improves(omega, f, n));
}

void BM_improves_serial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto f = submodular_table(n);
  const auto omega = omega_sub(3, n);
  for (auto _ : state) benchmark::DoNotOptimize(reference::improves_serial(omega, f, n));
}

}  // namespace

BENCHMARK(BM_brute_min_parallel)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_brute_min_serial)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_tabulate_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_tabulate_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_improves_parallel)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_improves_serial)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

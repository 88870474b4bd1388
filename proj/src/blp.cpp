#include "plhvcsp/blp.hpp"

#include "plhvcsp/errors.hpp"

namespace plhvcsp {

BLPModel build_blp(const VcspInstance& instance, const FiniteValuedStructure& delta) {
  BLPModel model;
  const std::size_t n = delta.domain_size;
  const std::size_t vars = instance.variables.size();
  model.mu.resize(vars);
  for (std::size_t x = 0; x < vars; ++x) {
    std::vector<LinearTerm> total;
    for (std::size_t a = 0; a < n; ++a) {
      const int v = model.lp.add_variable("mu_" + std::to_string(x) + "_" + std::to_string(a));
      model.mu[x].push_back(v);
      total.push_back(LinearTerm{v, 1});
    }
    model.lp.add_constraint(std::move(total), Sense::Equal, 1);
  }

  std::vector<int> tuple;
  for (std::size_t j = 0; j < instance.applications.size(); ++j) {
    const Application& app = instance.applications[j];
    auto it = delta.tables.find(app.symbol);
    if (it == delta.tables.end()) throw Error("unknown cost function '" + app.symbol + "'");
    const FiniteTable& table = it->second;
    const std::size_t arity = static_cast<std::size_t>(table.arity);
    if (arity != app.args.size()) throw Error("arity mismatch for '" + app.symbol + "'");
    tuple.assign(arity, 0);
    // marginal[l][a] collects lambda terms with t_l = a.
    std::vector<std::vector<std::vector<LinearTerm>>> marginal(
        arity, std::vector<std::vector<LinearTerm>>(n));
    std::vector<std::pair<std::size_t, int>> lambdas;
    for (std::size_t t = 0; t < table.values.size(); ++t) {
      const ExtRational& cost = table.values[t];
      if (cost.is_infinite()) continue;
      decode_tuple(t, n, tuple);
      const int v = model.lp.add_variable(
          "lambda_" + std::to_string(j) + "_" + std::to_string(t), Rational(0), std::nullopt,
          cost.value());
      lambdas.emplace_back(t, v);
      for (std::size_t l = 0; l < arity; ++l)
        marginal[l][static_cast<std::size_t>(tuple[l])].push_back(LinearTerm{v, 1});
    }
    for (std::size_t l = 0; l < arity; ++l)
      for (std::size_t a = 0; a < n; ++a) {
        auto terms = std::move(marginal[l][a]);
        terms.push_back(
            LinearTerm{model.mu[static_cast<std::size_t>(app.args[l])][a], Rational(-1)});
        model.lp.add_constraint(std::move(terms), Sense::Equal, 0);
      }
    model.lambda.push_back(std::move(lambdas));
  }
  return model;
}

BLPSolution solve_blp(const BLPModel& model, const LPOptions& options) {
  const LPResult r = solve_lp(model.lp, options);
  if (r.status == LPStatus::Infeasible) return BLPSolution{ExtRational::infinity(), {}};
  if (r.status == LPStatus::Unbounded) throw Error("BLP relaxation reported unbounded");
  return BLPSolution{ExtRational(r.value), r.point};
}

ExtRational blp_value(const VcspInstance& instance, const FiniteValuedStructure& delta) {
  return solve_blp(build_blp(instance, delta)).value;
}

SampleOptions sample_options_for(const ValuedStructure& gamma, const VcspInstance& instance,
                                 const SolveOptions& options) {
  SampleOptions s;
  s.d = options.d.value_or(std::max<int>(1, static_cast<int>(instance.variables.size())));
  s.max_domain = options.max_domain;
  s.max_tuples = options.max_tuples;
  if (instance.threshold) s.objective = objective_hint(gamma, instance, *instance.threshold);
  return s;
}

Decision solve_decide(const ValuedStructure& gamma, const VcspInstance& instance,
                      const SolveOptions& options) {
  if (!instance.threshold) throw Error("solve needs an instance threshold");
  validate(gamma, instance);
  Decision out;
  out.sample = build_sample(gamma, sample_options_for(gamma, instance, options));
  out.blp = blp_value(instance, out.sample.structure);
  out.accept = out.blp <= ExtRational(*instance.threshold);
  return out;
}

ExtRational finite_objective(const FiniteValuedStructure& delta, const VcspInstance& instance,
                             std::span<const int> assignment) {
  ExtRational total(0);
  std::vector<int> tuple;
  for (const auto& app : instance.applications) {
    tuple.clear();
    for (int a : app.args) tuple.push_back(assignment[static_cast<std::size_t>(a)]);
    total += delta.value(app.symbol, tuple);
    if (total.is_infinite()) break;
  }
  return total;
}

std::vector<int> extract_assignment(const VcspInstance& instance,
                                    const FiniteValuedStructure& delta, const Rational& u) {
  const std::size_t n = delta.domain_size;
  FiniteValuedStructure pinned = delta;
  VcspInstance work = instance;
  const ExtRational bound(u);
  std::vector<int> out;
  for (std::size_t x = 0; x < instance.variables.size(); ++x) {
    const std::string pin = "__pin_" + std::to_string(x);
    work.applications.push_back(Application{pin, {static_cast<int>(x)}});
    bool found = false;
    for (std::size_t a = 0; a < n && !found; ++a) {
      FiniteTable t;
      t.arity = 1;
      t.values.assign(n, ExtRational::infinity());
      t.values[a] = 0;
      pinned.tables[pin] = std::move(t);
      if (blp_value(work, pinned) <= bound) {
        out.push_back(static_cast<int>(a));
        found = true;
      }
    }
    if (!found)
      throw NoExtension("no value for variable '" + instance.variables[x] +
                        "' keeps the relaxation within the bound");
  }
  if (finite_objective(delta, instance, out) > bound)
    throw NoExtension("self-reduction produced an assignment above the bound");
  return out;
}

}  // namespace plhvcsp

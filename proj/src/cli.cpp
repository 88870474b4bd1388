#include "plhvcsp/cli.hpp"

#include <CLI11.hpp>
#include <ostream>

#include "plhvcsp/blp.hpp"
#include "plhvcsp/document.hpp"
#include "plhvcsp/errors.hpp"
#include "plhvcsp/fpol.hpp"
#include "plhvcsp/oracle.hpp"
#include "plhvcsp/sampling.hpp"

namespace plhvcsp {

namespace {

using nlohmann::json;

struct Flags {
  std::string file;
  std::string threshold;
  int d = 0;
  std::size_t max_domain = 5000;
  std::size_t max_tuples = 20000000;
  bool dump_lp = false;
  bool witness = false;
  bool solution = false;
  std::string op = "sub";
  int k = 2;
  int m = 2;
};

// A loaded input: either a PLH document or an explicit finite structure.
struct Input {
  std::optional<Document> plh;
  std::optional<FiniteDocument> finite;

  const std::optional<VcspInstance>& instance() const {
    return plh ? plh->instance : finite->instance;
  }
  std::optional<VcspInstance>& instance() { return plh ? plh->instance : finite->instance; }
};

Input load(const Flags& flags) {
  const std::string text = read_text_file(flags.file);
  Input in;
  if (is_finite_document(text)) {
    in.finite = parse_finite_document(text);
    if (in.finite->instance)
      for (const auto& app : in.finite->instance->applications)
        if (!in.finite->structure.tables.contains(app.symbol))
          throw ParseError("$.instance: unknown cost function '" + app.symbol + "'");
  } else {
    in.plh = parse_document(text);
    if (in.plh->instance)
      validate(in.plh->structure, *in.plh->instance);
    else
      validate(in.plh->structure);
  }
  if (!flags.threshold.empty()) {
    if (!in.instance()) throw Error("--threshold given but the file has no instance");
    in.instance()->threshold = parse_rational(flags.threshold);
  }
  return in;
}

const VcspInstance& need_instance(const Input& in) {
  if (!in.instance()) throw Error("the file has no instance");
  return *in.instance();
}

const Rational& need_threshold(const VcspInstance& inst) {
  if (!inst.threshold) throw Error("no threshold: add one to the instance or pass --threshold");
  return *inst.threshold;
}

SolveOptions solve_options(const Flags& flags) {
  SolveOptions o;
  if (flags.d > 0) o.d = flags.d;
  o.max_domain = flags.max_domain;
  o.max_tuples = flags.max_tuples;
  return o;
}

// Sample of a PLH document; d defaults to the variable count, or the
// largest arity without an instance.
Sample sample_of(const Input& in, const Flags& flags) {
  const ValuedStructure& gamma = in.plh->structure;
  if (in.plh->instance) return build_sample(gamma, sample_options_for(gamma, *in.plh->instance,
                                                                      solve_options(flags)));
  SampleOptions s;
  s.d = 1;
  for (const auto& [name, f] : gamma) s.d = std::max(s.d, f.arity);
  if (flags.d > 0) s.d = flags.d;
  s.max_domain = flags.max_domain;
  s.max_tuples = flags.max_tuples;
  return build_sample(gamma, s);
}

// The finite structure the command works on, with labels when known.
FiniteValuedStructure finite_of(const Input& in, const Flags& flags, std::ostream& out,
                                bool report) {
  if (in.finite) return in.finite->structure;
  Sample s = sample_of(in, flags);
  if (report)
    out << "sample: " << s.domain.rational_elements.size() << " elements, eps "
        << to_string(s.domain.eps) << "\n";
  return std::move(s.structure);
}

std::string label(const FiniteValuedStructure& delta, int a) {
  if (delta.labels.size() == delta.domain_size) return to_string(delta.labels[static_cast<std::size_t>(a)]);
  return std::to_string(a);
}

json tuple_json(const FiniteValuedStructure& delta, std::span<const int> t) {
  json arr = json::array();
  for (int a : t) arr.push_back(label(delta, a));
  return arr;
}

void print_assignment(std::ostream& out, const VcspInstance& inst,
                      const std::vector<std::string>& values) {
  out << "assignment:";
  for (std::size_t i = 0; i < inst.variables.size(); ++i)
    out << " " << inst.variables[i] << "=" << values[i];
  out << "\n";
}

void print_blp_solution(std::ostream& out, const BLPModel& model, const BLPSolution& sol,
                        const VcspInstance& inst, const FiniteValuedStructure& delta) {
  if (sol.point.empty()) return;
  for (std::size_t x = 0; x < model.mu.size(); ++x)
    for (std::size_t a = 0; a < model.mu[x].size(); ++a) {
      const Rational& v = sol.point[static_cast<std::size_t>(model.mu[x][a])];
      if (sgn(v) != 0)
        out << "mu " << inst.variables[x] << " " << label(delta, static_cast<int>(a)) << " "
            << to_string(v) << "\n";
    }
  std::vector<int> tuple;
  for (std::size_t j = 0; j < model.lambda.size(); ++j) {
    const auto& app = inst.applications[j];
    tuple.assign(app.args.size(), 0);
    for (const auto& [t, var] : model.lambda[j]) {
      const Rational& v = sol.point[static_cast<std::size_t>(var)];
      if (sgn(v) == 0) continue;
      decode_tuple(t, delta.domain_size, tuple);
      out << "lambda " << j << " " << app.symbol << " " << tuple_json(delta, tuple).dump() << " "
          << to_string(v) << "\n";
    }
  }
}

int cmd_blp(const Flags& flags, std::ostream& out) {
  const Input in = load(flags);
  const VcspInstance& inst = need_instance(in);
  const FiniteValuedStructure delta = finite_of(in, flags, out, true);
  const BLPModel model = build_blp(inst, delta);
  if (flags.dump_lp) out << dump_lp(model.lp);
  const BLPSolution sol = solve_blp(model);
  out << "blp: " << to_string(sol.value) << "\n";
  if (flags.solution) print_blp_solution(out, model, sol, inst, delta);
  if (!inst.threshold) return kExitAccept;
  return sol.value <= ExtRational(*inst.threshold) ? kExitAccept : kExitReject;
}

int decide(const Input& in, const Flags& flags, std::ostream& out, std::ostream& err) {
  const VcspInstance& inst = need_instance(in);
  const Rational& u = need_threshold(inst);
  const FiniteValuedStructure delta = finite_of(in, flags, out, false);
  const BLPModel model = build_blp(inst, delta);
  if (flags.dump_lp) out << dump_lp(model.lp);
  const ExtRational value = solve_blp(model).value;
  const bool accept = value <= ExtRational(u);
  out << (accept ? "accept" : "reject") << "\n";
  out << "blp: " << to_string(value) << "\n";
  out << "domain: " << delta.domain_size << " elements\n";
  if (accept && flags.witness) {
    try {
      const std::vector<int> a = extract_assignment(inst, delta, u);
      std::vector<std::string> values;
      for (int v : a) values.push_back(label(delta, v));
      print_assignment(out, inst, values);
      out << "cost: " << to_string(finite_objective(delta, inst, a)) << "\n";
    } catch (const NoExtension& e) {
      err << "warning: " << e.what() << "\n";
      out << "assignment: none (relaxation not tight here)\n";
    }
  }
  return accept ? kExitAccept : kExitReject;
}

int cmd_solve(const Flags& flags, std::ostream& out, std::ostream& err) {
  return decide(load(flags), flags, out, err);
}

int cmd_feas(const Flags& flags, std::ostream& out, std::ostream& err) {
  Input in = load(flags);
  if (!in.instance()) throw Error("the file has no instance");
  if (in.plh) {
    in.plh->structure = feasibility_encoding(in.plh->structure);
  } else {
    for (auto& [name, t] : in.finite->structure.tables)
      for (auto& v : t.values)
        if (v.is_finite()) v = 0;
  }
  in.instance()->threshold = Rational(0);
  return decide(in, flags, out, err);
}

int cmd_sample(const Flags& flags, std::ostream& out) {
  const Input in = load(flags);
  if (!in.plh) throw Error("sample needs a PLH document");
  const Sample s = sample_of(in, flags);
  FiniteDocument doc{s.structure, in.plh->instance, s.domain.eps};
  out << write_finite_document(doc) << "\n";
  return kExitAccept;
}

int cmd_oracle(const Flags& flags, std::ostream& out) {
  const Input in = load(flags);
  if (!in.plh) throw Error("oracle needs a PLH document");
  const VcspInstance& inst = need_instance(in);
  const QDecision r = q_decide(in.plh->structure, inst, need_threshold(inst));
  out << (r.accept ? "accept" : "reject") << "\n";
  if (r.accept) {
    std::vector<std::string> values;
    for (const auto& v : r.witness) values.push_back(to_string(v));
    print_assignment(out, inst, values);
    out << "cost: " << to_string(evaluate_objective(in.plh->structure, inst, r.witness)) << "\n";
  }
  return r.accept ? kExitAccept : kExitReject;
}

void print_witness(std::ostream& out, const FiniteValuedStructure& delta,
                   const std::string& symbol, const std::vector<std::vector<int>>& tuples) {
  json w{{"f", symbol}, {"tuples", json::array()}};
  for (const auto& t : tuples) w["tuples"].push_back(tuple_json(delta, t));
  out << "witness: " << w.dump() << "\n";
}

FractionalOperation operation_from(const Flags& flags, const FiniteValuedStructure& delta) {
  const std::size_t n = delta.domain_size;
  if (flags.op == "sub") return omega_sub(flags.k, n);
  std::vector<std::string> names;
  std::size_t start = 0;
  while (start <= flags.op.size()) {
    const std::size_t comma = flags.op.find(',', start);
    names.push_back(flags.op.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  FractionalOperation w;
  for (const auto& name : names)
    w.support.emplace_back(builtin_operation(parse_op(name), flags.k, n, delta.labels),
                           make_rational(1, static_cast<long>(names.size())));
  return w;
}

int cmd_check(const std::string& what, const Flags& flags, std::ostream& out) {
  const Input in = load(flags);
  const FiniteValuedStructure delta = finite_of(in, flags, out, true);
  const std::size_t n = delta.domain_size;
  if (what == "submodular" || what == "increasing") {
    for (const auto& [name, t] : delta.tables) {
      std::vector<std::vector<int>> tuples;
      if (what == "submodular") {
        if (auto w = submodularity_witness(t, n)) tuples = {w->first, w->second};
      } else if (auto w = monotonicity_witness(t, n)) {
        std::vector<int> up = w->first;
        ++up[static_cast<std::size_t>(w->second)];
        tuples = {w->first, up};
      }
      if (!tuples.empty()) {
        out << "false\n";
        print_witness(out, delta, name, tuples);
        return kExitReject;
      }
    }
    out << "true\n";
    return kExitAccept;
  }
  if (what == "improves") {
    const FractionalOperation omega = operation_from(flags, delta);
    const StructureImprovement r = check_structure_improved(delta, omega);
    out << (r.improved ? "true" : "false") << "\n";
    if (!r.improved) print_witness(out, delta, r.symbol, r.witness);
    return r.improved ? kExitAccept : kExitReject;
  }
  // frac-hom
  const MultisetStructure ms = multiset_structure(delta, flags.m);
  const FractionalHomomorphism h = check_fractional_homomorphism(ms.structure, delta);
  out << (h.feasible ? "true" : "false") << "\n";
  for (const auto& [map, w] : h.weights) {
    json images = json::array();
    for (int a : map) images.push_back(label(delta, a));
    out << "map " << to_string(w) << " " << images.dump() << "\n";
  }
  return h.feasible ? kExitAccept : kExitReject;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact VCSP solver for piecewise linear homogeneous cost functions", "plhvcsp"};
  app.require_subcommand(1);
  Flags flags;

  auto common = [&](CLI::App* sub) {
    sub->add_option("file", flags.file, "input document (JSON)")->required();
    sub->add_option("--d", flags.d, "sampler depth (default: number of variables)");
    sub->add_option("--max-domain", flags.max_domain, "cap on the sample size");
    sub->add_option("--max-tuples", flags.max_tuples, "cap on cost table entries");
  };
  auto decision = [&](CLI::App* sub) {
    sub->add_option("--threshold", flags.threshold, "override the instance threshold");
    sub->add_flag("--dump-lp", flags.dump_lp, "print the BLP before solving");
  };

  CLI::App* solve = app.add_subcommand("solve", "sample, then decide by the BLP relaxation");
  common(solve);
  decision(solve);
  solve->add_flag("--witness", flags.witness, "extract an assignment by self-reduction");
  CLI::App* feas = app.add_subcommand("feas", "feasibility of the instance (costs ignored)");
  common(feas);
  feas->add_flag("--dump-lp", flags.dump_lp, "print the BLP before solving");
  feas->add_flag("--witness", flags.witness, "extract a satisfying assignment");
  CLI::App* sample = app.add_subcommand("sample", "print the finite sample as a document");
  common(sample);
  CLI::App* blp = app.add_subcommand("blp", "value of the BLP relaxation");
  common(blp);
  decision(blp);
  blp->add_flag("--solution", flags.solution, "print the nonzero mu and lambda values");
  CLI::App* oracle = app.add_subcommand("oracle", "exact decision over the rationals");
  common(oracle);
  oracle->add_option("--threshold", flags.threshold, "override the instance threshold");

  CLI::App* check = app.add_subcommand("check", "properties of the (sampled) cost tables");
  check->require_subcommand(1);
  CLI::App* submodular = check->add_subcommand("submodular", "f(a)+f(b) >= f(min)+f(max)");
  common(submodular);
  CLI::App* increasing = check->add_subcommand("increasing", "componentwise increasing");
  common(increasing);
  CLI::App* improves_cmd = check->add_subcommand("improves", "improved by a fractional operation");
  common(improves_cmd);
  improves_cmd->add_option("--op", flags.op,
                           "'sub' (uniform on order statistics) or a comma list of min, max, "
                           "median, avg, s<i> with uniform weights");
  improves_cmd->add_option("--k", flags.k, "operation arity")->check(CLI::Range(1, 8));
  CLI::App* frac_hom = check->add_subcommand("frac-hom", "multiset structure maps back fractionally");
  common(frac_hom);
  frac_hom->add_option("--m", flags.m, "multiset size")->check(CLI::Range(1, 6));

  std::vector<std::string> argv_store{"plhvcsp"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitAccept : kExitError;
  }

  try {
    if (solve->parsed()) return cmd_solve(flags, out, err);
    if (feas->parsed()) return cmd_feas(flags, out, err);
    if (sample->parsed()) return cmd_sample(flags, out);
    if (blp->parsed()) return cmd_blp(flags, out);
    if (oracle->parsed()) return cmd_oracle(flags, out);
    for (CLI::App* sub : {submodular, increasing, improves_cmd, frac_hom})
      if (sub->parsed()) return cmd_check(sub->get_name(), flags, out);
  } catch (const ParseError& e) {
    err << flags.file << ": parse error: " << e.what() << "\n";
    return kExitError;
  } catch (const SizeGuardError& e) {
    err << "size guard: " << e.what() << "\n";
    return kExitError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace plhvcsp

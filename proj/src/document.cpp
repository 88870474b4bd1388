#include "plhvcsp/document.hpp"

#include <fstream>
#include <sstream>

#include "plhvcsp/errors.hpp"

namespace plhvcsp {

using nlohmann::json;

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("malformed JSON", line, column);
  }
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

const json& member(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing \"") + key + "\"");
  return *it;
}

Rational rational_at(const json& v, const std::string& path) {
  if (v.is_number_integer()) return Rational(Integer(v.dump()));
  if (!v.is_string()) fail(path, "expected a rational string \"p/q\"");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const ParseError& e) {
    fail(path, e.what());
  }
}

ExtRational ext_rational_at(const json& v, const std::string& path) {
  if (v.is_string() && (v == "+inf" || v == "inf")) return ExtRational::infinity();
  return ExtRational(rational_at(v, path));
}

int int_at(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

Term term_at(const json& v, const std::string& path) {
  Term t{rational_at(member(v, "coeff", path), path + ".coeff"), std::nullopt};
  if (auto it = v.find("var"); it != v.end()) t.var = int_at(*it, path + ".var");
  return t;
}

RawRel rel_at(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a relation");
  const std::string r = v.get<std::string>();
  if (r == "<") return RawRel::Less;
  if (r == "<=") return RawRel::LessEq;
  if (r == "=") return RawRel::Equal;
  if (r == ">=") return RawRel::GreaterEq;
  if (r == ">") return RawRel::Greater;
  fail(path, "unknown relation '" + r + "'");
}

QFFormula guard_at(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected a list of atoms");
  QFFormula g = QFFormula::top();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    g = conjunction(g, normalize_atom(term_at(member(v[i], "lhs", p), p + ".lhs"),
                                      rel_at(member(v[i], "rel", p), p + ".rel"),
                                      term_at(member(v[i], "rhs", p), p + ".rhs")));
  }
  return g;
}

ValuedStructure structure_at(const json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object of cost functions");
  ValuedStructure gamma;
  for (const auto& [name, f] : v.items()) {
    const std::string p = path + "." + name;
    PLHCostFunction fn;
    fn.arity = int_at(member(f, "arity", p), p + ".arity");
    const json& pieces = member(f, "pieces", p);
    if (!pieces.is_array()) fail(p + ".pieces", "expected a list");
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const std::string pp = p + ".pieces[" + std::to_string(i) + "]";
      const auto git = pieces[i].find("guard");
      QFFormula guard = git == pieces[i].end() ? QFFormula::top() : guard_at(*git, pp + ".guard");
      fn.add_piece(guard, term_at(member(pieces[i], "value", pp), pp + ".value"));
    }
    gamma.emplace(name, std::move(fn));
  }
  try {
    validate(gamma);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail(path, e.what());
  }
  return gamma;
}

VcspInstance instance_at(const json& v, const std::string& path) {
  VcspInstance inst;
  const json& vars = member(v, "variables", path);
  if (!vars.is_array()) fail(path + ".variables", "expected a list");
  for (const auto& x : vars) {
    if (!x.is_string()) fail(path + ".variables", "variable names must be strings");
    inst.variables.push_back(x.get<std::string>());
  }
  const json& sum = member(v, "sum", path);
  if (!sum.is_array()) fail(path + ".sum", "expected a list");
  for (std::size_t i = 0; i < sum.size(); ++i) {
    const std::string p = path + ".sum[" + std::to_string(i) + "]";
    const json& f = member(sum[i], "f", p);
    if (!f.is_string()) fail(p + ".f", "expected a name");
    Application app{f.get<std::string>(), {}};
    const json& args = member(sum[i], "args", p);
    if (!args.is_array()) fail(p + ".args", "expected a list");
    for (const auto& a : args) {
      if (!a.is_string()) fail(p + ".args", "arguments must be variable names");
      const int idx = inst.variable_index(a.get<std::string>());
      if (idx < 0) fail(p + ".args", "undeclared variable '" + a.get<std::string>() + "'");
      app.args.push_back(idx);
    }
    inst.applications.push_back(std::move(app));
  }
  if (auto it = v.find("threshold"); it != v.end() && !it->is_null())
    inst.threshold = rational_at(*it, path + ".threshold");
  return inst;
}

}  // namespace

Document parse_document(std::string_view text) {
  const json j = parse_json(text);
  Document doc;
  doc.structure = structure_at(member(j, "structure", "$"), "$.structure");
  if (auto it = j.find("instance"); it != j.end()) {
    doc.instance = instance_at(*it, "$.instance");
    try {
      validate(doc.structure, *doc.instance);
    } catch (const Error& e) {
      fail("$.instance", e.what());
    }
  }
  return doc;
}

FiniteDocument parse_finite_document(std::string_view text) {
  const json j = parse_json(text);
  FiniteDocument doc;
  auto& s = doc.structure;
  if (auto it = j.find("domain"); it != j.end()) {
    if (!it->is_array()) fail("$.domain", "expected a list");
    for (std::size_t i = 0; i < it->size(); ++i)
      s.labels.push_back(rational_at((*it)[i], "$.domain[" + std::to_string(i) + "]"));
    for (std::size_t i = 1; i < s.labels.size(); ++i)
      if (!(s.labels[i - 1] < s.labels[i])) fail("$.domain", "must be strictly increasing");
    s.domain_size = s.labels.size();
  } else {
    const int n = int_at(member(j, "domain_size", "$"), "$.domain_size");
    if (n <= 0) fail("$.domain_size", "must be positive");
    s.domain_size = static_cast<std::size_t>(n);
  }
  const json& tables = member(j, "tables", "$");
  if (!tables.is_object()) fail("$.tables", "expected an object");
  for (const auto& [name, t] : tables.items()) {
    const std::string p = "$.tables." + name;
    FiniteTable table;
    table.arity = int_at(member(t, "arity", p), p + ".arity");
    if (table.arity <= 0) fail(p + ".arity", "must be positive");
    const json& values = member(t, "values", p);
    if (!values.is_array() || values.size() != power(s.domain_size, table.arity))
      fail(p + ".values", "expected " + std::to_string(power(s.domain_size, table.arity)) +
                              " values");
    for (std::size_t i = 0; i < values.size(); ++i)
      table.values.push_back(ext_rational_at(values[i], p + ".values[" + std::to_string(i) + "]"));
    s.tables.emplace(name, std::move(table));
  }
  if (auto it = j.find("eps"); it != j.end()) doc.eps = rational_at(*it, "$.eps");
  if (auto it = j.find("instance"); it != j.end()) {
    doc.instance = instance_at(*it, "$.instance");
    for (const auto& app : doc.instance->applications) {
      auto t = s.tables.find(app.symbol);
      if (t == s.tables.end()) fail("$.instance", "unknown cost function '" + app.symbol + "'");
      if (static_cast<int>(app.args.size()) != t->second.arity)
        fail("$.instance", "arity mismatch for '" + app.symbol + "'");
    }
  }
  return doc;
}

bool is_finite_document(std::string_view text) {
  const json j = parse_json(text);
  return j.is_object() && j.contains("tables");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json term_to_json(const Term& t) {
  json j{{"coeff", to_string(t.coeff)}};
  if (t.var) j["var"] = *t.var;
  return j;
}

json atom_to_json(const Atom& a) {
  // Trivial atoms have no JSON form of their own; 0 < 1 and 1 < 0 stand in.
  if (a.is_top()) return atom_to_json(Atom::relation(Term::constant(0), Rel::Less, Term::constant(1)));
  if (a.is_bottom())
    return atom_to_json(Atom::relation(Term::constant(1), Rel::Less, Term::constant(0)));
  const char* rel = a.rel == Rel::Less ? "<" : a.rel == Rel::Equal ? "=" : "<=";
  return json{{"lhs", term_to_json(a.lhs)}, {"rel", rel}, {"rhs", term_to_json(a.rhs)}};
}

json structure_to_json(const ValuedStructure& gamma) {
  json out = json::object();
  for (const auto& [name, f] : gamma) {
    json pieces = json::array();
    for (const auto& p : f.pieces) {
      json guard = json::array();
      for (const auto& a : p.guard) guard.push_back(atom_to_json(a));
      pieces.push_back(json{{"guard", guard}, {"value", term_to_json(p.value)}});
    }
    out[name] = json{{"arity", f.arity}, {"pieces", pieces}};
  }
  return out;
}

json instance_to_json(const VcspInstance& instance) {
  json sum = json::array();
  for (const auto& app : instance.applications) {
    json args = json::array();
    for (int a : app.args) args.push_back(instance.variables[static_cast<std::size_t>(a)]);
    sum.push_back(json{{"f", app.symbol}, {"args", args}});
  }
  json out{{"variables", instance.variables}, {"sum", sum}};
  if (instance.threshold) out["threshold"] = to_string(*instance.threshold);
  return out;
}

json finite_to_json(const FiniteValuedStructure& delta) {
  json out;
  if (!delta.labels.empty()) {
    json domain = json::array();
    for (const auto& q : delta.labels) domain.push_back(to_string(q));
    out["domain"] = domain;
  } else {
    out["domain_size"] = delta.domain_size;
  }
  json tables = json::object();
  for (const auto& [name, t] : delta.tables) {
    json values = json::array();
    for (const auto& v : t.values) values.push_back(to_string(v));
    tables[name] = json{{"arity", t.arity}, {"values", values}};
  }
  out["tables"] = tables;
  return out;
}

std::string write_document(const Document& doc) {
  json out{{"structure", structure_to_json(doc.structure)}};
  if (doc.instance) out["instance"] = instance_to_json(*doc.instance);
  return out.dump(2) + "\n";
}

std::string write_finite_document(const FiniteDocument& doc) {
  json out = finite_to_json(doc.structure);
  if (doc.eps) out["eps"] = to_string(*doc.eps);
  if (doc.instance) out["instance"] = instance_to_json(*doc.instance);
  return out.dump(2) + "\n";
}

}  // namespace plhvcsp

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "plhvcsp/finite.hpp"
#include "plhvcsp/plh.hpp"

namespace plhvcsp {

// {"structure": {...}, "instance": {"variables": [...], "sum": [...], "threshold": "p/q"}}
struct Document {
  ValuedStructure structure;
  std::optional<VcspInstance> instance;
};

// {"domain": ["p/q", ...] or "domain_size": n, "tables": {"f": {"arity": k,
// "values": ["p/q" | "+inf", ...]}}, "instance": {...}}
struct FiniteDocument {
  FiniteValuedStructure structure;
  std::optional<VcspInstance> instance;
  std::optional<Rational> eps;
};

// Both throw ParseError; syntax errors carry line and column.
Document parse_document(std::string_view text);
FiniteDocument parse_finite_document(std::string_view text);
// True if the text is a JSON object with a "tables" member.
bool is_finite_document(std::string_view text);

std::string read_text_file(const std::string& path);

nlohmann::json term_to_json(const Term& t);
nlohmann::json atom_to_json(const Atom& a);
nlohmann::json structure_to_json(const ValuedStructure& gamma);
nlohmann::json instance_to_json(const VcspInstance& instance);
nlohmann::json finite_to_json(const FiniteValuedStructure& delta);

std::string write_document(const Document& doc);
std::string write_finite_document(const FiniteDocument& doc);

}  // namespace plhvcsp

#include <json.hpp>

#include "energykg/query.hpp"

namespace energykg {

std::string results_json(const ResultSet& rs) {
  using nlohmann::json;
  json head;
  head["vars"] = rs.vars;
  json bindings = json::array();
  for (const auto& row : rs.rows) {
    json b = json::object();
    for (std::size_t i = 0; i < rs.vars.size(); ++i) {
      const Term& term = row.values[i];
      json cell = json::object();
      if (const auto* iri = std::get_if<Iri>(&term)) {
        cell["type"] = "uri";
        cell["value"] = iri->str();
      } else if (const auto* lit = std::get_if<TypedLiteral>(&term)) {
        cell["type"] = "literal";
        cell["value"] = lit->lexical;
        cell["datatype"] = lit->datatype.str();
      } else {
        cell["type"] = "literal";
        cell["value"] = std::get<PlainLiteral>(term).lexical;
      }
      b[rs.vars[i]] = std::move(cell);
    }
    bindings.push_back(std::move(b));
  }
  json doc;
  doc["head"] = std::move(head);
  doc["results"]["bindings"] = std::move(bindings);
  return doc.dump() + "\n";
}

std::string results_tsv(const ResultSet& rs) {
  std::string out;
  for (std::size_t i = 0; i < rs.vars.size(); ++i) {
    if (i) out.push_back('\t');
    out.push_back('?');
    out += rs.vars[i];
  }
  out.push_back('\n');
  for (const auto& row : rs.rows) {
    for (std::size_t i = 0; i < row.values.size(); ++i) {
      if (i) out.push_back('\t');
      out += term_token(row.values[i]);
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace energykg

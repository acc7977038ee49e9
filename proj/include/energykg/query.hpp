#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "energykg/rdf.hpp"
#include "energykg/vocab.hpp"

namespace energykg {

struct Var {
  std::string name;
  bool operator==(const Var&) const = default;
};

// One position of a triple pattern: a variable or a ground term. Subject and
// predicate slots are restricted to variables and IRIs at parse time.
using PatternSlot = std::variant<Var, Term>;

struct TriplePattern {
  PatternSlot subject;
  PatternSlot predicate;
  PatternSlot object;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

// `FILTER(?var op constant)`. xsd:double compares numerically,
// xsd:dateTime chronologically, plain literals lexically; IRI constants
// support only equality tests.
struct FilterExpr {
  std::string var;
  CmpOp op;
  Term constant;
};

struct OrderSpec {
  std::string var;
  bool descending = false;
};

struct Query {
  bool star = false;
  std::vector<std::string> select_vars;  // resolved at parse time even for '*'
  std::vector<TriplePattern> patterns;
  std::vector<FilterExpr> filters;
  std::optional<OrderSpec> order_by;
  std::optional<std::size_t> limit;
};

// SPARQL subset: PREFIX, SELECT, WHERE { patterns, FILTER }, ORDER BY,
// LIMIT. Unsupported SPARQL keywords raise an Unsupported error naming the
// keyword; other malformed input raises a Query error with a position.
Query parse_query(std::string_view text, const TermRegistry& registry);

// One result row; `values` is parallel to ResultSet::vars.
struct SolutionRow {
  std::vector<Term> values;
};

struct ResultSet {
  std::vector<std::string> vars;
  std::vector<SolutionRow> rows;
};

// Natural join of the pattern matches restricted by filters, projected to
// the select list. Rows come back in a canonical deterministic order:
// ORDER BY when present, serialized-row order otherwise. The graph must be
// frozen. `evaluate` splits the outermost join level across OpenMP threads;
// `evaluate_serial` is the reference kept for testing.
ResultSet evaluate(const Graph& g, const Query& q);
ResultSet evaluate_serial(const Graph& g, const Query& q);

// SPARQL JSON results shape / tab-separated rows. Both end with a newline.
std::string results_json(const ResultSet& rs);
std::string results_tsv(const ResultSet& rs);

}  // namespace energykg

#include "energykg/rdf.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "energykg/error.hpp"

namespace energykg {

namespace wk {

const Iri& xsd_double() {
  static const Iri iri("http://www.w3.org/2001/XMLSchema#double");
  return iri;
}

const Iri& xsd_dateTime() {
  static const Iri iri("http://www.w3.org/2001/XMLSchema#dateTime");
  return iri;
}

const Iri& rdf_type() {
  static const Iri iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type");
  return iri;
}

}  // namespace wk

std::string canonical_double(double value) {
  // Shortest decimal rendering that round-trips, so re-runs emit identical
  // bytes regardless of how the value was produced.
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

Term double_literal(double value) {
  if (!std::isfinite(value)) fail(ErrorKind::Data, "non-finite xsd:double value");
  return TypedLiteral{canonical_double(value), wk::xsd_double()};
}

Term datetime_literal(Instant t) {
  return TypedLiteral{format_instant(t), wk::xsd_dateTime()};
}

std::string escape_ntriples(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (unsigned char c : raw) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (c < 0x20) {
          static const char* hex = "0123456789ABCDEF";
          out += "\\u00";
          out.push_back(hex[c >> 4]);
          out.push_back(hex[c & 0xF]);
        } else {
          out.push_back(char(c));
        }
    }
  }
  return out;
}

std::string term_token(const Term& term) {
  if (const auto* iri = std::get_if<Iri>(&term)) return "<" + iri->str() + ">";
  if (const auto* lit = std::get_if<TypedLiteral>(&term))
    return "\"" + escape_ntriples(lit->lexical) + "\"^^<" + lit->datatype.str() + ">";
  const auto& plain = std::get<PlainLiteral>(term);
  return "\"" + escape_ntriples(plain.lexical) + "\"";
}

std::string triple_line(const Triple& t) {
  return "<" + t.subject.str() + "> <" + t.predicate.str() + "> " + term_token(t.object) + " .";
}

namespace {

bool parse_finite_double(std::string_view lexical, double* out) {
  double v = 0;
  const auto res = std::from_chars(lexical.data(), lexical.data() + lexical.size(), v);
  if (res.ec != std::errc() || res.ptr != lexical.data() + lexical.size()) return false;
  if (!std::isfinite(v)) return false;
  if (out) *out = v;
  return true;
}

void validate_literal(const Term& term) {
  const auto* lit = std::get_if<TypedLiteral>(&term);
  if (!lit) return;
  if (lit->datatype == wk::xsd_double()) {
    if (!parse_finite_double(lit->lexical, nullptr))
      fail(ErrorKind::Data, "xsd:double literal is not a finite decimal: '" + lit->lexical + "'");
  } else if (lit->datatype == wk::xsd_dateTime()) {
    parse_instant(lit->lexical);  // throws on anything but the strict UTC form
  }
}

}  // namespace

Graph::TermId Graph::intern(const Term& term) {
  std::string token = term_token(term);
  const auto it = by_token_.find(token);
  if (it != by_token_.end()) return it->second;
  const TermId id = TermId(terms_.size());
  terms_.push_back(term);
  tokens_.push_back(token);
  by_token_.emplace(std::move(token), id);
  return id;
}

std::optional<Graph::TermId> Graph::lookup(const Term& term) const {
  const auto it = by_token_.find(term_token(term));
  if (it == by_token_.end()) return std::nullopt;
  return it->second;
}

Triple Graph::materialize(const Row& row) const {
  return Triple{std::get<Iri>(terms_[row[0]]), std::get<Iri>(terms_[row[1]]), terms_[row[2]]};
}

bool Graph::insert(Triple t) {
  if (frozen_) fail(ErrorKind::Data, "insert into frozen graph");
  validate_literal(t.object);
  const Row row{intern(Term(t.subject)), intern(Term(t.predicate)), intern(t.object)};
  if (!spo_.insert(row).second) return false;
  pos_.insert(row);
  osp_.insert(row);
  ++s_count_[row[0]];
  ++p_count_[row[1]];
  ++o_count_[row[2]];
  return true;
}

void Graph::insert_all(const Graph& other) {
  for (const auto& row : other.spo_) insert(other.materialize(row));
}

bool Graph::contains(const Triple& t) const {
  const auto s = lookup(Term(t.subject));
  const auto p = lookup(Term(t.predicate));
  const auto o = lookup(t.object);
  if (!s || !p || !o) return false;
  return spo_.count(Row{*s, *p, *o}) > 0;
}

std::vector<Graph::Row> Graph::rows_matching(std::optional<TermId> s, std::optional<TermId> p,
                                             std::optional<TermId> o) const {
  std::vector<Row> out;
  for_each_row(s, p, o, [&](const Row& row) { out.push_back(row); });
  return out;
}

bool Graph::token_less(const Row& a, const Row& b) const {
  // Position-wise token comparison equals lexicographic comparison of the
  // serialized lines: IRI tokens are never prefixes of one another (they
  // end with an unrepeatable '>'), and where a literal token is a prefix of
  // another the following separator byte 0x20 sorts below every printable
  // continuation character.
  for (int i = 0; i < 3; ++i) {
    const int c = tokens_[a[i]].compare(tokens_[b[i]]);
    if (c != 0) return c < 0;
  }
  return false;
}

std::vector<Triple> Graph::match(const std::optional<Iri>& s, const std::optional<Iri>& p,
                                 const std::optional<Term>& o) const {
  std::optional<TermId> si, pi, oi;
  if (s) {
    si = lookup(Term(*s));
    if (!si) return {};
  }
  if (p) {
    pi = lookup(Term(*p));
    if (!pi) return {};
  }
  if (o) {
    oi = lookup(*o);
    if (!oi) return {};
  }
  auto rows = rows_matching(si, pi, oi);
  std::sort(rows.begin(), rows.end(), [this](const Row& a, const Row& b) { return token_less(a, b); });
  std::vector<Triple> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(materialize(row));
  return out;
}

std::size_t Graph::estimate(const std::optional<Iri>& s, const std::optional<Iri>& p,
                            const std::optional<Term>& o) const {
  std::size_t best = size();
  const auto consider = [&](const std::optional<TermId>& id,
                            const std::unordered_map<TermId, std::size_t>& counts) {
    if (!id) return;
    const auto it = counts.find(*id);
    best = std::min(best, it == counts.end() ? std::size_t(0) : it->second);
  };
  if (s) {
    const auto id = lookup(Term(*s));
    if (!id) return 0;
    consider(id, s_count_);
  }
  if (p) {
    const auto id = lookup(Term(*p));
    if (!id) return 0;
    consider(id, p_count_);
  }
  if (o) {
    const auto id = lookup(*o);
    if (!id) return 0;
    consider(id, o_count_);
  }
  return best;
}

void Graph::check_index_integrity() const {
  const auto complain = [](const std::string& what) {
    fail(ErrorKind::Data, "graph index inconsistency: " + what);
  };
  if (pos_.size() != spo_.size() || osp_.size() != spo_.size())
    complain("index sizes differ from the triple set");
  for (const auto& row : spo_) {
    if (!pos_.count(row)) complain("row missing from predicate-first index");
    if (!osp_.count(row)) complain("row missing from object-first index");
    for (const TermId id : row) {
      if (id >= terms_.size()) complain("dangling term id");
    }
    if (!std::holds_alternative<Iri>(terms_[row[0]])) complain("non-IRI subject");
    if (!std::holds_alternative<Iri>(terms_[row[1]])) complain("non-IRI predicate");
  }
  for (const auto& row : pos_) {
    if (!spo_.count(row)) complain("extra row in predicate-first index");
  }
  for (const auto& row : osp_) {
    if (!spo_.count(row)) complain("extra row in object-first index");
  }
  std::unordered_map<TermId, std::size_t> s_expected, p_expected, o_expected;
  for (const auto& row : spo_) {
    ++s_expected[row[0]];
    ++p_expected[row[1]];
    ++o_expected[row[2]];
  }
  if (s_expected != s_count_ || p_expected != p_count_ || o_expected != o_count_)
    complain("occurrence counts out of date");
}

}  // namespace energykg

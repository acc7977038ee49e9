#include "energykg/ntriples.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "energykg/error.hpp"

namespace energykg {

std::string serialize_ntriples(const Graph& g) {
  std::string out;
  for (const Triple& t : g.triples_sorted()) {
    out += triple_line(t);
    out.push_back('\n');
  }
  return out;
}

namespace {

class LineParser {
public:
  LineParser(std::string_view line, std::string_view source, std::size_t lineno)
      : line_(line), source_(source), lineno_(lineno) {}

  [[noreturn]] void error(const std::string& why) const {
    fail(ErrorKind::Parse,
         std::string(source_) + ":" + std::to_string(lineno_) + ": " + why);
  }

  void skip_ws() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
  }

  bool at_end() const { return pos_ >= line_.size(); }
  char peek() const { return pos_ < line_.size() ? line_[pos_] : '\0'; }

  Iri parse_iriref() {
    if (peek() != '<') error("expected '<'");
    ++pos_;
    const auto close = line_.find('>', pos_);
    if (close == std::string_view::npos) error("unterminated IRI");
    const std::string text(line_.substr(pos_, close - pos_));
    pos_ = close + 1;
    if (!Iri::valid(text)) error("invalid IRI: '" + text + "'");
    return Iri(text);
  }

  std::string parse_quoted() {
    if (peek() != '"') error("expected '\"'");
    ++pos_;
    std::string out;
    while (true) {
      if (pos_ >= line_.size()) error("unterminated literal");
      const char c = line_[pos_];
      if (c == '"') {
        ++pos_;
        return out;
      }
      if (c == '\\') {
        ++pos_;
        if (pos_ >= line_.size()) error("dangling escape");
        const char e = line_[pos_++];
        switch (e) {
          case 't': out.push_back('\t'); break;
          case 'b': out.push_back('\b'); break;
          case 'n': out.push_back('\n'); break;
          case 'r': out.push_back('\r'); break;
          case 'f': out.push_back('\f'); break;
          case '"': out.push_back('"'); break;
          case '\'': out.push_back('\''); break;
          case '\\': out.push_back('\\'); break;
          case 'u': append_codepoint(out, parse_hex(4)); break;
          case 'U': append_codepoint(out, parse_hex(8)); break;
          default: error(std::string("unknown escape '\\") + e + "'");
        }
        continue;
      }
      out.push_back(c);
      ++pos_;
    }
  }

  Term parse_term_object() {
    const char c = peek();
    if (c == '<') return Term(parse_iriref());
    if (c == '_') error("blank nodes are not accepted");
    if (c != '"') error("expected IRI or literal object");
    std::string lexical = parse_quoted();
    if (peek() == '@') error("language tags are not accepted");
    if (pos_ + 1 < line_.size() && line_[pos_] == '^' && line_[pos_ + 1] == '^') {
      pos_ += 2;
      Iri dt = parse_iriref();
      return Term(TypedLiteral{std::move(lexical), std::move(dt)});
    }
    return Term(PlainLiteral{std::move(lexical)});
  }

  Triple parse_triple() {
    skip_ws();
    if (peek() == '_') error("blank nodes are not accepted");
    Iri s = parse_iriref();
    skip_ws();
    Iri p = parse_iriref();
    skip_ws();
    Term o = parse_term_object();
    skip_ws();
    if (peek() != '.') error("expected terminating '.'");
    ++pos_;
    skip_ws();
    if (!at_end()) error("trailing content after '.'");
    return Triple{std::move(s), std::move(p), std::move(o)};
  }

private:
  std::uint32_t parse_hex(int digits) {
    std::uint32_t value = 0;
    for (int i = 0; i < digits; ++i) {
      if (pos_ >= line_.size()) error("truncated \\u escape");
      const char c = line_[pos_++];
      value <<= 4;
      if (c >= '0' && c <= '9')
        value |= std::uint32_t(c - '0');
      else if (c >= 'a' && c <= 'f')
        value |= std::uint32_t(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F')
        value |= std::uint32_t(c - 'A' + 10);
      else
        error("bad hex digit in escape");
    }
    return value;
  }

  void append_codepoint(std::string& out, std::uint32_t cp) {
    if (cp >= 0xD800 && cp <= 0xDFFF) error("surrogate code point in escape");
    if (cp > 0x10FFFF) error("code point out of range");
    if (cp < 0x80) {
      out.push_back(char(cp));
    } else if (cp < 0x800) {
      out.push_back(char(0xC0 | (cp >> 6)));
      out.push_back(char(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(char(0xE0 | (cp >> 12)));
      out.push_back(char(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(char(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(char(0xF0 | (cp >> 18)));
      out.push_back(char(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(char(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(char(0x80 | (cp & 0x3F)));
    }
  }

  std::string_view line_;
  std::string_view source_;
  std::size_t lineno_;
  std::size_t pos_ = 0;
};

}  // namespace

Graph parse_ntriples(std::string_view text, std::string_view source) {
  Graph g;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    ++lineno;
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i == line.size() || line[i] == '#') {
      if (end == text.size()) break;
      continue;
    }
    LineParser parser(line, source, lineno);
    try {
      g.insert(parser.parse_triple());
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Parse) throw;
      parser.error(e.what());  // literal invariant violations get a line number
    }
    if (end == text.size()) break;
  }
  return g;
}

Graph parse_ntriples_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Data, "cannot open graph file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_ntriples(buf.str(), path.string());
}

namespace {

// A term in Turtle form, compacted when the registry allows it.
std::string turtle_term(const Term& term, const TermRegistry& reg,
                        std::set<std::string>& used_prefixes) {
  if (const auto* iri = std::get_if<Iri>(&term)) {
    if (*iri == wk::rdf_type()) return "a";
    if (auto curie = reg.compact(*iri)) {
      used_prefixes.insert(curie->substr(0, curie->find(':')));
      return *curie;
    }
    return "<" + iri->str() + ">";
  }
  if (const auto* lit = std::get_if<TypedLiteral>(&term)) {
    std::string dt;
    if (auto curie = reg.compact(lit->datatype)) {
      used_prefixes.insert(curie->substr(0, curie->find(':')));
      dt = *curie;
    } else {
      dt = "<" + lit->datatype.str() + ">";
    }
    return "\"" + escape_ntriples(lit->lexical) + "\"^^" + dt;
  }
  return "\"" + escape_ntriples(std::get<PlainLiteral>(term).lexical) + "\"";
}

}  // namespace

std::string serialize_turtle(const Graph& g, const TermRegistry& reg) {
  const auto triples = g.triples_sorted();
  std::set<std::string> used;
  std::string body;
  std::size_t i = 0;
  while (i < triples.size()) {
    const Iri& subject = triples[i].subject;
    body += turtle_term(Term(subject), reg, used);
    std::size_t j = i;
    while (j < triples.size() && triples[j].subject == subject) {
      body += j == i ? " " : " ;\n    ";
      body += turtle_term(Term(triples[j].predicate), reg, used);
      body += " ";
      body += turtle_term(triples[j].object, reg, used);
      ++j;
    }
    body += " .\n";
    i = j;
  }
  std::string out;
  for (const auto& [prefix, ns] : reg.prefixes()) {
    if (used.count(prefix)) out += "@prefix " + prefix + ": <" + ns + "> .\n";
  }
  if (!out.empty()) out.push_back('\n');
  return out + body;
}

}  // namespace energykg

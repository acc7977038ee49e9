#include <cctype>
#include <map>
#include <set>

#include "energykg/error.hpp"
#include "energykg/query.hpp"

namespace energykg {

namespace {

// SPARQL keywords outside the supported subset; seeing one is a distinct
// "unsupported feature" error rather than a syntax error.
const std::set<std::string>& unsupported_keywords() {
  static const std::set<std::string> kw{
      "OPTIONAL", "UNION",     "SERVICE",  "GRAPH",  "DISTINCT", "REDUCED",
      "GROUP",    "HAVING",    "OFFSET",   "MINUS",  "BIND",     "VALUES",
      "ASK",      "CONSTRUCT", "DESCRIBE", "INSERT", "DELETE",   "EXISTS",
      "NOT",      "FROM",      "NAMED",
  };
  return kw;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = char(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

struct Token {
  enum Kind { Word, VarName, IriRef, String, Number, Punct, End } kind = End;
  std::string text;       // word/var/string content (unquoted), punct chars
  std::size_t pos = 0;    // byte offset, for error messages
};

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

  [[noreturn]] void error(const std::string& why, std::size_t pos) const {
    fail(ErrorKind::Query, "query: " + why + " at offset " + std::to_string(pos));
  }

  [[noreturn]] void error_here(const std::string& why) const { error(why, current_.pos); }

private:
  void advance() {
    skip_ws();
    current_.pos = pos_;
    if (pos_ >= text_.size()) {
      current_ = Token{Token::End, "", pos_};
      return;
    }
    const char c = text_[pos_];
    if (c == '?' || c == '$') {
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '_'))
        ++pos_;
      if (pos_ == start) error("empty variable name", start);
      current_ = Token{Token::VarName, std::string(text_.substr(start, pos_ - start)),
                       current_.pos};
      return;
    }
    if (c == '<') {
      const auto close = text_.find('>', pos_);
      if (close == std::string_view::npos) error("unterminated IRI", pos_);
      current_ = Token{Token::IriRef, std::string(text_.substr(pos_ + 1, close - pos_ - 1)),
                       current_.pos};
      pos_ = close + 1;
      return;
    }
    if (c == '"') {
      ++pos_;
      std::string out;
      while (true) {
        if (pos_ >= text_.size()) error("unterminated string", current_.pos);
        const char d = text_[pos_];
        if (d == '"') {
          ++pos_;
          break;
        }
        if (d == '\\') {
          ++pos_;
          if (pos_ >= text_.size()) error("dangling escape", pos_);
          const char e = text_[pos_++];
          switch (e) {
            case 't': out.push_back('\t'); break;
            case 'n': out.push_back('\n'); break;
            case 'r': out.push_back('\r'); break;
            case '"': out.push_back('"'); break;
            case '\\': out.push_back('\\'); break;
            default:
              error(std::string("unknown escape '\\") + e + "'", pos_ - 1);
          }
          continue;
        }
        out.push_back(d);
        ++pos_;
      }
      current_ = Token{Token::String, std::move(out), current_.pos};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        ((c == '-' || c == '+') && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      const std::size_t start = pos_;
      if (c == '-' || c == '+') ++pos_;
      const auto digits = [&] {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      };
      digits();
      // a '.' is part of the number only when a digit follows; otherwise it
      // is the triple terminator
      if (pos_ + 1 < text_.size() && text_[pos_] == '.' &&
          std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
        ++pos_;
        digits();
      }
      if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
        std::size_t exp = pos_ + 1;
        if (exp < text_.size() && (text_[exp] == '-' || text_[exp] == '+')) ++exp;
        if (exp < text_.size() && std::isdigit(static_cast<unsigned char>(text_[exp]))) {
          pos_ = exp;
          digits();
        }
      }
      current_ = Token{Token::Number, std::string(text_.substr(start, pos_ - start)),
                       current_.pos};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
              text_[pos_] == '-' || text_[pos_] == ':' || text_[pos_] == '.'))
        ++pos_;
      std::string word(text_.substr(start, pos_ - start));
      while (!word.empty() && word.back() == '.') {
        // trailing '.' is the triple terminator, not part of a name
        word.pop_back();
        --pos_;
      }
      current_ = Token{Token::Word, std::move(word), current_.pos};
      return;
    }
    // punctuation, including comparison operators
    static const char* two_char[] = {"^^", "<=", ">=", "!="};
    for (const char* op : two_char) {
      if (text_.substr(pos_, 2) == op) {
        current_ = Token{Token::Punct, op, pos_};
        pos_ += 2;
        return;
      }
    }
    current_ = Token{Token::Punct, std::string(1, c), pos_};
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
        continue;
      }
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token current_;
};

class Parser {
public:
  Parser(std::string_view text, const TermRegistry& registry)
      : lex_(text), registry_(registry) {
    // A whole-stream scan first: keywords outside the subset are reported by
    // name no matter where they sit (nested groups, solution modifiers,
    // other query forms).
    Lexer scan(text);
    while (scan.peek().kind != Token::End) check_unsupported(scan.take());
  }

  Query parse() {
    parse_prologue();
    expect_keyword("SELECT");
    parse_select();
    expect_keyword("WHERE");
    parse_group();
    parse_modifiers();
    if (lex_.peek().kind != Token::End) lex_.error_here("trailing content after query");
    finalize();
    return std::move(query_);
  }

private:
  void check_unsupported(const Token& t) {
    if (t.kind != Token::Word) return;
    const std::string u = upper(t.text);
    if (unsupported_keywords().count(u))
      fail(ErrorKind::Unsupported, "unsupported feature: " + u);
  }

  bool at_keyword(std::string_view kw) const {
    const Token& t = lex_.peek();
    return t.kind == Token::Word && upper(t.text) == kw;
  }

  void expect_keyword(std::string_view kw) {
    check_unsupported(lex_.peek());
    if (!at_keyword(kw))
      lex_.error_here("expected " + std::string(kw));
    lex_.take();
  }

  void parse_prologue() {
    while (at_keyword("PREFIX")) {
      lex_.take();
      Token name = lex_.take();
      if (name.kind != Token::Word || name.text.find(':') == std::string::npos)
        lex_.error("expected prefix name ending in ':'", name.pos);
      std::string prefix = name.text.substr(0, name.text.find(':'));
      Token iri = lex_.take();
      if (iri.kind != Token::IriRef) lex_.error("expected namespace IRI", iri.pos);
      if (!Iri::valid(iri.text)) lex_.error("invalid namespace IRI", iri.pos);
      local_prefixes_[prefix] = iri.text;
    }
    check_unsupported(lex_.peek());
  }

  void parse_select() {
    if (lex_.peek().kind == Token::Punct && lex_.peek().text == "*") {
      lex_.take();
      query_.star = true;
      return;
    }
    while (lex_.peek().kind == Token::VarName) query_.select_vars.push_back(lex_.take().text);
    if (query_.select_vars.empty()) lex_.error_here("SELECT needs '*' or at least one variable");
  }

  void parse_group() {
    if (!(lex_.peek().kind == Token::Punct && lex_.peek().text == "{"))
      lex_.error_here("expected '{'");
    lex_.take();
    while (true) {
      const Token& t = lex_.peek();
      if (t.kind == Token::Punct && t.text == "}") {
        lex_.take();
        return;
      }
      if (t.kind == Token::End) lex_.error_here("unterminated group (missing '}')");
      if (t.kind == Token::Word && upper(t.text) == "FILTER") {
        lex_.take();
        parse_filter();
        continue;
      }
      check_unsupported(t);
      parse_pattern();
    }
  }

  Iri expand(const std::string& curie, std::size_t pos) {
    const auto colon = curie.find(':');
    const std::string prefix = curie.substr(0, colon);
    const auto it = local_prefixes_.find(prefix);
    try {
      if (it != local_prefixes_.end()) return Iri(it->second + curie.substr(colon + 1));
      return registry_.expand(curie);
    } catch (const Error& e) {
      lex_.error(e.what(), pos);
    }
  }

  PatternSlot parse_slot(bool object_position) {
    Token t = lex_.take();
    switch (t.kind) {
      case Token::VarName:
        return Var{t.text};
      case Token::IriRef:
        if (!Iri::valid(t.text)) lex_.error("invalid IRI", t.pos);
        return Term(Iri(t.text));
      case Token::Word: {
        check_unsupported(t);
        if (t.text == "a") return Term(wk::rdf_type());
        if (t.text.find(':') == std::string::npos)
          lex_.error("expected variable, IRI or literal, got '" + t.text + "'", t.pos);
        return Term(expand(t.text, t.pos));
      }
      case Token::String: {
        if (!object_position) lex_.error("literals are only allowed in object position", t.pos);
        if (lex_.peek().kind == Token::Punct && lex_.peek().text == "^^") {
          lex_.take();
          Token dt = lex_.take();
          if (dt.kind == Token::IriRef) return Term(TypedLiteral{t.text, Iri(dt.text)});
          if (dt.kind == Token::Word && dt.text.find(':') != std::string::npos)
            return Term(TypedLiteral{t.text, expand(dt.text, dt.pos)});
          lex_.error("expected datatype IRI after '^^'", dt.pos);
        }
        if (lex_.peek().kind == Token::Punct && lex_.peek().text == "@")
          lex_.error("language tags are not supported", lex_.peek().pos);
        return Term(PlainLiteral{t.text});
      }
      case Token::Number: {
        if (!object_position) lex_.error("literals are only allowed in object position", t.pos);
        return Term(TypedLiteral{t.text, wk::xsd_double()});
      }
      default:
        lex_.error("expected variable, IRI or literal", t.pos);
    }
  }

  void parse_pattern() {
    const std::size_t pos = lex_.peek().pos;
    PatternSlot s = parse_slot(false);
    PatternSlot p = parse_slot(false);
    PatternSlot o = parse_slot(true);
    if (const Term* st = std::get_if<Term>(&s); st && !std::holds_alternative<Iri>(*st))
      lex_.error("subject must be a variable or IRI", pos);
    if (const Term* pt = std::get_if<Term>(&p); pt && !std::holds_alternative<Iri>(*pt))
      lex_.error("predicate must be a variable or IRI", pos);
    query_.patterns.push_back(TriplePattern{std::move(s), std::move(p), std::move(o)});
    if (lex_.peek().kind == Token::Punct && lex_.peek().text == ".") lex_.take();
  }

  void parse_filter() {
    if (!(lex_.peek().kind == Token::Punct && lex_.peek().text == "("))
      lex_.error_here("expected '(' after FILTER");
    lex_.take();
    Token v = lex_.take();
    if (v.kind != Token::VarName) lex_.error("FILTER expects ?var op constant", v.pos);
    Token op = lex_.take();
    CmpOp cmp;
    if (op.kind == Token::Punct && op.text == "=")
      cmp = CmpOp::Eq;
    else if (op.kind == Token::Punct && op.text == "!=")
      cmp = CmpOp::Ne;
    else if (op.kind == Token::Punct && op.text == "<")
      cmp = CmpOp::Lt;
    else if (op.kind == Token::Punct && op.text == "<=")
      cmp = CmpOp::Le;
    else if (op.kind == Token::Punct && op.text == ">")
      cmp = CmpOp::Gt;
    else if (op.kind == Token::Punct && op.text == ">=")
      cmp = CmpOp::Ge;
    else
      lex_.error("unknown comparison operator", op.pos);

    const std::size_t cpos = lex_.peek().pos;
    PatternSlot c = parse_slot(true);
    const Term* constant = std::get_if<Term>(&c);
    if (!constant) lex_.error("FILTER constant must be a ground term", cpos);
    if (std::holds_alternative<Iri>(*constant) && cmp != CmpOp::Eq && cmp != CmpOp::Ne)
      lex_.error("IRI constants support only = and !=", cpos);
    if (const auto* lit = std::get_if<TypedLiteral>(constant)) {
      if (!(lit->datatype == wk::xsd_double()) && !(lit->datatype == wk::xsd_dateTime()))
        lex_.error("filter constants must be xsd:double, xsd:dateTime, plain text or IRIs", cpos);
    }
    query_.filters.push_back(FilterExpr{v.text, cmp, *constant});
    if (!(lex_.peek().kind == Token::Punct && lex_.peek().text == ")"))
      lex_.error_here("expected ')'");
    lex_.take();
    if (lex_.peek().kind == Token::Punct && lex_.peek().text == ".") lex_.take();
  }

  void parse_modifiers() {
    if (at_keyword("ORDER")) {
      lex_.take();
      expect_keyword("BY");
      OrderSpec spec;
      if (at_keyword("ASC") || at_keyword("DESC")) {
        spec.descending = upper(lex_.take().text) == "DESC";
        if (!(lex_.peek().kind == Token::Punct && lex_.peek().text == "("))
          lex_.error_here("expected '('");
        lex_.take();
        Token v = lex_.take();
        if (v.kind != Token::VarName) lex_.error("ORDER BY expects a variable", v.pos);
        spec.var = v.text;
        if (!(lex_.peek().kind == Token::Punct && lex_.peek().text == ")"))
          lex_.error_here("expected ')'");
        lex_.take();
      } else {
        Token v = lex_.take();
        if (v.kind != Token::VarName) lex_.error("ORDER BY expects a variable", v.pos);
        spec.var = v.text;
      }
      query_.order_by = std::move(spec);
    }
    if (at_keyword("LIMIT")) {
      lex_.take();
      Token n = lex_.take();
      if (n.kind != Token::Number) lex_.error("LIMIT expects a positive integer", n.pos);
      std::size_t value = 0;
      for (char c : n.text) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
          lex_.error("LIMIT expects a positive integer", n.pos);
        value = value * 10 + std::size_t(c - '0');
      }
      if (value == 0) lex_.error("LIMIT must be positive", n.pos);
      query_.limit = value;
    }
    check_unsupported(lex_.peek());
  }

  void finalize() {
    if (query_.patterns.empty()) fail(ErrorKind::Query, "query has no triple patterns");
    std::vector<std::string> pattern_vars;  // in order of first appearance
    const auto note = [&](const PatternSlot& slot) {
      if (const Var* v = std::get_if<Var>(&slot)) {
        for (const auto& existing : pattern_vars)
          if (existing == v->name) return;
        pattern_vars.push_back(v->name);
      }
    };
    for (const auto& p : query_.patterns) {
      note(p.subject);
      note(p.predicate);
      note(p.object);
    }
    const auto in_patterns = [&](const std::string& name) {
      for (const auto& v : pattern_vars)
        if (v == name) return true;
      return false;
    };
    if (query_.star) {
      query_.select_vars = pattern_vars;
    } else {
      for (const auto& v : query_.select_vars)
        if (!in_patterns(v))
          fail(ErrorKind::Query, "selected variable ?" + v + " does not occur in any pattern");
    }
    for (const auto& f : query_.filters)
      if (!in_patterns(f.var))
        fail(ErrorKind::Query, "filter variable ?" + f.var + " does not occur in any pattern");
    if (query_.order_by && !in_patterns(query_.order_by->var))
      fail(ErrorKind::Query,
           "order variable ?" + query_.order_by->var + " does not occur in any pattern");
  }

  Lexer lex_;
  const TermRegistry& registry_;
  std::map<std::string, std::string> local_prefixes_;
  Query query_;
};

}  // namespace

Query parse_query(std::string_view text, const TermRegistry& registry) {
  return Parser(text, registry).parse();
}

}  // namespace energykg

#include "energykg/iri.hpp"

#include "energykg/error.hpp"

namespace energykg {

namespace {

// Characters excluded from IRIREF by the N-Triples grammar. Keeping them out
// here means IRIs never need escaping when serialized.
bool forbidden(unsigned char c) {
  if (c <= 0x20) return true;  // control characters and whitespace
  switch (c) {
    case '<':
    case '>':
    case '"':
    case '{':
    case '}':
    case '|':
    case '^':
    case '`':
    case '\\':
      return true;
    default:
      return false;
  }
}

const char* check(std::string_view text) {
  if (text.empty()) return "IRI is empty";
  if (text.find(':') == std::string_view::npos) return "IRI lacks a scheme separator";
  for (unsigned char c : text) {
    if (forbidden(c)) return "IRI contains a forbidden character";
  }
  return nullptr;
}

}  // namespace

Iri::Iri(std::string value) : value_(std::move(value)) {
  if (const char* why = check(value_)) fail(ErrorKind::Data, std::string(why) + ": '" + value_ + "'");
}

bool Iri::valid(std::string_view text) { return check(text) == nullptr; }

}  // namespace energykg

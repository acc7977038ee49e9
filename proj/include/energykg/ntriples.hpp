#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "energykg/rdf.hpp"
#include "energykg/vocab.hpp"

namespace energykg {

// Canonical N-Triples document: one triple per line, sorted, LF-terminated.
std::string serialize_ntriples(const Graph& g);

// Accepts N-Triples without blank nodes or language tags; parse errors carry
// `source:line`.
Graph parse_ntriples(std::string_view text, std::string_view source = "<input>");
Graph parse_ntriples_file(const std::filesystem::path& path);

// Turtle is emit-only; prefixes come from the registry, terms that do not
// compact cleanly stay in full form.
std::string serialize_turtle(const Graph& g, const TermRegistry& reg);

}  // namespace energykg

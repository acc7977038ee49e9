#include "energykg/vocab.hpp"

#include <cctype>
#include <fstream>

#include "energykg/error.hpp"

namespace energykg {

namespace {

bool valid_prefix_name(std::string_view p) {
  if (p.empty()) return true;  // the empty prefix is allowed
  if (!std::isalpha(static_cast<unsigned char>(p[0]))) return false;
  for (char c : p) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  }
  return true;
}

bool local_part_safe(std::string_view local) {
  for (char c : local) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.')
      return false;
  }
  if (local.empty()) return true;
  // PN_LOCAL cannot start with '-' or '.' and cannot end with '.'
  if (local.front() == '.' || local.front() == '-' || local.back() == '.') return false;
  return true;
}

bool part_char_ok(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

TermRegistry TermRegistry::defaults(std::string base) {
  TermRegistry reg;
  reg.add_prefix("", base);
  reg.add_prefix("seas", "https://w3id.org/seas/");
  reg.add_prefix("sosa", "http://www.w3.org/ns/sosa/");
  reg.add_prefix("rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#");
  reg.add_prefix("xsd", "http://www.w3.org/2001/XMLSchema#");
  // The climate-analysis ontology namespace is not printed in full by its
  // publisher's abbreviations; override via the prefix map if it differs.
  reg.add_prefix("ca", "http://jresearch.ucd.ie/ontology/ca#");
  reg.add_prefix("prop", base + "prop/");
  reg.add_prefix("eval", base + "eval/");
  reg.add_prefix("obs", base + "obs/");
  reg.add_prefix("station", base + "station/");
  reg.add_prefix("dt", base + "datatype/");
  return reg;
}

TermRegistry TermRegistry::from_file(const std::filesystem::path& path, std::string base) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "cannot open prefix map: " + path.string());
  TermRegistry reg;
  reg.add_prefix("", base);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      fail(ErrorKind::Config,
           path.string() + ":" + std::to_string(lineno) + ": expected prefix<TAB>namespace");
    std::string prefix = line.substr(0, tab);
    std::string ns = line.substr(tab + 1);
    if (prefix.empty() && reg.prefixes_.count("")) {
      // A file may rebind the empty prefix away from the configured base.
      reg.prefixes_.erase("");
    }
    reg.add_prefix(prefix, ns);
  }
  if (!reg.prefixes_.count("")) reg.add_prefix("", base);
  return reg;
}

void TermRegistry::add_prefix(const std::string& prefix, const std::string& ns) {
  if (!valid_prefix_name(prefix))
    fail(ErrorKind::Config, "invalid prefix name: '" + prefix + "'");
  if (!Iri::valid(ns)) fail(ErrorKind::Config, "invalid namespace IRI: '" + ns + "'");
  if (prefixes_.count(prefix))
    fail(ErrorKind::Config, "duplicate prefix: '" + prefix + "'");
  for (const auto& [p, n] : prefixes_) {
    if (n == ns)
      fail(ErrorKind::Config, "namespace '" + ns + "' already bound to prefix '" + p + "'");
  }
  prefixes_.emplace(prefix, ns);
}

Iri TermRegistry::expand(std::string_view curie) const {
  const auto colon = curie.find(':');
  if (colon == std::string_view::npos)
    fail(ErrorKind::Config, "not a prefixed name: '" + std::string(curie) + "'");
  const std::string prefix(curie.substr(0, colon));
  const auto it = prefixes_.find(prefix);
  if (it == prefixes_.end())
    fail(ErrorKind::Config, "unknown prefix: '" + prefix + "'");
  return Iri(it->second + std::string(curie.substr(colon + 1)));
}

std::optional<std::string> TermRegistry::compact(const Iri& iri) const {
  const std::string& text = iri.str();
  const std::string* best_ns = nullptr;
  const std::string* best_prefix = nullptr;
  for (const auto& [prefix, ns] : prefixes_) {
    if (text.size() >= ns.size() && text.compare(0, ns.size(), ns) == 0) {
      if (!best_ns || ns.size() > best_ns->size()) {
        best_ns = &ns;
        best_prefix = &prefix;
      }
    }
  }
  if (!best_ns) return std::nullopt;
  const std::string local = text.substr(best_ns->size());
  if (!local_part_safe(local)) return std::nullopt;
  return *best_prefix + ":" + local;
}

const std::string& TermRegistry::base() const {
  const auto it = prefixes_.find("");
  if (it == prefixes_.end()) fail(ErrorKind::Config, "registry has no base (empty prefix)");
  return it->second;
}

Vocab::Vocab(const TermRegistry& reg)
    : seas_ElectricPowerDistributionNetwork(reg.expand("seas:ElectricPowerDistributionNetwork")),
      seas_ElectricPowerTransmissionSystem(reg.expand("seas:ElectricPowerTransmissionSystem")),
      seas_ElectricPowerSystem(reg.expand("seas:ElectricPowerSystem")),
      seas_isPoweredBy(reg.expand("seas:isPoweredBy")),
      seas_powers(reg.expand("seas:powers")),
      seas_producedElectricPower(reg.expand("seas:producedElectricPower")),
      seas_consumedElectricPower(reg.expand("seas:consumedElectricPower")),
      seas_subSystemOf(reg.expand("seas:subSystemOf")),
      seas_ElectricPowerEvaluation(reg.expand("seas:ElectricPowerEvaluation")),
      seas_evaluation(reg.expand("seas:evaluation")),
      seas_evaluatedValue(reg.expand("seas:evaluatedValue")),
      ca_Station(reg.expand("ca:Station")),
      ca_Observation(reg.expand("ca:Observation")),
      ca_sourceStation(reg.expand("ca:sourceStation")),
      ca_withDataType(reg.expand("ca:withDataType")),
      ca_retrieveWeatherFrom(reg.expand("ca:retrieveWeatherFrom")),
      sosa_hasResult(reg.expand("sosa:hasResult")),
      sosa_resultTime(reg.expand("sosa:resultTime")),
      rdf_type(reg.expand("rdf:type")),
      xsd_double(reg.expand("xsd:double")),
      xsd_dateTime(reg.expand("xsd:dateTime")),
      located_in(reg.expand(":locatedIn")) {}

Minter::Minter(Iri base) : base_(std::move(base)) {}

namespace {

std::string_view kind_segment(IndividualKind kind) {
  switch (kind) {
    case IndividualKind::Locality:
    case IndividualKind::Site:
    case IndividualKind::Device:
    case IndividualKind::Network:
      return "";
    case IndividualKind::Property:
      return "prop/";
    case IndividualKind::Evaluation:
      return "eval/";
    case IndividualKind::Observation:
      return "obs/";
    case IndividualKind::Station:
      return "station/";
    case IndividualKind::Datatype:
      return "datatype/";
  }
  return "";
}

}  // namespace

Iri Minter::mint(IndividualKind kind, std::span<const std::string> parts) const {
  if (parts.empty()) fail(ErrorKind::Data, "mint: no name parts");
  std::string local;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string& part = parts[i];
    if (part.empty()) fail(ErrorKind::Data, "mint: empty name part");
    for (char c : part) {
      if (!part_char_ok(c))
        fail(ErrorKind::Data, "mint: illegal character in name part '" + part + "'");
    }
    if (i) local.push_back('_');
    local += part;
  }
  return Iri(base_.str() + std::string(kind_segment(kind)) + local);
}

Iri Minter::mint(IndividualKind kind, std::initializer_list<std::string> parts) const {
  return mint(kind, std::span<const std::string>(parts.begin(), parts.size()));
}

Iri Minter::evaluation(std::string_view device_local, Instant t) const {
  return mint(IndividualKind::Evaluation, {std::string(device_local), compact_instant(t)});
}

Iri Minter::observation(std::string_view station_id, Day date, std::string_view datatype) const {
  std::string day = format_day(date);
  std::erase(day, '-');
  return mint(IndividualKind::Observation,
              {sanitize(station_id), day, std::string(datatype)});
}

Iri Minter::station(std::string_view station_id) const {
  return mint(IndividualKind::Station, {sanitize(station_id)});
}

Iri Minter::datatype(std::string_view code) const {
  return mint(IndividualKind::Datatype, {std::string(code)});
}

std::string Minter::sanitize(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) out.push_back(part_char_ok(c) ? c : '_');
  return out;
}

}  // namespace energykg

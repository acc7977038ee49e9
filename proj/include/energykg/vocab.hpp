#pragma once

#include <filesystem>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "energykg/iri.hpp"
#include "energykg/timeutil.hpp"

namespace energykg {

inline constexpr std::string_view kDefaultBase = "http://example.org/energykg/";

// Prefix table for curie expansion and compaction. Immutable once built;
// safe to share across threads.
class TermRegistry {
public:
  // The built-in prefixes (seas, sosa, rdf, xsd, ca, dt, prop, eval, obs,
  // station) plus the empty prefix bound to `base`.
  static TermRegistry defaults(std::string base = std::string(kDefaultBase));

  // One `prefix<TAB>namespace` pair per line, UTF-8; '#' starts a comment.
  // The empty prefix is spelled as a line starting with a TAB.
  static TermRegistry from_file(const std::filesystem::path& path, std::string base);

  void add_prefix(const std::string& prefix, const std::string& ns);

  // "seas:subSystemOf" -> <https://w3id.org/seas/subSystemOf>.
  // Unknown prefixes are an error.
  Iri expand(std::string_view curie) const;

  // Longest-namespace match; nullopt when no prefix applies or the local
  // part would not survive re-expansion.
  std::optional<std::string> compact(const Iri& iri) const;

  const std::map<std::string, std::string>& prefixes() const { return prefixes_; }
  const std::string& base() const;

private:
  std::map<std::string, std::string> prefixes_;
};

// The ontology terms this pipeline emits, resolved once against a registry.
struct Vocab {
  explicit Vocab(const TermRegistry& reg);

  Iri seas_ElectricPowerDistributionNetwork;
  Iri seas_ElectricPowerTransmissionSystem;
  Iri seas_ElectricPowerSystem;
  Iri seas_isPoweredBy;
  Iri seas_powers;
  Iri seas_producedElectricPower;
  Iri seas_consumedElectricPower;
  Iri seas_subSystemOf;
  Iri seas_ElectricPowerEvaluation;
  Iri seas_evaluation;
  Iri seas_evaluatedValue;
  Iri ca_Station;
  Iri ca_Observation;
  Iri ca_sourceStation;
  Iri ca_withDataType;
  Iri ca_retrieveWeatherFrom;
  Iri sosa_hasResult;
  Iri sosa_resultTime;
  Iri rdf_type;
  Iri xsd_double;
  Iri xsd_dateTime;
  Iri located_in;  // minted under the base namespace
};

enum class IndividualKind {
  Locality,
  Site,
  Device,
  Network,
  Property,
  Evaluation,
  Observation,
  Station,
  Datatype,
};

// Deterministic IRI minting for every individual the pipeline creates.
// Heading-derived kinds (locality/site/device/network) live flat under the
// base namespace so node names match the source headings; the other kinds
// get a distinguishing path segment.
class Minter {
public:
  explicit Minter(Iri base);

  // Parts must be non-empty and contain only [A-Za-z0-9_].
  Iri mint(IndividualKind kind, std::span<const std::string> parts) const;
  Iri mint(IndividualKind kind, std::initializer_list<std::string> parts) const;

  Iri evaluation(std::string_view device_local, Instant t) const;
  Iri observation(std::string_view station_id, Day date, std::string_view datatype) const;
  Iri station(std::string_view station_id) const;
  Iri datatype(std::string_view code) const;

  const Iri& base() const { return base_; }

  // Replaces every character outside [A-Za-z0-9_] with '_'. Used for ids
  // arriving from external sources (e.g. "GHCND:GME00121926").
  static std::string sanitize(std::string_view raw);

private:
  Iri base_;
};

}  // namespace energykg

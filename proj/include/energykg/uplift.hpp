#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "energykg/config.hpp"
#include "energykg/heading.hpp"
#include "energykg/rdf.hpp"
#include "energykg/table.hpp"
#include "energykg/vocab.hpp"

namespace energykg {

struct UpliftStats {
  struct HeadingStats {
    std::size_t cells = 0;
    std::size_t empty = 0;
  };
  std::map<std::string, HeadingStats> per_heading;
  std::size_t triples = 0;
};

// Topology graph: device -> site -> network sub-system chain, sites located
// in the locality, grid feeds wired to the network. Conflicting descriptors
// (same heading, different content) are a topology error.
Graph build_topology(std::span<const SystemDescriptor> descriptors, const Iri& network,
                     std::string_view locality_label, const Vocab& vocab, const Minter& minter);

// Meter readings: one evaluation node per non-empty cell, reached from the
// device through its electric-power property node. Row formatting is the
// OpenMP-parallel hot loop; *_serial is the reference kept for testing.
Graph uplift_rows(const EnergyTable& table, std::span<const SystemDescriptor> descriptors,
                  const Vocab& vocab, const Minter& minter, UpliftStats* stats = nullptr);
Graph uplift_rows_serial(const EnergyTable& table, std::span<const SystemDescriptor> descriptors,
                         const Vocab& vocab, const Minter& minter, UpliftStats* stats = nullptr);

// Climate data: one observation node per record plus one type triple per
// station.
Graph uplift_climate(std::span<const ClimateRecord> records, const DatatypeRegistry& datatypes,
                     const Vocab& vocab, const Minter& minter);
Graph uplift_climate_serial(std::span<const ClimateRecord> records,
                            const DatatypeRegistry& datatypes, const Vocab& vocab,
                            const Minter& minter);

// `subject ca:retrieveWeatherFrom station`; a self-link is accepted but
// reported through `warnings`.
Triple link_weather(const Iri& subject, const Iri& station, const Vocab& vocab,
                    std::vector<std::string>* warnings = nullptr);

// Post-hoc shape validation: every evaluation carries exactly one value and
// one result time, every observation exactly one of each of its links.
struct AuditReport {
  std::vector<std::string> problems;
  std::vector<std::string> warnings;
  bool ok() const { return problems.empty(); }
};
AuditReport audit_graph(const Graph& g, const Vocab& vocab);

// Parses every heading of the table header. Duplicate canonical headings
// must agree.
std::vector<SystemDescriptor> descriptors_for(const EnergyTable& table, const RoleTable& roles);

Iri device_iri(const SystemDescriptor& d, const Minter& minter);
Iri site_iri(const SystemDescriptor& d, const Minter& minter);
Iri property_node_iri(const SystemDescriptor& d, const Minter& minter);

}  // namespace energykg

#include "energykg/uplift.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "energykg/error.hpp"

namespace energykg {

Iri device_iri(const SystemDescriptor& d, const Minter& minter) {
  std::vector<std::string> parts{d.country, d.locality, d.site_segment(), d.device_kind};
  if (d.device_ordinal) parts.push_back(std::to_string(*d.device_ordinal));
  return minter.mint(IndividualKind::Device, parts);
}

Iri site_iri(const SystemDescriptor& d, const Minter& minter) {
  return minter.mint(IndividualKind::Site, {d.country, d.locality, d.site_segment()});
}

Iri property_node_iri(const SystemDescriptor& d, const Minter& minter) {
  return minter.mint(IndividualKind::Property, {canonical_heading(d)});
}

std::vector<SystemDescriptor> descriptors_for(const EnergyTable& table, const RoleTable& roles) {
  std::vector<SystemDescriptor> out;
  out.reserve(table.headings.size());
  for (const auto& heading : table.headings) out.push_back(parse_heading(heading, roles));
  return out;
}

Graph build_topology(std::span<const SystemDescriptor> descriptors, const Iri& network,
                     std::string_view locality_label, const Vocab& vocab, const Minter& minter) {
  std::map<std::string, const SystemDescriptor*> by_heading;
  for (const auto& d : descriptors) {
    const std::string heading = canonical_heading(d);
    const auto [it, inserted] = by_heading.emplace(heading, &d);
    if (!inserted && !(*it->second == d))
      fail(ErrorKind::Topology, "conflicting descriptors for heading '" + heading + "'");
  }

  Graph g;
  g.insert({network, vocab.rdf_type, Term(vocab.seas_ElectricPowerDistributionNetwork)});
  const Iri locality = minter.mint(IndividualKind::Locality, {std::string(locality_label)});
  for (const auto& [heading, d] : by_heading) {
    const Iri device = device_iri(*d, minter);
    const Iri site = site_iri(*d, minter);
    g.insert({device, vocab.seas_subSystemOf, Term(site)});
    g.insert({device, vocab.rdf_type, Term(vocab.seas_ElectricPowerSystem)});
    g.insert({site, vocab.seas_subSystemOf, Term(network)});
    g.insert({site, vocab.located_in, Term(locality)});
    g.insert({site, vocab.rdf_type, Term(vocab.seas_ElectricPowerSystem)});
    if (is_grid_import(*d)) {
      g.insert({device, vocab.rdf_type, Term(vocab.seas_ElectricPowerTransmissionSystem)});
      g.insert({network, vocab.seas_powers, Term(site)});
    } else if (is_grid_export(*d)) {
      g.insert({device, vocab.rdf_type, Term(vocab.seas_ElectricPowerTransmissionSystem)});
      g.insert({network, vocab.seas_isPoweredBy, Term(site)});
    }
  }
  return g;
}

namespace {

struct HeadingContext {
  Iri device;
  Iri power_prop;
  Iri prop_node;
  std::string canonical;
};

std::vector<HeadingContext> heading_contexts(const EnergyTable& table,
                                             std::span<const SystemDescriptor> descriptors,
                                             const Vocab& vocab, const Minter& minter) {
  std::map<std::string, const SystemDescriptor*> by_heading;
  for (const auto& d : descriptors) by_heading.emplace(canonical_heading(d), &d);
  std::vector<HeadingContext> out;
  out.reserve(table.headings.size());
  for (const auto& heading : table.headings) {
    const auto it = by_heading.find(heading);
    if (it == by_heading.end())
      fail(ErrorKind::Data, "no descriptor for heading '" + heading + "'");
    const SystemDescriptor& d = *it->second;
    out.push_back(HeadingContext{device_iri(d, minter), power_property(d, vocab),
                                 property_node_iri(d, minter), heading});
  }
  return out;
}

// Validation runs serially up front so the first bad cell (smallest row) is
// the one reported.
void validate_rows(const EnergyTable& table) {
  for (const auto& row : table.rows) {
    for (std::size_t h = 0; h < row.readings.size(); ++h) {
      const auto& cell = row.readings[h];
      if (cell && (*cell < 0 || !std::isfinite(*cell)))
        fail(ErrorKind::Data, table.source + ":" + std::to_string(row.line) + ": column " +
                                  table.headings[h] + ": negative reading");
    }
  }
}

// The four per-cell triples hanging off one evaluation node.
void emit_cell(const HeadingContext& ctx, Instant timestamp, double value, const Vocab& vocab,
               const Minter& minter, std::vector<Triple>& out) {
  const Iri evaluation = minter.evaluation(ctx.canonical, timestamp);
  out.push_back({ctx.prop_node, vocab.seas_evaluation, Term(evaluation)});
  out.push_back({evaluation, vocab.rdf_type, Term(vocab.seas_ElectricPowerEvaluation)});
  out.push_back({evaluation, vocab.seas_evaluatedValue, double_literal(value)});
  out.push_back({evaluation, vocab.sosa_resultTime, datetime_literal(timestamp)});
}

void collect_stats(const EnergyTable& table, UpliftStats* stats, std::size_t triples) {
  if (!stats) return;
  for (std::size_t h = 0; h < table.headings.size(); ++h) {
    auto& entry = stats->per_heading[table.headings[h]];
    for (const auto& row : table.rows) {
      ++entry.cells;
      if (!row.readings[h]) ++entry.empty;
    }
  }
  stats->triples = triples;
}

Graph finish_rows(const EnergyTable& table, std::span<const HeadingContext> contexts,
                  std::vector<std::vector<Triple>> chunks, UpliftStats* stats) {
  Graph g;
  // Property-link triple once per heading that carries at least one value.
  std::vector<bool> active(contexts.size(), false);
  for (const auto& row : table.rows)
    for (std::size_t h = 0; h < row.readings.size(); ++h)
      if (row.readings[h]) active[h] = true;
  for (std::size_t h = 0; h < contexts.size(); ++h) {
    if (active[h])
      g.insert({contexts[h].device, contexts[h].power_prop, Term(contexts[h].prop_node)});
  }
  for (auto& chunk : chunks)
    for (auto& t : chunk) g.insert(std::move(t));
  collect_stats(table, stats, g.size());
  return g;
}

}  // namespace

Graph uplift_rows_serial(const EnergyTable& table, std::span<const SystemDescriptor> descriptors,
                         const Vocab& vocab, const Minter& minter, UpliftStats* stats) {
  const auto contexts = heading_contexts(table, descriptors, vocab, minter);
  validate_rows(table);
  std::vector<Triple> triples;
  for (const auto& row : table.rows) {
    for (std::size_t h = 0; h < row.readings.size(); ++h) {
      if (row.readings[h]) emit_cell(contexts[h], row.timestamp, *row.readings[h], vocab, minter, triples);
    }
  }
  std::vector<std::vector<Triple>> chunks;
  chunks.push_back(std::move(triples));
  return finish_rows(table, contexts, std::move(chunks), stats);
}

Graph uplift_rows(const EnergyTable& table, std::span<const SystemDescriptor> descriptors,
                  const Vocab& vocab, const Minter& minter, UpliftStats* stats) {
  const auto contexts = heading_contexts(table, descriptors, vocab, minter);
  validate_rows(table);
  const std::size_t n = table.rows.size();
  // Fixed-size chunks with per-chunk output vectors: the merged graph is the
  // same set regardless of thread count or scheduling.
  const std::size_t per_chunk = 1024;
  const std::size_t num_chunks = n == 0 ? 0 : (n + per_chunk - 1) / per_chunk;
  std::vector<std::vector<Triple>> chunks(num_chunks);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (num_chunks > 1)
#endif
  for (std::size_t c = 0; c < num_chunks; ++c) {
    const std::size_t begin = c * per_chunk;
    const std::size_t end = std::min(n, begin + per_chunk);
    auto& out = chunks[c];
    for (std::size_t r = begin; r < end; ++r) {
      const auto& row = table.rows[r];
      for (std::size_t h = 0; h < row.readings.size(); ++h) {
        if (row.readings[h])
          emit_cell(contexts[h], row.timestamp, *row.readings[h], vocab, minter, out);
      }
    }
  }
  return finish_rows(table, contexts, std::move(chunks), stats);
}

namespace {

void emit_record(const ClimateRecord& rec, const Vocab& vocab, const Minter& minter,
                 std::vector<Triple>& out) {
  const Iri obs = minter.observation(rec.station_id, rec.date, rec.datatype);
  const Iri station = minter.station(rec.station_id);
  out.push_back({obs, vocab.rdf_type, Term(vocab.ca_Observation)});
  out.push_back({obs, vocab.ca_sourceStation, Term(station)});
  out.push_back({obs, vocab.ca_withDataType, Term(minter.datatype(rec.datatype))});
  out.push_back({obs, vocab.sosa_hasResult, double_literal(rec.value)});
  out.push_back({obs, vocab.sosa_resultTime, datetime_literal(day_start(rec.date))});
}

void validate_records(std::span<const ClimateRecord> records, const DatatypeRegistry& datatypes) {
  std::map<std::tuple<std::string, Day, std::string>, double> seen;
  for (const auto& rec : records) {
    if (!datatypes.known(rec.datatype))
      fail(ErrorKind::Data, "unknown datatype code '" + rec.datatype + "'" +
                                (rec.line ? " at line " + std::to_string(rec.line) : ""));
    if (!std::isfinite(rec.value)) fail(ErrorKind::Data, "non-finite climate value");
    const auto key = std::make_tuple(rec.station_id, rec.date, rec.datatype);
    const auto it = seen.find(key);
    if (it != seen.end() && it->second != rec.value)
      fail(ErrorKind::Data, "conflicting values for observation (" + rec.station_id + ", " +
                                format_day(rec.date) + ", " + rec.datatype + ")");
    seen.emplace(key, rec.value);
  }
}

Graph finish_climate(std::span<const ClimateRecord> records, const Vocab& vocab,
                     const Minter& minter, std::vector<std::vector<Triple>> chunks) {
  Graph g;
  std::set<std::string> stations;
  for (const auto& rec : records) stations.insert(rec.station_id);
  for (const auto& id : stations)
    g.insert({minter.station(id), vocab.rdf_type, Term(vocab.ca_Station)});
  for (auto& chunk : chunks)
    for (auto& t : chunk) g.insert(std::move(t));
  return g;
}

}  // namespace

Graph uplift_climate_serial(std::span<const ClimateRecord> records,
                            const DatatypeRegistry& datatypes, const Vocab& vocab,
                            const Minter& minter) {
  validate_records(records, datatypes);
  std::vector<Triple> triples;
  for (const auto& rec : records) emit_record(rec, vocab, minter, triples);
  std::vector<std::vector<Triple>> chunks;
  chunks.push_back(std::move(triples));
  return finish_climate(records, vocab, minter, std::move(chunks));
}

Graph uplift_climate(std::span<const ClimateRecord> records, const DatatypeRegistry& datatypes,
                     const Vocab& vocab, const Minter& minter) {
  validate_records(records, datatypes);
  const std::size_t n = records.size();
  const std::size_t per_chunk = 1024;
  const std::size_t num_chunks = n == 0 ? 0 : (n + per_chunk - 1) / per_chunk;
  std::vector<std::vector<Triple>> chunks(num_chunks);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (num_chunks > 1)
#endif
  for (std::size_t c = 0; c < num_chunks; ++c) {
    const std::size_t begin = c * per_chunk;
    const std::size_t end = std::min(n, begin + per_chunk);
    for (std::size_t r = begin; r < end; ++r) emit_record(records[r], vocab, minter, chunks[c]);
  }
  return finish_climate(records, vocab, minter, std::move(chunks));
}

Triple link_weather(const Iri& subject, const Iri& station, const Vocab& vocab,
                    std::vector<std::string>* warnings) {
  if (subject == station && warnings)
    warnings->push_back("weather link is a self-link: " + subject.str());
  return Triple{subject, vocab.ca_retrieveWeatherFrom, Term(station)};
}

namespace {

std::size_t count_links(const Graph& g, const Iri& subject, const Iri& predicate) {
  return g.match(subject, predicate, std::nullopt).size();
}

}  // namespace

AuditReport audit_graph(const Graph& g, const Vocab& vocab) {
  AuditReport report;
  const auto expect_one = [&](const Iri& node, const Iri& predicate, std::string_view role) {
    const std::size_t n = count_links(g, node, predicate);
    if (n != 1)
      report.problems.push_back(std::string(role) + " " + node.str() + " has " +
                                std::to_string(n) + " " + predicate.str() + " links");
  };
  for (const Triple& t :
       g.match(std::nullopt, wk::rdf_type(), Term(vocab.seas_ElectricPowerEvaluation))) {
    expect_one(t.subject, vocab.seas_evaluatedValue, "evaluation");
    expect_one(t.subject, vocab.sosa_resultTime, "evaluation");
  }
  for (const Triple& t : g.match(std::nullopt, wk::rdf_type(), Term(vocab.ca_Observation))) {
    expect_one(t.subject, vocab.sosa_hasResult, "observation");
    expect_one(t.subject, vocab.sosa_resultTime, "observation");
    expect_one(t.subject, vocab.ca_sourceStation, "observation");
    expect_one(t.subject, vocab.ca_withDataType, "observation");
  }
  for (const Triple& t : g.match(std::nullopt, vocab.ca_retrieveWeatherFrom, std::nullopt)) {
    if (Term(t.subject) == t.object)
      report.warnings.push_back("self weather link: " + t.subject.str());
  }
  return report;
}

}  // namespace energykg

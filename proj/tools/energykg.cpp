#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "energykg/analysis.hpp"
#include "energykg/config.hpp"
#include "energykg/error.hpp"
#include "energykg/ntriples.hpp"
#include "energykg/query.hpp"
#include "energykg/service.hpp"
#include "energykg/table.hpp"
#include "energykg/uplift.hpp"

namespace {

using namespace energykg;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage:
      return 1;
    case ErrorKind::Query:
    case ErrorKind::Unsupported:
      return 3;
    default:
      return 2;
  }
}

PipelineConfig load_config(const std::string& config_path) {
  if (!config_path.empty()) return PipelineConfig::load(config_path);
  if (const char* env = std::getenv("ENERGYKG_CONFIG"); env && *env)
    return PipelineConfig::load(env);
  return PipelineConfig::defaults();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Data, "cannot write " + path);
  out << content;
  if (!out) fail(ErrorKind::Data, "short write to " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Data, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string serialize(const Graph& g, const std::string& format, const TermRegistry& registry) {
  if (format == "turtle") return serialize_turtle(g, registry);
  return serialize_ntriples(g);
}

Graph load_graphs(const std::vector<std::string>& paths) {
  Graph g;
  for (const auto& path : paths) {
    const Graph part = parse_ntriples_file(path);
    g.insert_all(part);
  }
  g.freeze();
  return g;
}

// Networks and localities are per (country, locality) group of the header.
struct TopologyPlan {
  Iri network;
  std::string locality_label;
  std::vector<SystemDescriptor> descriptors;
};

std::vector<TopologyPlan> topology_plans(const std::vector<SystemDescriptor>& descriptors,
                                         const PipelineConfig& cfg, const Minter& minter) {
  std::map<std::pair<std::string, std::string>, TopologyPlan> groups;
  for (const auto& d : descriptors) {
    const auto key = std::make_pair(d.country, d.locality);
    auto it = groups.find(key);
    if (it == groups.end()) {
      TopologyPlan plan{
          minter.mint(IndividualKind::Network, {d.country, d.locality, cfg.network_label}),
          cfg.locality_label.value_or(d.country + "_" + d.locality),
          {}};
      it = groups.emplace(key, std::move(plan)).first;
    }
    it->second.descriptors.push_back(d);
  }
  std::vector<TopologyPlan> out;
  for (auto& [key, plan] : groups) out.push_back(std::move(plan));
  return out;
}

int cmd_convert(const std::string& config_path, const std::string& input,
                const std::string& out_path, const std::string& format) {
  const PipelineConfig cfg = load_config(config_path);
  const Minter minter{Iri(cfg.base_iri)};
  const Vocab vocab(cfg.registry);

  const EnergyTable table = read_energy_table_file(input);
  for (const auto& notice : table.notices) std::cerr << "notice: " << notice << "\n";
  const auto descriptors = descriptors_for(table, cfg.roles);

  Graph g;
  for (const auto& plan : topology_plans(descriptors, cfg, minter)) {
    const Graph topo =
        build_topology(plan.descriptors, plan.network, plan.locality_label, vocab, minter);
    g.insert_all(topo);
  }
  UpliftStats stats;
  const Graph rows = uplift_rows(table, descriptors, vocab, minter, &stats);
  g.insert_all(rows);

  write_output(out_path, serialize(g, format, cfg.registry));
  std::cerr << "triples: " << g.size() << "\n";
  for (const auto& [heading, hs] : stats.per_heading)
    std::cerr << heading << ": " << (hs.cells - hs.empty) << " values, " << hs.empty
              << " empty\n";
  return 0;
}

int cmd_climate(const std::string& config_path, const std::string& input,
                const std::string& out_path, const std::string& format) {
  const PipelineConfig cfg = load_config(config_path);
  const Minter minter{Iri(cfg.base_iri)};
  const Vocab vocab(cfg.registry);

  const auto records = read_climate_records_file(input);
  Graph g = uplift_climate(records, cfg.datatypes, vocab, minter);

  // Wire each configured locality's network to its station.
  std::vector<std::string> warnings;
  for (const auto& [locality, station] : cfg.stations) {
    const auto underscore = locality.find('_');
    if (underscore == std::string::npos)
      fail(ErrorKind::Config, "station map locality must be COUNTRY_LOCALITY, got '" + locality +
                                  "'");
    const Iri network =
        minter.mint(IndividualKind::Network, {locality.substr(0, underscore),
                                              locality.substr(underscore + 1), cfg.network_label});
    g.insert(link_weather(network, station, vocab, &warnings));
  }
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

  write_output(out_path, serialize(g, format, cfg.registry));
  std::cerr << "triples: " << g.size() << " (" << records.size() << " records)\n";
  return 0;
}

int cmd_query(const std::string& config_path, const std::string& query_path,
              const std::vector<std::string>& graph_paths, const std::string& results_format,
              std::size_t limit) {
  const PipelineConfig cfg = load_config(config_path);
  Query q = parse_query(read_file(query_path), cfg.registry);
  if (limit > 0) q.limit = q.limit ? std::min(*q.limit, limit) : limit;
  const Graph g = load_graphs(graph_paths);
  const ResultSet rs = evaluate(g, q);
  std::cout << (results_format == "tsv" ? results_tsv(rs) : results_json(rs));
  return 0;
}

int cmd_analyze(const std::string& config_path, const std::vector<std::string>& graph_paths,
                const std::vector<std::string>& device_texts, int year,
                const std::string& out_path, const std::string& scatter_path) {
  const PipelineConfig cfg = load_config(config_path);
  const Minter minter{Iri(cfg.base_iri)};
  const Vocab vocab(cfg.registry);
  std::vector<Iri> devices;
  for (const auto& text : device_texts) {
    if (!Iri::valid(text)) fail(ErrorKind::Usage, "--devices: not an IRI: '" + text + "'");
    devices.emplace_back(text);
  }
  const Graph g = load_graphs(graph_paths);
  const StudyResult result =
      run_correlation_study(g, devices, StudyOptions{year, {"TMAX", "PRCP"}}, vocab, minter,
                            cfg.datatypes);
  write_output(out_path, correlation_csv(result.table));
  if (!scatter_path.empty()) write_output(scatter_path, scatter_csv(result.scatter));
  for (const auto& [device, resets] : result.diagnostics.resets_per_device)
    std::cerr << "notice: " << device << ": skipped " << resets << " counter reset(s)\n";
  for (const auto& notice : result.diagnostics.notices) std::cerr << "notice: " << notice << "\n";
  return 0;
}

int cmd_serve(const std::string& config_path, const std::vector<std::string>& graph_paths,
              const std::string& listen) {
  const PipelineConfig cfg = load_config(config_path);
  const auto [host, port] = parse_listen_address(listen);
  const Graph g = load_graphs(graph_paths);
  std::cerr << "serving " << g.size() << " triples on " << host << ":" << port << "\n";
  run_query_service(g, cfg.registry, host, port);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Household energy knowledge graph toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "Pipeline config file (or $ENERGYKG_CONFIG)");
  app.add_option("--seed", seed, "Seed for any randomized diagnostics sampling");

  auto* convert = app.add_subcommand("convert", "Uplift an energy meter table to RDF");
  std::string convert_input, convert_out = "-", convert_format = "ntriples";
  convert->add_option("table", convert_input, "Energy table (CSV)")->required();
  convert->add_option("--out", convert_out, "Output path ('-' = stdout)");
  convert->add_option("--format", convert_format, "Output format")
      ->check(CLI::IsMember({"ntriples", "turtle"}));

  auto* climate = app.add_subcommand("climate", "Uplift climate records to RDF");
  std::string climate_input, climate_out = "-", climate_format = "ntriples";
  climate->add_option("records", climate_input, "Climate records (CSV)")->required();
  climate->add_option("--out", climate_out, "Output path ('-' = stdout)");
  climate->add_option("--format", climate_format, "Output format")
      ->check(CLI::IsMember({"ntriples", "turtle"}));

  auto* query = app.add_subcommand("query", "Evaluate a query over N-Triples graphs");
  std::string query_file, results_format = "json";
  std::size_t query_limit = 0;
  std::vector<std::string> query_graphs;
  query->add_option("query", query_file, "Query file")->required();
  query->add_option("graphs", query_graphs, "Graph files (N-Triples)")->required();
  query->add_option("--results", results_format, "Result format")
      ->check(CLI::IsMember({"json", "tsv"}));
  query->add_option("--limit", query_limit, "Cap the number of result rows")
      ->check(CLI::PositiveNumber);

  auto* analyze = app.add_subcommand("analyze", "Correlate PV generation with weather");
  std::vector<std::string> analyze_graphs, analyze_devices;
  int analyze_year = 2016;
  std::string analyze_out = "-", analyze_scatter;
  analyze->add_option("graphs", analyze_graphs, "Graph files (N-Triples)")->required();
  analyze->add_option("--devices", analyze_devices, "PV device IRIs (comma separated)")
      ->required()
      ->delimiter(',');
  analyze->add_option("--year", analyze_year, "Study year")->required();
  analyze->add_option("--out", analyze_out, "Correlation table output ('-' = stdout)");
  analyze->add_option("--scatter", analyze_scatter, "Scatter export path");

  auto* serve = app.add_subcommand("serve", "Serve a read-only query endpoint");
  std::vector<std::string> serve_graphs;
  std::string listen = "127.0.0.1:3030";
  serve->add_option("graphs", serve_graphs, "Graph files (N-Triples)")->required();
  serve->add_option("--listen", listen, "Listen address HOST:PORT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (convert->parsed())
      return cmd_convert(config_path, convert_input, convert_out, convert_format);
    if (climate->parsed())
      return cmd_climate(config_path, climate_input, climate_out, climate_format);
    if (query->parsed())
      return cmd_query(config_path, query_file, query_graphs, results_format, query_limit);
    if (analyze->parsed())
      return cmd_analyze(config_path, analyze_graphs, analyze_devices, analyze_year, analyze_out,
                         analyze_scatter);
    if (serve->parsed()) return cmd_serve(config_path, serve_graphs, listen);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

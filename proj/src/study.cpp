#include <algorithm>
#include <charconv>
#include <set>

#include "energykg/analysis.hpp"
#include "energykg/error.hpp"
#include "energykg/query.hpp"

namespace energykg {

namespace {

Query year_window(Query q, const std::string& time_var, int year) {
  const Instant begin = day_start(parse_day(std::to_string(year) + "-01-01"));
  const Instant end = day_start(parse_day(std::to_string(year + 1) + "-01-01"));
  q.filters.push_back(
      {time_var, CmpOp::Ge, TypedLiteral{format_instant(begin), wk::xsd_dateTime()}});
  q.filters.push_back(
      {time_var, CmpOp::Lt, TypedLiteral{format_instant(end), wk::xsd_dateTime()}});
  return q;
}

double double_value(const Term& term, std::string_view what) {
  const auto* lit = std::get_if<TypedLiteral>(&term);
  if (!lit || !(lit->datatype == wk::xsd_double()))
    fail(ErrorKind::Study, "expected an xsd:double for " + std::string(what));
  double v = 0;
  std::from_chars(lit->lexical.data(), lit->lexical.data() + lit->lexical.size(), v);
  return v;
}

Instant instant_value(const Term& term, std::string_view what) {
  const auto* lit = std::get_if<TypedLiteral>(&term);
  if (!lit || !(lit->datatype == wk::xsd_dateTime()))
    fail(ErrorKind::Study, "expected an xsd:dateTime for " + std::string(what));
  return parse_instant(lit->lexical);
}

// The produced-power evaluation series of one device, as a programmatic
// query against the store.
std::vector<std::pair<Instant, double>> energy_series(const Graph& g, const Iri& device,
                                                      int year, const Vocab& vocab) {
  Query q;
  q.select_vars = {"t", "v"};
  q.patterns.push_back({Term(device), Term(vocab.seas_producedElectricPower), Var{"prop"}});
  q.patterns.push_back({Var{"prop"}, Term(vocab.seas_evaluation), Var{"e"}});
  q.patterns.push_back({Var{"e"}, Term(vocab.seas_evaluatedValue), Var{"v"}});
  q.patterns.push_back({Var{"e"}, Term(vocab.sosa_resultTime), Var{"t"}});
  q.order_by = OrderSpec{"t", false};
  const ResultSet rs = evaluate(g, year_window(std::move(q), "t", year));
  std::vector<std::pair<Instant, double>> samples;
  samples.reserve(rs.rows.size());
  for (const auto& row : rs.rows)
    samples.emplace_back(instant_value(row.values[0], "result time"),
                         double_value(row.values[1], "evaluated value"));
  return samples;
}

// device -> site -> network; errors name the node that breaks the chain.
Iri network_of(const Graph& g, const Iri& device, const Vocab& vocab) {
  const auto sites = g.match(device, vocab.seas_subSystemOf, std::nullopt);
  if (sites.empty())
    fail(ErrorKind::Study, "device " + device.str() + " has no site (seas:subSystemOf)");
  const auto* site = std::get_if<Iri>(&sites.front().object);
  if (!site) fail(ErrorKind::Study, "site of " + device.str() + " is not an IRI");
  const auto nets = g.match(*site, vocab.seas_subSystemOf, std::nullopt);
  if (nets.empty())
    fail(ErrorKind::Study, "site " + site->str() + " has no network (seas:subSystemOf)");
  const auto* net = std::get_if<Iri>(&nets.front().object);
  if (!net) fail(ErrorKind::Study, "network of " + site->str() + " is not an IRI");
  return *net;
}

Iri station_of(const Graph& g, const Iri& network, const Vocab& vocab) {
  const auto links = g.match(network, vocab.ca_retrieveWeatherFrom, std::nullopt);
  if (links.empty())
    fail(ErrorKind::Study, "missing weather link: " + network.str() +
                               " has no ca:retrieveWeatherFrom triple");
  const auto* station = std::get_if<Iri>(&links.front().object);
  if (!station) fail(ErrorKind::Study, "weather link of " + network.str() + " is not an IRI");
  return *station;
}

DailySeries weather_series(const Graph& g, const Iri& station, const std::string& datatype,
                           int year, const Vocab& vocab, const Minter& minter,
                           const DatatypeRegistry& registry) {
  Query q;
  q.select_vars = {"d", "w"};
  q.patterns.push_back({Var{"obs"}, Term(vocab.ca_sourceStation), Term(station)});
  q.patterns.push_back({Var{"obs"}, Term(vocab.ca_withDataType), Term(minter.datatype(datatype))});
  q.patterns.push_back({Var{"obs"}, Term(vocab.sosa_hasResult), Var{"w"}});
  q.patterns.push_back({Var{"obs"}, Term(vocab.sosa_resultTime), Var{"d"}});
  const ResultSet rs = evaluate(g, year_window(std::move(q), "d", year));
  DailySeries raw;
  raw.unit = "raw";
  for (const auto& row : rs.rows) {
    const Day day = day_of(instant_value(row.values[0], "observation time"));
    raw.points[day] = double_value(row.values[1], "observation result");
  }
  return unit_normalize(raw, datatype, registry);
}

}  // namespace

StudyResult run_correlation_study(const Graph& g, std::span<const Iri> devices,
                                  const StudyOptions& options, const Vocab& vocab,
                                  const Minter& minter, const DatatypeRegistry& datatypes) {
  if (!g.frozen()) fail(ErrorKind::Study, "study requires a frozen graph");
  if (devices.empty()) fail(ErrorKind::Study, "no devices given");
  if (options.datatypes.empty()) fail(ErrorKind::Study, "no datatypes given");

  StudyResult result;
  for (const Iri& device : devices) result.table.devices.push_back(device_label(device));

  // Weather series are per (station, datatype); devices of one network share
  // them, so cache by key.
  std::map<std::pair<std::string, std::string>, DailySeries> weather_cache;

  struct DeviceData {
    DailySeries energy;
    std::map<std::string, DailySeries> weather;
  };
  std::vector<DeviceData> per_device(devices.size());

  // Per-device studies are independent; the serial pass below fills the
  // shared cache, after which devices could fan out, but the join+pearson
  // work is tiny compared to the queries so everything stays in one loop.
  for (std::size_t i = 0; i < devices.size(); ++i) {
    const Iri& device = devices[i];
    const std::string label = result.table.devices[i];

    const auto samples = energy_series(g, device, options.year, vocab);
    ResetDiagnostics resets;
    per_device[i].energy = cumulative_to_daily(samples, &resets);
    if (resets.resets_skipped) result.diagnostics.resets_per_device[label] = resets.resets_skipped;

    const Iri network = network_of(g, device, vocab);
    const Iri station = station_of(g, network, vocab);
    for (const auto& datatype : options.datatypes) {
      const auto key = std::make_pair(station.str(), datatype);
      auto it = weather_cache.find(key);
      if (it == weather_cache.end()) {
        it = weather_cache
                 .emplace(key, weather_series(g, station, datatype, options.year, vocab, minter,
                                              datatypes))
                 .first;
      }
      per_device[i].weather[datatype] = it->second;
    }

    for (const auto& datatype : options.datatypes) {
      const auto pairs = align_join(per_device[i].energy, per_device[i].weather[datatype]);
      if (pairs.size() < 2)
        fail(ErrorKind::Study, "device " + label + " and " + datatype +
                                   " share fewer than 2 days; correlation undefined");
      std::vector<double> xs, ys;
      xs.reserve(pairs.size());
      ys.reserve(pairs.size());
      for (const auto& [day, e, w] : pairs) {
        xs.push_back(w);
        ys.push_back(e);
      }
      CorrelationCell cell;
      try {
        cell.r = pearson(xs, ys);
      } catch (const Error& e) {
        fail(ErrorKind::Study,
             "device " + label + " vs " + datatype + ": " + std::string(e.what()));
      }
      cell.n = pairs.size();
      result.table.rows[datatype][label] = cell;
    }
  }

  // Scatter export: days carrying the energy value and both plotted weather
  // quantities.
  const bool have_tmax = std::count(options.datatypes.begin(), options.datatypes.end(), "TMAX");
  const bool have_prcp = std::count(options.datatypes.begin(), options.datatypes.end(), "PRCP");
  if (have_tmax && have_prcp) {
    for (std::size_t i = 0; i < devices.size(); ++i) {
      const auto& energy = per_device[i].energy;
      const auto& tmax = per_device[i].weather["TMAX"];
      const auto& prcp = per_device[i].weather["PRCP"];
      for (const auto& [day, e] : energy.points) {
        const auto t = tmax.points.find(day);
        const auto p = prcp.points.find(day);
        if (t == tmax.points.end() || p == prcp.points.end()) continue;
        result.scatter.push_back(
            {result.table.devices[i], day, e, t->second, p->second});
      }
    }
  } else {
    result.diagnostics.notices.push_back(
        "scatter export skipped: needs both TMAX and PRCP datatypes");
  }
  return result;
}

}  // namespace energykg

#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "energykg/config.hpp"
#include "energykg/rdf.hpp"
#include "energykg/timeutil.hpp"
#include "energykg/vocab.hpp"

namespace energykg {

// Date-keyed numeric series; at most one value per day, all values finite.
struct DailySeries {
  std::map<Day, double> points;
  std::string unit;
};

struct ResetDiagnostics {
  std::size_t resets_skipped = 0;
};

// Daily energy from a cumulative counter: value(d) = last reading of d minus
// last reading of the previous day that has samples. Negative differences
// (counter resets) are skipped and counted.
DailySeries cumulative_to_daily(std::span<const std::pair<Instant, double>> samples,
                                ResetDiagnostics* diag = nullptr);

// Applies the registry scale for the datatype and relabels the unit.
DailySeries unit_normalize(const DailySeries& series, std::string_view datatype,
                           const DatatypeRegistry& registry);

// Pairs for exactly the days present in both series, date-ascending.
std::vector<std::tuple<Day, double, double>> align_join(const DailySeries& a,
                                                        const DailySeries& b);

// Pearson correlation coefficient. Requires equal lengths, n >= 2 and
// nonzero variance on both sides. `pearson` reduces over fixed-size chunks
// that may run on OpenMP threads, combined in chunk order so the result is
// bitwise independent of the thread count; `pearson_serial` is the plain
// loop kept as the reference.
double pearson(std::span<const double> x, std::span<const double> y);
double pearson_serial(std::span<const double> x, std::span<const double> y);

struct CorrelationCell {
  double r = 0;
  std::size_t n = 0;
};

// datatype code -> device label -> (r, n); devices keeps the input order.
struct CorrelationTable {
  std::vector<std::string> devices;
  std::map<std::string, std::map<std::string, CorrelationCell>> rows;
};

struct ScatterRow {
  std::string device;
  Day date = 0;
  double energy_kwh = 0;
  double tmax_c = 0;
  double prcp_mm = 0;
};

struct StudyDiagnostics {
  std::map<std::string, std::size_t> resets_per_device;
  std::vector<std::string> notices;
};

struct StudyOptions {
  int year = 2016;
  std::vector<std::string> datatypes{"TMAX", "PRCP"};
};

struct StudyResult {
  CorrelationTable table;
  std::vector<ScatterRow> scatter;
  StudyDiagnostics diagnostics;
};

// The correlation study: per device, query the evaluation series
// out of the store, derive daily energy, align it with each normalized
// weather series reached through the device's weather link, and correlate.
StudyResult run_correlation_study(const Graph& g, std::span<const Iri> devices,
                                  const StudyOptions& options, const Vocab& vocab,
                                  const Minter& minter, const DatatypeRegistry& datatypes);

// `datatype,device,r,n` rows in table order.
std::string correlation_csv(const CorrelationTable& table);
// `device,date,energy_kwh,tmax_c,prcp_mm` rows.
std::string scatter_csv(std::span<const ScatterRow> rows);

std::string device_label(const Iri& device);

}  // namespace energykg

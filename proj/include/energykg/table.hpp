#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "energykg/timeutil.hpp"

namespace energykg {

// One row of a CoSSMic-style meter table: cumulative kWh counters per
// heading, empty cell = missing. `line` is the 1-based source line, kept for
// error locators.
struct EnergyRow {
  Instant timestamp = 0;
  std::size_t line = 0;
  std::vector<std::optional<double>> readings;  // parallel to EnergyTable::headings
};

struct EnergyTable {
  std::vector<std::string> headings;
  std::vector<EnergyRow> rows;
  std::vector<std::string> notices;  // ignored columns etc.
  std::string source;
};

// Header must lead with `utc_timestamp`; `cet_cest_timestamp` and
// `interpolated` columns are ignored with a notice. Timestamps must be
// strictly increasing; readings must be non-negative decimals.
EnergyTable read_energy_table(std::istream& in, std::string_view source);
EnergyTable read_energy_table_file(const std::filesystem::path& path);

// One station observation per line: `station,date,datatype,value,unit`.
struct ClimateRecord {
  std::string station_id;
  Day date = 0;
  std::string datatype;
  double value = 0;
  std::string unit;
  std::size_t line = 0;
};

std::vector<ClimateRecord> read_climate_records(std::istream& in, std::string_view source);
std::vector<ClimateRecord> read_climate_records_file(const std::filesystem::path& path);

// Minimal RFC-4180 field splitting (quotes, doubled quotes; no embedded
// newlines).
std::vector<std::string> split_csv(std::string_view line, std::string_view source,
                                   std::size_t lineno);

}  // namespace energykg

#include "energykg/table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <tuple>

#include "energykg/error.hpp"

namespace energykg {

namespace {

[[noreturn]] void locate_fail(std::string_view source, std::size_t lineno,
                              const std::string& why) {
  fail(ErrorKind::Data, std::string(source) + ":" + std::to_string(lineno) + ": " + why);
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

void strip_bom(std::string& line) {
  if (line.size() >= 3 && line[0] == '\xEF' && line[1] == '\xBB' && line[2] == '\xBF')
    line.erase(0, 3);
}

double parse_reading(std::string_view text, std::string_view source, std::size_t lineno,
                     const std::string& column) {
  double v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v))
    locate_fail(source, lineno, "column " + column + ": not a decimal: '" + std::string(text) + "'");
  return v;
}

}  // namespace

std::vector<std::string> split_csv(std::string_view line, std::string_view source,
                                   std::size_t lineno) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          i += 2;
          continue;
        }
        quoted = false;
        ++i;
        continue;
      }
      current.push_back(c);
      ++i;
      continue;
    }
    if (c == '"' && current.empty()) {
      quoted = true;
      ++i;
      continue;
    }
    if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
      ++i;
      continue;
    }
    current.push_back(c);
    ++i;
  }
  if (quoted) locate_fail(source, lineno, "unterminated quoted field");
  fields.push_back(std::move(current));
  return fields;
}

EnergyTable read_energy_table(std::istream& in, std::string_view source) {
  EnergyTable table;
  table.source = std::string(source);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::Data, std::string(source) + ": empty file");
  strip_bom(line);
  line = strip_cr(std::move(line));
  std::size_t lineno = 1;
  const auto header = split_csv(line, source, lineno);
  if (header.empty() || header[0] != "utc_timestamp")
    locate_fail(source, lineno, "first column must be 'utc_timestamp'");

  // column index in file -> slot in readings; npos-like -1 means ignored
  std::vector<int> slot(header.size(), -1);
  for (std::size_t c = 1; c < header.size(); ++c) {
    const std::string& name = header[c];
    if (name == "cet_cest_timestamp" || name == "interpolated") {
      table.notices.push_back("ignoring column '" + name + "'");
      continue;
    }
    if (name.empty()) locate_fail(source, lineno, "empty column name in header");
    for (const auto& existing : table.headings) {
      if (existing == name) locate_fail(source, lineno, "duplicate column '" + name + "'");
    }
    slot[c] = int(table.headings.size());
    table.headings.push_back(name);
  }

  std::optional<Instant> previous;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(std::move(line));
    if (line.empty()) continue;
    const auto fields = split_csv(line, source, lineno);
    if (fields.size() != header.size())
      locate_fail(source, lineno,
                  "expected " + std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    EnergyRow row;
    row.line = lineno;
    try {
      row.timestamp = parse_instant(fields[0]);
    } catch (const Error& e) {
      locate_fail(source, lineno, e.what());
    }
    if (previous && row.timestamp <= *previous)
      locate_fail(source, lineno, "timestamps must be strictly increasing");
    previous = row.timestamp;
    row.readings.assign(table.headings.size(), std::nullopt);
    for (std::size_t c = 1; c < header.size(); ++c) {
      if (slot[c] < 0 || fields[c].empty()) continue;
      const double v = parse_reading(fields[c], source, lineno, header[c]);
      if (v < 0)
        locate_fail(source, lineno, "column " + header[c] + ": negative reading " + fields[c]);
      row.readings[std::size_t(slot[c])] = v;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

EnergyTable read_energy_table_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Data, "cannot open energy table: " + path.string());
  return read_energy_table(in, path.string());
}

std::vector<ClimateRecord> read_climate_records(std::istream& in, std::string_view source) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::Data, std::string(source) + ": empty file");
  strip_bom(line);
  line = strip_cr(std::move(line));
  std::size_t lineno = 1;
  const auto header = split_csv(line, source, lineno);
  const std::vector<std::string> expected{"station", "date", "datatype", "value", "unit"};
  if (header != expected)
    locate_fail(source, lineno, "header must be 'station,date,datatype,value,unit'");

  std::vector<ClimateRecord> records;
  std::map<std::tuple<std::string, Day, std::string>, double> seen;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(std::move(line));
    if (line.empty()) continue;
    const auto fields = split_csv(line, source, lineno);
    if (fields.size() != 5) locate_fail(source, lineno, "expected 5 fields");
    ClimateRecord rec;
    rec.line = lineno;
    rec.station_id = fields[0];
    if (rec.station_id.empty()) locate_fail(source, lineno, "empty station id");
    try {
      rec.date = parse_day(fields[1]);
    } catch (const Error& e) {
      locate_fail(source, lineno, e.what());
    }
    rec.datatype = fields[2];
    if (rec.datatype.empty()) locate_fail(source, lineno, "empty datatype code");
    rec.value = parse_reading(fields[3], source, lineno, "value");
    rec.unit = fields[4];
    const auto key = std::make_tuple(rec.station_id, rec.date, rec.datatype);
    const auto it = seen.find(key);
    if (it != seen.end()) {
      if (it->second != rec.value)
        locate_fail(source, lineno,
                    "conflicting duplicate for (" + rec.station_id + ", " + fields[1] + ", " +
                        rec.datatype + ")");
      continue;  // exact duplicate; keep one record per key
    }
    seen.emplace(key, rec.value);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<ClimateRecord> read_climate_records_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Data, "cannot open climate table: " + path.string());
  return read_climate_records(in, path.string());
}

}  // namespace energykg

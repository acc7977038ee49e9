#include "energykg/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>

#include "energykg/error.hpp"

namespace energykg {

DatatypeRegistry DatatypeRegistry::defaults() {
  // GHCN-Daily conventions: temperatures in tenths of degC, precipitation in
  // tenths of mm, snow depth in mm.
  DatatypeRegistry reg;
  reg.set("TMAX", 0.1, "degC");
  reg.set("TMIN", 0.1, "degC");
  reg.set("TAVG", 0.1, "degC");
  reg.set("PRCP", 0.1, "mm");
  reg.set("SNWD", 1.0, "mm");
  return reg;
}

DatatypeRegistry DatatypeRegistry::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "cannot open datatype registry: " + path.string());
  DatatypeRegistry reg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos)
      fail(ErrorKind::Config,
           path.string() + ":" + std::to_string(lineno) + ": expected code<TAB>scale<TAB>unit");
    const std::string code = line.substr(0, tab1);
    const std::string scale_text = line.substr(tab1 + 1, tab2 - tab1 - 1);
    const std::string unit = line.substr(tab2 + 1);
    double scale = 0;
    const auto res =
        std::from_chars(scale_text.data(), scale_text.data() + scale_text.size(), scale);
    if (res.ec != std::errc() || res.ptr != scale_text.data() + scale_text.size() ||
        !std::isfinite(scale) || scale <= 0)
      fail(ErrorKind::Config,
           path.string() + ":" + std::to_string(lineno) + ": bad scale '" + scale_text + "'");
    reg.set(code, scale, unit);
  }
  return reg;
}

void DatatypeRegistry::set(const std::string& code, double scale, const std::string& unit) {
  if (code.empty()) fail(ErrorKind::Config, "empty datatype code");
  entries_[code] = Entry{scale, unit};
}

std::optional<DatatypeRegistry::Entry> DatatypeRegistry::find(std::string_view code) const {
  const auto it = entries_.find(std::string(code));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

StationMap read_station_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "cannot open station map: " + path.string());
  StationMap map;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      fail(ErrorKind::Config,
           path.string() + ":" + std::to_string(lineno) + ": expected locality<TAB>station_iri");
    const std::string locality = line.substr(0, tab);
    const std::string iri = line.substr(tab + 1);
    if (!Iri::valid(iri))
      fail(ErrorKind::Config,
           path.string() + ":" + std::to_string(lineno) + ": invalid station IRI '" + iri + "'");
    if (!map.emplace(locality, Iri(iri)).second)
      fail(ErrorKind::Config,
           path.string() + ":" + std::to_string(lineno) + ": duplicate locality '" + locality + "'");
  }
  return map;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "cannot open config: " + path.string());
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  const auto resolve = [&](const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : dir / fp;
  };

  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      bool blank = true;
      for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
      if (blank) continue;
      fail(ErrorKind::Config,
           path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const auto trim = [](std::string s) {
      const auto first = s.find_first_not_of(" \t");
      const auto last = s.find_last_not_of(" \t");
      if (first == std::string::npos) return std::string();
      return s.substr(first, last - first + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      fail(ErrorKind::Config, path.string() + ":" + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, value).second)
      fail(ErrorKind::Config,
           path.string() + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }

  PipelineConfig cfg;
  if (const auto it = kv.find("base_iri"); it != kv.end()) {
    if (!Iri::valid(it->second))
      fail(ErrorKind::Config, path.string() + ": base_iri is not a valid IRI");
    cfg.base_iri = it->second;
  }
  if (const auto it = kv.find("network_label"); it != kv.end()) cfg.network_label = it->second;
  if (const auto it = kv.find("locality_label"); it != kv.end() && !it->second.empty())
    cfg.locality_label = it->second;

  if (const auto it = kv.find("prefix_map"); it != kv.end())
    cfg.registry = TermRegistry::from_file(resolve(it->second), cfg.base_iri);
  else
    cfg.registry = TermRegistry::defaults(cfg.base_iri);
  if (const auto it = kv.find("role_table"); it != kv.end())
    cfg.roles = RoleTable::from_file(resolve(it->second));
  if (const auto it = kv.find("datatype_registry"); it != kv.end())
    cfg.datatypes = DatatypeRegistry::from_file(resolve(it->second));
  if (const auto it = kv.find("station_map"); it != kv.end())
    cfg.stations = read_station_map(resolve(it->second));

  static const char* known_keys[] = {"base_iri",      "network_label",    "locality_label",
                                     "prefix_map",    "role_table",       "datatype_registry",
                                     "station_map"};
  for (const auto& [key, value] : kv) {
    bool ok = false;
    for (const char* k : known_keys) ok = ok || key == k;
    if (!ok) fail(ErrorKind::Config, path.string() + ": unknown key '" + key + "'");
  }
  return cfg;
}

}  // namespace energykg

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "energykg/heading.hpp"
#include "energykg/iri.hpp"
#include "energykg/vocab.hpp"

namespace energykg {

// Climate datatype codes with the scale that converts source units into the
// working unit (e.g. tenths of a degree -> degC).
class DatatypeRegistry {
public:
  struct Entry {
    double scale = 1.0;
    std::string unit;
  };

  static DatatypeRegistry defaults();
  // One `code<TAB>scale<TAB>unit` per line; '#' comments.
  static DatatypeRegistry from_file(const std::filesystem::path& path);

  void set(const std::string& code, double scale, const std::string& unit);
  std::optional<Entry> find(std::string_view code) const;
  bool known(std::string_view code) const { return find(code).has_value(); }

private:
  std::map<std::string, Entry> entries_;
};

// locality -> station IRI, from `locality<TAB>station_iri` lines.
using StationMap = std::map<std::string, Iri>;
StationMap read_station_map(const std::filesystem::path& path);

// Everything a pipeline run needs, loaded and validated eagerly.
struct PipelineConfig {
  std::string base_iri = std::string(kDefaultBase);
  std::string network_label = "COSSMIC";
  std::optional<std::string> locality_label;

  TermRegistry registry = TermRegistry::defaults();
  RoleTable roles = RoleTable::defaults();
  DatatypeRegistry datatypes = DatatypeRegistry::defaults();
  StationMap stations;

  static PipelineConfig defaults() { return PipelineConfig{}; }

  // `key = value` lines; relative paths resolve against the config file's
  // directory. Referenced files must exist and parse.
  static PipelineConfig load(const std::filesystem::path& path);
};

}  // namespace energykg

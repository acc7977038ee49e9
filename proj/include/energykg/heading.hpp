#pragma once

#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "energykg/iri.hpp"
#include "energykg/vocab.hpp"

namespace energykg {

enum class SiteKind { Residential, Industrial, Public };
enum class PowerRole { Produced, Consumed };

std::string_view site_kind_name(SiteKind k);

// The typed decomposition of one table heading, e.g.
// "DE_KN_industrial1_pv_1" -> {DE, KN, industrial, 1, pv, 1, produced}.
struct SystemDescriptor {
  std::string country;   // 2 uppercase letters
  std::string locality;  // uppercase code, e.g. KN
  SiteKind site_kind = SiteKind::Residential;
  int site_ordinal = 1;
  std::string device_kind;  // lowercase token, may contain underscores
  std::optional<int> device_ordinal;
  PowerRole power_role = PowerRole::Consumed;

  std::string site_segment() const;  // "industrial1"

  bool operator==(const SystemDescriptor&) const = default;
};

// device_kind -> produced|consumed. Entries where one key extends another by
// an underscore-and-digits suffix are rejected so that longest-match parsing
// stays unambiguous.
class RoleTable {
public:
  static RoleTable defaults();
  // One `device_kind<TAB>produced|consumed` per line; '#' comments.
  static RoleTable from_file(const std::filesystem::path& path);

  void set(const std::string& kind, PowerRole role);
  std::optional<PowerRole> role(std::string_view kind) const;
  const std::map<std::string, PowerRole>& entries() const { return entries_; }

private:
  std::map<std::string, PowerRole> entries_;
};

SystemDescriptor parse_heading(std::string_view text, const RoleTable& roles);
std::string canonical_heading(const SystemDescriptor& d);
Iri power_property(const SystemDescriptor& d, const Vocab& vocab);

bool is_grid_import(const SystemDescriptor& d);
bool is_grid_export(const SystemDescriptor& d);

}  // namespace energykg

#include "energykg/heading.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <span>
#include <vector>

#include "energykg/error.hpp"

namespace energykg {

namespace {

[[noreturn]] void parse_fail(std::string_view heading, std::string_view segment,
                             std::string_view why) {
  fail(ErrorKind::Parse, "heading '" + std::string(heading) + "': segment '" +
                             std::string(segment) + "' " + std::string(why));
}

bool all_upper_alpha(std::string_view s) {
  for (char c : s) {
    if (!std::isupper(static_cast<unsigned char>(c))) return false;
  }
  return !s.empty();
}

bool upper_code(std::string_view s) {
  if (s.empty() || !std::isupper(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    if (!std::isupper(static_cast<unsigned char>(c)) &&
        !std::isdigit(static_cast<unsigned char>(c)))
      return false;
  }
  return true;
}

bool all_digits(std::string_view s) {
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return !s.empty();
}

std::optional<int> positive_int(std::string_view s) {
  if (!all_digits(s) || s[0] == '0') return std::nullopt;
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value <= 0) return std::nullopt;
  return value;
}

std::optional<SiteKind> site_kind_from(std::string_view s) {
  if (s == "residential") return SiteKind::Residential;
  if (s == "industrial") return SiteKind::Industrial;
  if (s == "public") return SiteKind::Public;
  return std::nullopt;
}

bool valid_device_kind(std::string_view kind) {
  if (kind.empty()) return false;
  if (!std::islower(static_cast<unsigned char>(kind[0]))) return false;
  for (char c : kind) {
    if (!std::islower(static_cast<unsigned char>(c)) &&
        !std::isdigit(static_cast<unsigned char>(c)) && c != '_')
      return false;
  }
  return kind.back() != '_';
}

std::vector<std::string_view> split_underscore(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find('_', start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string join(std::span<const std::string_view> parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back('_');
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string_view site_kind_name(SiteKind k) {
  switch (k) {
    case SiteKind::Residential:
      return "residential";
    case SiteKind::Industrial:
      return "industrial";
    case SiteKind::Public:
      return "public";
  }
  return "";
}

std::string SystemDescriptor::site_segment() const {
  return std::string(site_kind_name(site_kind)) + std::to_string(site_ordinal);
}

RoleTable RoleTable::defaults() {
  RoleTable t;
  for (const char* kind : {"pv", "pv_facade", "pv_roof", "grid_export", "storage_decharge", "chp"})
    t.set(kind, PowerRole::Produced);
  for (const char* kind :
       {"grid_import", "storage_charge", "dishwasher", "washing_machine", "freezer",
        "refrigerator", "heat_pump", "circulation_pump", "ev", "compressor",
        "cooling_aggregate", "cooling_pumps", "ventilation", "machine", "area_offices",
        "area_room"})
    t.set(kind, PowerRole::Consumed);
  return t;
}

RoleTable RoleTable::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "cannot open role table: " + path.string());
  RoleTable t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      fail(ErrorKind::Config,
           path.string() + ":" + std::to_string(lineno) + ": expected device_kind<TAB>role");
    const std::string kind = line.substr(0, tab);
    const std::string role = line.substr(tab + 1);
    if (role == "produced")
      t.set(kind, PowerRole::Produced);
    else if (role == "consumed")
      t.set(kind, PowerRole::Consumed);
    else
      fail(ErrorKind::Config, path.string() + ":" + std::to_string(lineno) +
                                  ": role must be 'produced' or 'consumed', got '" + role + "'");
  }
  return t;
}

void RoleTable::set(const std::string& kind, PowerRole role) {
  if (!valid_device_kind(kind))
    fail(ErrorKind::Config, "invalid device kind: '" + kind + "'");
  // Reject pairs like "pv" / "pv_1": with both present, a trailing ordinal
  // segment would be ambiguous.
  for (const auto& [other, r] : entries_) {
    const std::string_view longer = other.size() > kind.size() ? other : kind;
    const std::string_view shorter = other.size() > kind.size() ? kind : other;
    if (longer.size() > shorter.size() + 1 && longer.substr(0, shorter.size()) == shorter &&
        longer[shorter.size()] == '_' && all_digits(longer.substr(shorter.size() + 1))) {
      fail(ErrorKind::Config, "role table entries '" + other + "' and '" + kind +
                                  "' differ only by a trailing ordinal");
    }
  }
  entries_[kind] = role;
}

std::optional<PowerRole> RoleTable::role(std::string_view kind) const {
  const auto it = entries_.find(std::string(kind));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

SystemDescriptor parse_heading(std::string_view text, const RoleTable& roles) {
  const auto segs = split_underscore(text);
  if (segs.size() < 4)
    fail(ErrorKind::Parse,
         "heading '" + std::string(text) + "': expected COUNTRY_LOCALITY_SITE_DEVICE");
  if (segs[0].size() != 2 || !all_upper_alpha(segs[0]))
    parse_fail(text, segs[0], "is not a 2-letter country code");
  if (!upper_code(segs[1])) parse_fail(text, segs[1], "is not an uppercase locality code");

  // Site segment: kind word followed immediately by a positive ordinal.
  const std::string_view site = segs[2];
  std::size_t digits = 0;
  while (digits < site.size() &&
         std::isdigit(static_cast<unsigned char>(site[site.size() - 1 - digits])))
    ++digits;
  if (digits == 0 || digits == site.size()) parse_fail(text, site, "is not a site kind+ordinal");
  const std::string_view kind_word = site.substr(0, site.size() - digits);
  const auto kind = site_kind_from(kind_word);
  if (!kind) parse_fail(text, site, "has unknown site kind");
  const auto ordinal = positive_int(site.substr(site.size() - digits));
  if (!ordinal) parse_fail(text, site, "has a non-positive site ordinal");

  // Device segments: longest match of the whole tail against the role table,
  // else tail-minus-ordinal. The role table forbids entries that differ only
  // by a trailing ordinal, so at most one reading exists.
  const std::span<const std::string_view> tail(segs.data() + 3, segs.size() - 3);
  SystemDescriptor d;
  d.country = std::string(segs[0]);
  d.locality = std::string(segs[1]);
  d.site_kind = *kind;
  d.site_ordinal = *ordinal;

  const std::string whole = join(tail);
  if (const auto role = roles.role(whole)) {
    d.device_kind = whole;
    d.power_role = *role;
    return d;
  }
  if (tail.size() >= 2) {
    if (const auto ord = positive_int(tail.back())) {
      const std::string head = join(tail.first(tail.size() - 1));
      if (const auto role = roles.role(head)) {
        d.device_kind = head;
        d.device_ordinal = *ord;
        d.power_role = *role;
        return d;
      }
    }
  }
  parse_fail(text, whole, "is not a device kind in the role table");
}

std::string canonical_heading(const SystemDescriptor& d) {
  std::string out = d.country;
  out += '_';
  out += d.locality;
  out += '_';
  out += d.site_segment();
  out += '_';
  out += d.device_kind;
  if (d.device_ordinal) {
    out += '_';
    out += std::to_string(*d.device_ordinal);
  }
  return out;
}

Iri power_property(const SystemDescriptor& d, const Vocab& vocab) {
  return d.power_role == PowerRole::Produced ? vocab.seas_producedElectricPower
                                             : vocab.seas_consumedElectricPower;
}

bool is_grid_import(const SystemDescriptor& d) { return d.device_kind == "grid_import"; }
bool is_grid_export(const SystemDescriptor& d) { return d.device_kind == "grid_export"; }

}  // namespace energykg

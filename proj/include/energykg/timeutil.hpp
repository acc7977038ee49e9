#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace energykg {

// Seconds since the Unix epoch, always UTC. Leap seconds are ignored.
using Instant = std::int64_t;

// Calendar days since 1970-01-01 (UTC).
using Day = std::int32_t;

constexpr std::int64_t kSecondsPerDay = 86400;

// Strict `YYYY-MM-DDThh:mm:ssZ`; anything else (offsets, fractions,
// lowercase designators) is a parse error.
Instant parse_instant(std::string_view text);
std::string format_instant(Instant t);

// Strict `YYYY-MM-DD`.
Day parse_day(std::string_view text);
std::string format_day(Day d);

bool is_instant(std::string_view text);

Day day_of(Instant t);
Instant day_start(Day d);
int year_of(Day d);

// `YYYYMMDDThhmmssZ`, used when a timestamp becomes part of an IRI local
// name (no `-` or `:` characters).
std::string compact_instant(Instant t);

}  // namespace energykg

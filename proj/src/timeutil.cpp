#include "energykg/timeutil.hpp"

#include <charconv>
#include <chrono>

#include "energykg/error.hpp"

namespace energykg {

namespace {

int parse_digits(std::string_view text, std::size_t pos, std::size_t count,
                 std::string_view what) {
  if (pos + count > text.size()) fail(ErrorKind::Parse, "truncated " + std::string(what));
  int value = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const char c = text[pos + i];
    if (c < '0' || c > '9')
      fail(ErrorKind::Parse, "bad digit in " + std::string(what) + ": '" + std::string(text) + "'");
    value = value * 10 + (c - '0');
  }
  return value;
}

Day civil_to_day(int y, int m, int d) {
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                                        std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) {
    fail(ErrorKind::Parse, "invalid calendar date " + std::to_string(y) + "-" + std::to_string(m) +
                               "-" + std::to_string(d));
  }
  return Day(std::chrono::sys_days(ymd).time_since_epoch().count());
}

std::chrono::year_month_day day_to_civil(Day d) {
  return std::chrono::year_month_day(std::chrono::sys_days(std::chrono::days(d)));
}

void append2(std::string& out, int v) {
  out.push_back(char('0' + v / 10));
  out.push_back(char('0' + v % 10));
}

void append4(std::string& out, int v) {
  out.push_back(char('0' + (v / 1000) % 10));
  out.push_back(char('0' + (v / 100) % 10));
  out.push_back(char('0' + (v / 10) % 10));
  out.push_back(char('0' + v % 10));
}

}  // namespace

Instant parse_instant(std::string_view text) {
  // YYYY-MM-DDThh:mm:ssZ
  if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
      text[13] != ':' || text[16] != ':' || text[19] != 'Z') {
    fail(ErrorKind::Parse, "timestamp not in YYYY-MM-DDThh:mm:ssZ form: '" + std::string(text) + "'");
  }
  const int y = parse_digits(text, 0, 4, "year");
  const int mo = parse_digits(text, 5, 2, "month");
  const int d = parse_digits(text, 8, 2, "day");
  const int h = parse_digits(text, 11, 2, "hour");
  const int mi = parse_digits(text, 14, 2, "minute");
  const int s = parse_digits(text, 17, 2, "second");
  if (h > 23 || mi > 59 || s > 59)
    fail(ErrorKind::Parse, "time of day out of range: '" + std::string(text) + "'");
  const Day day = civil_to_day(y, mo, d);
  return Instant(day) * kSecondsPerDay + h * 3600 + mi * 60 + s;
}

bool is_instant(std::string_view text) {
  try {
    parse_instant(text);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::string format_instant(Instant t) {
  const Day day = day_of(t);
  const std::int64_t sec = t - Instant(day) * kSecondsPerDay;
  const auto ymd = day_to_civil(day);
  std::string out;
  out.reserve(20);
  append4(out, int(ymd.year()));
  out.push_back('-');
  append2(out, int(unsigned(ymd.month())));
  out.push_back('-');
  append2(out, int(unsigned(ymd.day())));
  out.push_back('T');
  append2(out, int(sec / 3600));
  out.push_back(':');
  append2(out, int((sec / 60) % 60));
  out.push_back(':');
  append2(out, int(sec % 60));
  out.push_back('Z');
  return out;
}

Day parse_day(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-')
    fail(ErrorKind::Parse, "date not in YYYY-MM-DD form: '" + std::string(text) + "'");
  const int y = parse_digits(text, 0, 4, "year");
  const int mo = parse_digits(text, 5, 2, "month");
  const int d = parse_digits(text, 8, 2, "day");
  return civil_to_day(y, mo, d);
}

std::string format_day(Day d) {
  const auto ymd = day_to_civil(d);
  std::string out;
  out.reserve(10);
  append4(out, int(ymd.year()));
  out.push_back('-');
  append2(out, int(unsigned(ymd.month())));
  out.push_back('-');
  append2(out, int(unsigned(ymd.day())));
  return out;
}

Day day_of(Instant t) {
  std::int64_t d = t / kSecondsPerDay;
  if (t < 0 && t % kSecondsPerDay != 0) --d;
  return Day(d);
}

Instant day_start(Day d) { return Instant(d) * kSecondsPerDay; }

int year_of(Day d) { return int(day_to_civil(d).year()); }

std::string compact_instant(Instant t) {
  std::string s = format_instant(t);
  std::string out;
  out.reserve(16);
  for (char c : s) {
    if (c != '-' && c != ':') out.push_back(c);
  }
  return out;
}

}  // namespace energykg

#include "svip/timestamp.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

#include "svip/error.hpp"

namespace svip {

namespace {

int parse_int(std::string_view s, std::size_t pos, std::size_t len,
              std::string_view what, std::string_view full) {
  if (pos + len > s.size()) {
    throw ParseError("timestamp \"" + std::string(full) + "\": truncated " +
                     std::string(what));
  }
  int value = 0;
  const char* first = s.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + len, value);
  if (ec != std::errc() || ptr != first + len) {
    throw ParseError("timestamp \"" + std::string(full) + "\": bad " +
                     std::string(what));
  }
  return value;
}

std::chrono::sys_days to_sys_days(const CivilDate& d) {
  using namespace std::chrono;
  year_month_day ymd{year{d.year}, month{static_cast<unsigned>(d.month)},
                     day{static_cast<unsigned>(d.day)}};
  if (!ymd.ok()) {
    throw ValidationError("invalid calendar date " + format_date(d));
  }
  return sys_days{ymd};
}

}  // namespace

UtcMillis parse_rfc3339(std::string_view text) {
  // YYYY-MM-DD[T ]HH:MM:SS[.frac][Z|+HH:MM|-HH:MM]
  const std::string_view full = text;
  if (text.size() < 19 || text[4] != '-' || text[7] != '-' ||
      (text[10] != 'T' && text[10] != 't' && text[10] != ' ') ||
      text[13] != ':' || text[16] != ':') {
    throw ParseError("timestamp \"" + std::string(full) +
                     "\": expected RFC 3339 format");
  }
  CivilDate d;
  d.year = parse_int(text, 0, 4, "year", full);
  d.month = parse_int(text, 5, 2, "month", full);
  d.day = parse_int(text, 8, 2, "day", full);
  const int hour = parse_int(text, 11, 2, "hour", full);
  const int minute = parse_int(text, 14, 2, "minute", full);
  const int second = parse_int(text, 17, 2, "second", full);
  if (hour > 23 || minute > 59 || second > 60) {
    throw ParseError("timestamp \"" + std::string(full) +
                     "\": time of day out of range");
  }

  std::size_t pos = 19;
  std::int64_t millis = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::size_t digits = 0;
    std::int64_t frac = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (digits < 3) frac = frac * 10 + (text[pos] - '0');
      ++digits;
      ++pos;
    }
    if (digits == 0) {
      throw ParseError("timestamp \"" + std::string(full) +
                       "\": empty fractional seconds");
    }
    while (digits < 3) {
      frac *= 10;
      ++digits;
    }
    millis = frac;
  }

  std::int64_t offset_min = 0;
  if (pos == text.size()) {
    // No designator: interpret as UTC.
  } else if (text[pos] == 'Z' || text[pos] == 'z') {
    ++pos;
  } else if (text[pos] == '+' || text[pos] == '-') {
    const int sign = text[pos] == '+' ? 1 : -1;
    ++pos;
    const int oh = parse_int(text, pos, 2, "offset hour", full);
    if (pos + 2 >= text.size() || text[pos + 2] != ':') {
      throw ParseError("timestamp \"" + std::string(full) +
                       "\": bad UTC offset");
    }
    const int om = parse_int(text, pos + 3, 2, "offset minute", full);
    offset_min = sign * (oh * 60 + om);
    pos += 5;
  }
  if (pos != text.size()) {
    throw ParseError("timestamp \"" + std::string(full) +
                     "\": trailing characters");
  }

  std::int64_t days;
  try {
    days = days_from_epoch(d);
  } catch (const ValidationError& e) {
    throw ParseError("timestamp \"" + std::string(full) + "\": " + e.what());
  }
  const std::int64_t sec =
      days * 86400 + hour * 3600 + minute * 60 + second - offset_min * 60;
  return sec * 1000 + millis;
}

std::string format_rfc3339(UtcMillis t) {
  std::int64_t ms = t % 1000;
  std::int64_t sec = t / 1000;
  if (ms < 0) {
    ms += 1000;
    sec -= 1;
  }
  std::int64_t days = sec / 86400;
  std::int64_t sod = sec % 86400;
  if (sod < 0) {
    sod += 86400;
    days -= 1;
  }
  using namespace std::chrono;
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ",
                int(ymd.year()), unsigned(ymd.month()), unsigned(ymd.day()),
                int(sod / 3600), int((sod / 60) % 60), int(sod % 60), int(ms));
  return buf;
}

CivilDate parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw ParseError("date \"" + std::string(text) + "\": expected YYYY-MM-DD");
  }
  CivilDate d;
  d.year = parse_int(text, 0, 4, "year", text);
  d.month = parse_int(text, 5, 2, "month", text);
  d.day = parse_int(text, 8, 2, "day", text);
  try {
    days_from_epoch(d);
  } catch (const ValidationError& e) {
    throw ParseError(std::string("date: ") + e.what());
  }
  return d;
}

std::string format_date(const CivilDate& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

CivilDate civil_from_millis(UtcMillis t) {
  std::int64_t sec = t / 1000;
  if (t % 1000 < 0) sec -= 1;
  std::int64_t days = sec / 86400;
  if (sec % 86400 < 0) days -= 1;
  using namespace std::chrono;
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  return CivilDate{int(ymd.year()), int(unsigned(ymd.month())),
                   int(unsigned(ymd.day()))};
}

std::int64_t days_from_epoch(const CivilDate& d) {
  return to_sys_days(d).time_since_epoch().count();
}

bool is_weekend(const CivilDate& d) {
  const std::chrono::weekday wd{to_sys_days(d)};
  return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

}  // namespace svip

#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace svip {

/// Milliseconds since the Unix epoch, UTC.
using UtcMillis = std::int64_t;

/// A calendar date in the proleptic Gregorian calendar (UTC).
struct CivilDate {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31

  auto operator<=>(const CivilDate&) const = default;
};

/// Parses an RFC 3339 timestamp such as `2021-04-15T17:03:12.250Z` or
/// `2021-04-15 17:03:12+07:00`. Fractional seconds beyond milliseconds are
/// truncated. Throws ParseError on malformed input.
UtcMillis parse_rfc3339(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM:SS.mmmZ`.
std::string format_rfc3339(UtcMillis t);

/// Parses `YYYY-MM-DD`. Throws ParseError.
CivilDate parse_date(std::string_view text);

std::string format_date(const CivilDate& d);

/// UTC calendar date containing the instant.
CivilDate civil_from_millis(UtcMillis t);

/// Days since 1970-01-01. Throws ValidationError on an invalid date.
std::int64_t days_from_epoch(const CivilDate& d);

/// Saturday or Sunday.
bool is_weekend(const CivilDate& d);

}  // namespace svip

#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace meritorder {

using Timestamp = std::chrono::sys_seconds;

/// A parsed ISO-8601 instant together with the civil-time offset it was
/// written in (0 for "Z" or a bare timestamp).
struct CivilTime {
  Timestamp utc;
  int utc_offset_minutes = 0;
};

/// Accepts "YYYY-MM-DD[T| ]HH:MM[:SS][Z|+HH:MM|-HH:MM|+HHMM]".
/// Throws DataError on malformed input.
CivilTime parse_iso8601(std::string_view text);

/// "YYYY-MM-DDTHH:MM:SSZ" for offset 0, otherwise the local time with a
/// "+HH:MM" suffix.
std::string format_iso8601(Timestamp utc, int utc_offset_minutes = 0);

Timestamp make_utc(int year, unsigned month, unsigned day, int hour = 0, int minute = 0);
int year_of(Timestamp t, int utc_offset_minutes = 0);
bool is_leap_year(int year);
int hours_in_year(int year);

}  // namespace meritorder

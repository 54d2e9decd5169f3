#include "meritorder/timeutil.hpp"

#include <charconv>
#include <cstdio>

#include "meritorder/common.hpp"

namespace meritorder {
namespace {

using namespace std::chrono;

int read_int(std::string_view text, std::size_t pos, std::size_t len, std::string_view whole) {
  if (pos + len > text.size()) throw DataError("malformed timestamp '" + std::string(whole) + "'");
  int value = 0;
  const auto* first = text.data() + pos;
  const auto [ptr, ec] = std::from_chars(first, first + len, value);
  if (ec != std::errc{} || ptr != first + len) {
    throw DataError("malformed timestamp '" + std::string(whole) + "'");
  }
  return value;
}

void expect(std::string_view text, std::size_t pos, char c, std::string_view whole) {
  if (pos >= text.size() || text[pos] != c) {
    throw DataError("malformed timestamp '" + std::string(whole) + "'");
  }
}

}  // namespace

CivilTime parse_iso8601(std::string_view text) {
  const std::string_view whole = text;
  while (!text.empty() && (text.front() == ' ' || text.front() == '"')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '"' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  const int y = read_int(text, 0, 4, whole);
  expect(text, 4, '-', whole);
  const int mo = read_int(text, 5, 2, whole);
  expect(text, 7, '-', whole);
  const int d = read_int(text, 8, 2, whole);
  if (text.size() < 16 || (text[10] != 'T' && text[10] != ' ')) {
    throw DataError("malformed timestamp '" + std::string(whole) + "'");
  }
  const int h = read_int(text, 11, 2, whole);
  expect(text, 13, ':', whole);
  const int mi = read_int(text, 14, 2, whole);
  int s = 0;
  std::size_t pos = 16;
  if (pos < text.size() && text[pos] == ':') {
    s = read_int(text, pos + 1, 2, whole);
    pos += 3;
  }
  int offset = 0;
  if (pos < text.size()) {
    const char tz = text[pos];
    if (tz == 'Z' && pos + 1 == text.size()) {
      offset = 0;
    } else if (tz == '+' || tz == '-') {
      const int oh = read_int(text, pos + 1, 2, whole);
      std::size_t mpos = pos + 3;
      if (mpos < text.size() && text[mpos] == ':') ++mpos;
      const int om = read_int(text, mpos, 2, whole);
      if (mpos + 2 != text.size()) throw DataError("malformed timestamp '" + std::string(whole) + "'");
      offset = (tz == '+' ? 1 : -1) * (oh * 60 + om);
    } else {
      throw DataError("malformed timestamp '" + std::string(whole) + "'");
    }
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 59 || h < 0 || mi < 0 || s < 0) {
    throw DataError("invalid calendar time '" + std::string(whole) + "'");
  }
  const auto local = sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
  return {Timestamp{local - minutes{offset}}, offset};
}

std::string format_iso8601(Timestamp utc, int utc_offset_minutes) {
  const auto local = utc + minutes{utc_offset_minutes};
  const auto day_point = floor<days>(local);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{local - day_point};
  char buf[40];
  if (utc_offset_minutes == 0) {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()), int(hms.hours().count()),
                  int(hms.minutes().count()), int(hms.seconds().count()));
  } else {
    const int abs_off = utc_offset_minutes < 0 ? -utc_offset_minutes : utc_offset_minutes;
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d%c%02d:%02d", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()), int(hms.hours().count()),
                  int(hms.minutes().count()), int(hms.seconds().count()),
                  utc_offset_minutes < 0 ? '-' : '+', abs_off / 60, abs_off % 60);
  }
  return buf;
}

Timestamp make_utc(int y, unsigned m, unsigned d, int h, int mi) {
  return Timestamp{sys_days{year{y} / month{m} / day{d}} + hours{h} + minutes{mi}};
}

int year_of(Timestamp t, int utc_offset_minutes) {
  const year_month_day ymd{floor<days>(t + minutes{utc_offset_minutes})};
  return int(ymd.year());
}

bool is_leap_year(int y) { return year{y}.is_leap(); }

int hours_in_year(int y) { return is_leap_year(y) ? 8784 : 8760; }

}  // namespace meritorder

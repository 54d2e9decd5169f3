#include "meritorder/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "meritorder/common.hpp"
#include "meritorder/csv.hpp"
#include "meritorder/numeric.hpp"

namespace meritorder {
namespace {

using std::chrono::hours;
using std::chrono::minutes;
using std::chrono::seconds;

constexpr long long kQuarter = 900;
constexpr long long kHour = 3600;

long long epoch_seconds(Timestamp t) { return t.time_since_epoch().count(); }

void warn(std::vector<std::string>* warnings, std::string message) {
  if (warnings) warnings->push_back(std::move(message));
}

}  // namespace

double RawSeries::total() const {
  CompensatedSum acc;
  for (const auto& s : samples) acc.add(s.value);
  return acc.value();
}

void validate(const RawSeries& series) {
  if (series.resolution_minutes != 15 && series.resolution_minutes != 60) {
    throw DataError(series.name + ": resolution must be 15 or 60 minutes");
  }
  for (std::size_t i = 1; i < series.samples.size(); ++i) {
    if (!(series.samples[i].time > series.samples[i - 1].time)) {
      throw DataError(series.name + ": non-monotone timestamps at " +
                      format_iso8601(series.samples[i].time, series.samples[i].utc_offset_minutes));
    }
  }
}

RawSeries series_from_table(const csv::Table& table, const SeriesSchema& schema,
                            const std::string& source) {
  if (schema.resolution_minutes != 15 && schema.resolution_minutes != 60) {
    throw ConfigError("resolution must be 15 or 60 minutes");
  }
  const auto ts_col = table.require_column(schema.timestamp_column, source);
  const auto val_col = table.require_column(schema.value_column, source);

  RawSeries series;
  series.name = schema.name.empty() ? schema.value_column : schema.name;
  series.resolution_minutes = schema.resolution_minutes;
  series.samples.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    CivilTime when;
    try {
      when = parse_iso8601(row.fields[ts_col]);
    } catch (const DataError& e) {
      throw DataError(source + ":" + std::to_string(row.line) + ": " + e.what());
    }
    const double value = csv::to_double(row.fields[val_col], source, row.line);
    if (!series.samples.empty() && !(when.utc > series.samples.back().time)) {
      throw DataError(source + ":" + std::to_string(row.line) + ": non-monotone timestamps");
    }
    series.samples.push_back({when.utc, when.utc_offset_minutes, value});
  }
  if (series.samples.empty()) throw DataError(source + ": no samples");
  return series;
}

RawSeries parse_series_text(const std::string& text, const SeriesSchema& schema,
                            const std::string& source) {
  if (schema.resolution_minutes != 15 && schema.resolution_minutes != 60) {
    throw ConfigError("resolution must be 15 or 60 minutes");
  }
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw DataError(source + ": no samples");
  }
  return series_from_table(csv::parse(text, source), schema, source);
}

RawSeries parse_series(const std::filesystem::path& path, const SeriesSchema& schema) {
  return parse_series_text(csv::read_text(path), schema, path.string());
}

RawSeries downsample_quarter_hourly(const RawSeries& series, std::vector<std::string>* warnings) {
  if (series.resolution_minutes != 15) throw DataError(series.name + ": expected 15-minute data");
  validate(series);
  if (series.samples.empty()) throw DataError(series.name + ": no samples");

  // Complete quarter-hour grid, short gaps filled.
  std::vector<Sample> grid;
  grid.reserve(series.samples.size());
  for (std::size_t i = 0; i < series.samples.size(); ++i) {
    const auto& s = series.samples[i];
    if (epoch_seconds(s.time) % kQuarter != 0) {
      throw DataError(series.name + ": timestamp " + format_iso8601(s.time, s.utc_offset_minutes) +
                      " is not quarter-hour aligned");
    }
    if (i > 0) {
      const auto& prev = series.samples[i - 1];
      const long long missing = (epoch_seconds(s.time) - epoch_seconds(prev.time)) / kQuarter - 1;
      if (missing >= 4) {
        throw DataError(series.name + ": gap of " + std::to_string(missing) +
                        " quarter-hours after " + format_iso8601(prev.time, prev.utc_offset_minutes));
      }
      if (missing > 0) {
        for (long long j = 1; j <= missing; ++j) {
          const double frac = static_cast<double>(j) / static_cast<double>(missing + 1);
          grid.push_back({prev.time + seconds{j * kQuarter}, prev.utc_offset_minutes,
                          prev.value + (s.value - prev.value) * frac});
        }
        warn(warnings, series.name + ": interpolated " + std::to_string(missing) +
                           " missing quarter-hour(s) after " +
                           format_iso8601(prev.time, prev.utc_offset_minutes));
      }
    }
    grid.push_back(s);
  }

  std::size_t begin = 0;
  while (begin < grid.size() && epoch_seconds(grid[begin].time) % kHour != 0) ++begin;
  if (begin > 0) {
    warn(warnings, series.name + ": dropped " + std::to_string(begin) +
                       " leading quarter-hour(s) of a partial hour");
  }
  const std::size_t usable = grid.size() - begin;
  const std::size_t trailing = usable % 4;
  if (trailing > 0) {
    warn(warnings, series.name + ": dropped " + std::to_string(trailing) +
                       " trailing quarter-hour(s) of a partial hour");
  }
  const std::size_t n_hours = usable / 4;
  if (n_hours == 0) throw DataError(series.name + ": no complete hour");

  RawSeries out;
  out.name = series.name;
  out.resolution_minutes = 60;
  out.samples.reserve(n_hours);
  for (std::size_t h = 0; h < n_hours; ++h) {
    const auto* q = &grid[begin + 4 * h];
    out.samples.push_back(
        {q[0].time, q[0].utc_offset_minutes, q[0].value + q[1].value + q[2].value + q[3].value});
  }
  return out;
}

RawSeries rescale_to_annual_total(const RawSeries& series, double official_total) {
  if (!std::isfinite(official_total) || !(official_total > 0.0)) {
    throw ConfigError("official total must be positive");
  }
  const double current = series.total();
  if (!(current > 0.0)) throw DataError(series.name + ": cannot rescale a series with zero sum");
  const double factor = official_total / current;
  RawSeries out = series;
  for (auto& s : out.samples) s.value *= factor;
  return out;
}

RawSeries normalize_dst(const RawSeries& series, std::vector<std::string>* warnings) {
  if (series.resolution_minutes != 60) throw DataError(series.name + ": expected hourly data");
  validate(series);
  if (series.samples.empty()) throw DataError(series.name + ": no samples");

  const auto& first = series.samples.front();
  const int y = year_of(first.time, first.utc_offset_minutes);
  const long long jan1 = epoch_seconds(make_utc(y, 1, 1));
  const int n = hours_in_year(y);
  int standard_offset = first.utc_offset_minutes;

  std::vector<double> sums(n, 0.0);
  std::vector<int> counts(n, 0);
  for (const auto& s : series.samples) {
    standard_offset = std::min(standard_offset, s.utc_offset_minutes);
    const long long wall = epoch_seconds(s.time) + 60LL * s.utc_offset_minutes;
    if ((wall - jan1) % kHour != 0) {
      throw DataError(series.name + ": " + format_iso8601(s.time, s.utc_offset_minutes) +
                      " is not on a wall-clock hour");
    }
    const long long idx = (wall - jan1) / kHour;
    if (idx < 0 || idx >= n) {
      throw DataError(series.name + ": " + format_iso8601(s.time, s.utc_offset_minutes) +
                      " lies outside year " + std::to_string(y));
    }
    sums[idx] += s.value;
    ++counts[idx];
  }

  int anomalies = 0;
  for (int i = 0; i < n; ++i) {
    if (counts[i] > 2) {
      throw DataError(series.name + ": wall-clock hour " + std::to_string(i) + " occurs " +
                      std::to_string(counts[i]) + " times");
    }
    if (counts[i] != 1) ++anomalies;
  }
  if (anomalies > 2) {
    throw DataError(series.name + ": " + std::to_string(anomalies) +
                    " anomalous hours in " + std::to_string(y) + " (more than 2)");
  }

  std::vector<double> values(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (counts[i] == 2) {
      values[i] = 0.5 * sums[i];
      warn(warnings, series.name + ": averaged doubled wall-clock hour " + std::to_string(i));
    } else if (counts[i] == 1) {
      values[i] = sums[i];
    }
  }
  for (int i = 0; i < n; ++i) {
    if (counts[i] != 0) continue;
    int a = i - 1;
    int b = i + 1;
    while (b < n && counts[b] == 0) ++b;
    if (a < 0 || b >= n) {
      throw DataError(series.name + ": missing hour at the edge of year " + std::to_string(y));
    }
    const double frac = static_cast<double>(i - a) / static_cast<double>(b - a);
    values[i] = values[a] + (values[b] - values[a]) * frac;
    warn(warnings, series.name + ": interpolated missing wall-clock hour " + std::to_string(i));
  }

  RawSeries out;
  out.name = series.name;
  out.resolution_minutes = 60;
  out.samples.resize(n);
  for (int i = 0; i < n; ++i) {
    const long long utc = jan1 + static_cast<long long>(i) * kHour - 60LL * standard_offset;
    out.samples[i] = {Timestamp{seconds{utc}}, standard_offset, values[i]};
  }
  return out;
}

void validate(const HourlyMarketRecord& record, const PriceBounds& bounds) {
  const auto where = format_iso8601(record.hour_start);
  if (record.hour_start.time_since_epoch().count() % kHour != 0) {
    throw DataError(where + ": hour start not hour-aligned");
  }
  for (double v : {record.load_mwh, record.wind_mwh, record.pv_mwh, record.cleared_volume_mwh}) {
    if (!std::isfinite(v) || v < 0.0) throw DataError(where + ": energies must be >= 0");
  }
  if (!std::isfinite(record.realized_price_eur) || !bounds.contains(record.realized_price_eur)) {
    throw DataError(where + ": realized price outside exchange bounds");
  }
  if (record.demand.side() != Side::demand || record.supply.side() != Side::supply) {
    throw DataError(where + ": curve sides mismatched");
  }
  if (record.wind_mwh + record.pv_mwh > record.supply.total_volume()) {
    throw DataError(where + ": wind + pv exceed supply curve volume");
  }
}

}  // namespace meritorder

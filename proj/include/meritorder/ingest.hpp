#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "meritorder/csv.hpp"
#include "meritorder/curves.hpp"
#include "meritorder/timeutil.hpp"

namespace meritorder {

struct Sample {
  Timestamp time;              // UTC instant at interval start
  int utc_offset_minutes = 0;  // civil-time annotation from the source
  double value = 0.0;          // MWh per interval, or EUR/MWh for prices
};

/// A validated input time series. Timestamps are strictly increasing and
/// the resolution is 15 or 60 minutes.
struct RawSeries {
  std::string name;
  int resolution_minutes = 60;
  std::vector<Sample> samples;

  double total() const;
};

void validate(const RawSeries& series);

/// Column mapping for parse_series. Columns are matched by header name.
struct SeriesSchema {
  std::string timestamp_column = "timestamp";
  std::string value_column = "value";
  std::string name;  // defaults to value_column
  int resolution_minutes = 60;
};

/// Reads a comma-separated file with a header row. Errors name the line.
RawSeries parse_series(const std::filesystem::path& path, const SeriesSchema& schema);

/// Extracts one series from an already parsed table.
RawSeries series_from_table(const csv::Table& table, const SeriesSchema& schema,
                            const std::string& source);

/// Same as parse_series over in-memory CSV text.
RawSeries parse_series_text(const std::string& text, const SeriesSchema& schema,
                            const std::string& source = "<memory>");

/// Sums quarter-hour energies into hourly energies. Gaps of up to three
/// consecutive quarter-hours are filled by linear interpolation between the
/// neighbouring samples; longer gaps throw DataError. Incomplete hours at the
/// start or end are dropped and reported through `warnings`.
RawSeries downsample_quarter_hourly(const RawSeries& series,
                                    std::vector<std::string>* warnings = nullptr);

/// Uniformly rescales the series so that it sums to `official_total`.
RawSeries rescale_to_annual_total(const RawSeries& series, double official_total);

/// Maps an hourly civil-time series onto the DST-free wall-clock grid of its
/// year: the missing spring hour is linearly interpolated, the doubled
/// autumn hour is averaged. The result holds exactly 8760 (8784) hours,
/// labelled with the standard-time offset. More than two anomalous hours in
/// a year is a DataError.
RawSeries normalize_dst(const RawSeries& series, std::vector<std::string>* warnings = nullptr);

/// One delivery hour: feed-ins, exchange outcome and the hour's curves.
struct HourlyMarketRecord {
  Timestamp hour_start;              // UTC, hour-aligned
  double load_mwh = 0.0;
  double wind_mwh = 0.0;
  double pv_mwh = 0.0;
  double cleared_volume_mwh = 0.0;
  double realized_price_eur = 0.0;
  AuctionCurve demand;
  AuctionCurve supply;
};

/// Checks the record invariants (non-negative energies, price within bounds,
/// wind + pv not exceeding the supply curve's volume, curve sides).
void validate(const HourlyMarketRecord& record, const PriceBounds& bounds = {});

}  // namespace meritorder

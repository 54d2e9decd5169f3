#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "meritorder/clearing.hpp"
#include "meritorder/ingest.hpp"
#include "meritorder/timeutil.hpp"

namespace meritorder {

/// Σ(ratio·weight) / Σ(weight). Throws DataError on length mismatch,
/// negative weights or zero total weight.
double volume_weighted_mean(std::span<const double> ratios, std::span<const double> weights);

/// Hourly ratios numerator/denominator. Hours with a non-positive
/// denominator are left out and their indices listed.
struct ShareSeries {
  std::string numerator_label;
  std::string denominator_label;
  std::vector<double> ratios;
  std::vector<double> weights;  // denominator volumes of the kept hours
  std::vector<std::size_t> excluded_hours;
  bool exceeds_one = false;     // some ratio > 1
};

ShareSeries share_series(std::span<const double> numerator, std::span<const double> denominator,
                         std::string numerator_label = "numerator",
                         std::string denominator_label = "denominator");

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

struct Histogram {
  double bin_width = 0.05;
  std::vector<HistogramBin> bins;  // contiguous from 0 up to the highest occupied bin
  std::vector<std::size_t> excluded_hours;

  std::size_t total_count() const;
};

inline constexpr double kDefaultBinWidth = 0.05;

/// Bins hourly ratios into [k·w, (k+1)·w). Zero-denominator hours are
/// excluded and reported through `warnings`.
Histogram share_histogram(std::span<const double> numerator, std::span<const double> denominator,
                          double bin_width = kDefaultBinWidth,
                          std::vector<std::string>* warnings = nullptr);

/// Histogram of already computed ratios.
Histogram ratio_histogram(std::span<const double> ratios, double bin_width = kDefaultBinWidth);

struct PriceStats {
  double mean = 0.0;
  double std = 0.0;  // population (divisor N)
  double min = 0.0;
  double max = 0.0;
  std::size_t negative_hours = 0;  // strictly negative prices
  std::size_t hours = 0;
};

/// Single-pass (Welford) price statistics. Throws DataError on empty input.
PriceStats price_stats(std::span<const double> prices);

/// Weekday peak window in civil time; defaults to 08:00-20:00 CET.
struct PeakCalendar {
  int utc_offset_minutes = 60;
  int peak_start_hour = 8;
  int peak_end_hour = 20;  // exclusive

  bool is_peak(Timestamp hour_start) const;
};

/// mean(peak-hour prices) - mean(all prices). Throws DataError when the
/// range holds no peak hour.
double peak_base_spread(std::span<const double> prices, std::span<const Timestamp> hours,
                        const PeakCalendar& calendar = {});

struct ShareSummary {
  std::string label;
  double vw_mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  Histogram histogram;
};

ShareSummary summarize_share(const ShareSeries& shares, std::string label,
                             double bin_width = kDefaultBinWidth);

struct YearlyReport {
  int year = 0;
  PriceStats prices;
  double peak_base_spread = 0.0;
  std::vector<ShareSummary> shares;  // market/load, res/load, res/market
};

/// Share metric labels used in reports, in YearlyReport::shares order.
inline constexpr const char* kShareMetrics[] = {"market_load", "res_load", "res_market"};

/// Hourly ratios of one share metric, traded volume taken from `results`.
ShareSeries share_metric(std::span<const HourlyMarketRecord> records,
                         std::span<const ClearingResult> results, std::string_view metric);

/// One report per UTC calendar year. Prices of no-trade and failed hours are
/// left out of the price statistics.
std::vector<YearlyReport> yearly_reports(std::span<const HourlyMarketRecord> records,
                                         std::span<const ClearingResult> results,
                                         const PeakCalendar& calendar = {},
                                         double bin_width = kDefaultBinWidth);

}  // namespace meritorder

#include "meritorder/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "meritorder/common.hpp"
#include "meritorder/numeric.hpp"

namespace meritorder {

double volume_weighted_mean(std::span<const double> ratios, std::span<const double> weights) {
  if (ratios.size() != weights.size()) throw DataError("ratios and weights differ in length");
  CompensatedSum weighted;
  CompensatedSum total;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (!(weights[i] >= 0.0)) throw DataError("weights must be non-negative");
    weighted.add(ratios[i] * weights[i]);
    total.add(weights[i]);
    if (weights[i] > 0.0) {
      lo = std::min(lo, ratios[i]);
      hi = std::max(hi, ratios[i]);
    }
  }
  if (!(total.value() > 0.0)) throw DataError("total weight is zero");
  // Rounding must not push a convex combination outside its range.
  return std::clamp(weighted.value() / total.value(), lo, hi);
}

ShareSeries share_series(std::span<const double> numerator, std::span<const double> denominator,
                         std::string numerator_label, std::string denominator_label) {
  if (numerator.size() != denominator.size()) {
    throw DataError("numerator and denominator differ in length");
  }
  ShareSeries out;
  out.numerator_label = std::move(numerator_label);
  out.denominator_label = std::move(denominator_label);
  out.ratios.reserve(numerator.size());
  out.weights.reserve(numerator.size());
  for (std::size_t i = 0; i < numerator.size(); ++i) {
    if (!(denominator[i] > 0.0)) {
      out.excluded_hours.push_back(i);
      continue;
    }
    if (numerator[i] < 0.0) throw DataError("share numerator must be non-negative");
    const double ratio = numerator[i] / denominator[i];
    out.exceeds_one = out.exceeds_one || ratio > 1.0;
    out.ratios.push_back(ratio);
    out.weights.push_back(denominator[i]);
  }
  return out;
}

std::size_t Histogram::total_count() const {
  std::size_t n = 0;
  for (const auto& b : bins) n += b.count;
  return n;
}

namespace {

// k * width, with the product's representation error trimmed so that edges
// print as the decimals they stand for (0.15, not 0.15000000000000002).
double bin_edge(std::size_t k, double width) {
  return std::round(static_cast<double>(k) * width * 1e10) / 1e10;
}

}  // namespace

Histogram ratio_histogram(std::span<const double> ratios, double bin_width) {
  if (!(bin_width > 0.0)) throw ConfigError("bin width must be positive");
  Histogram hist;
  hist.bin_width = bin_width;
  std::vector<std::size_t> counts;
  for (double r : ratios) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw DataError("ratios must be finite and >= 0");
    // Edges are decimal multiples of the width; absorb representation error.
    const auto k = static_cast<std::size_t>(std::floor(r / bin_width + 1e-9));
    if (k >= counts.size()) counts.resize(k + 1, 0);
    ++counts[k];
  }
  hist.bins.reserve(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    hist.bins.push_back({bin_edge(k, bin_width), bin_edge(k + 1, bin_width), counts[k]});
  }
  return hist;
}

Histogram share_histogram(std::span<const double> numerator, std::span<const double> denominator,
                          double bin_width, std::vector<std::string>* warnings) {
  const auto shares = share_series(numerator, denominator);
  auto hist = ratio_histogram(shares.ratios, bin_width);
  hist.excluded_hours = shares.excluded_hours;
  if (warnings && !shares.excluded_hours.empty()) {
    warnings->push_back("excluded " + std::to_string(shares.excluded_hours.size()) +
                        " hour(s) with zero denominator");
  }
  return hist;
}

PriceStats price_stats(std::span<const double> prices) {
  if (prices.empty()) throw DataError("price series is empty");
  PriceStats s;
  s.min = std::numeric_limits<double>::infinity();
  s.max = -std::numeric_limits<double>::infinity();
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;
  for (double p : prices) {
    ++n;
    const double delta = p - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (p - mean);
    s.min = std::min(s.min, p);
    s.max = std::max(s.max, p);
    if (p < 0.0) ++s.negative_hours;
  }
  s.hours = n;
  s.mean = mean;
  s.std = s.min == s.max ? 0.0 : std::sqrt(std::max(m2, 0.0) / static_cast<double>(n));
  return s;
}

bool PeakCalendar::is_peak(Timestamp hour_start) const {
  using namespace std::chrono;
  const auto local = hour_start + minutes{utc_offset_minutes};
  const auto day = floor<days>(local);
  const unsigned wd = weekday{day}.c_encoding();  // 0 = Sunday
  if (wd == 0 || wd == 6) return false;
  const auto hour = duration_cast<hours>(local - day).count();
  return hour >= peak_start_hour && hour < peak_end_hour;
}

double peak_base_spread(std::span<const double> prices, std::span<const Timestamp> hours,
                        const PeakCalendar& calendar) {
  if (prices.size() != hours.size()) throw DataError("prices and calendar differ in length");
  CompensatedSum all;
  CompensatedSum peak;
  std::size_t n_peak = 0;
  for (std::size_t i = 0; i < prices.size(); ++i) {
    all.add(prices[i]);
    if (calendar.is_peak(hours[i])) {
      peak.add(prices[i]);
      ++n_peak;
    }
  }
  if (n_peak == 0) throw DataError("no peak hours in range");
  return peak.value() / static_cast<double>(n_peak) - all.value() / static_cast<double>(prices.size());
}

ShareSummary summarize_share(const ShareSeries& shares, std::string label, double bin_width) {
  if (shares.ratios.empty()) throw DataError(label + ": no hours with a positive denominator");
  ShareSummary out;
  out.label = std::move(label);
  out.vw_mean = volume_weighted_mean(shares.ratios, shares.weights);
  const auto [lo, hi] = std::minmax_element(shares.ratios.begin(), shares.ratios.end());
  out.min = *lo;
  out.max = *hi;
  out.histogram = ratio_histogram(shares.ratios, bin_width);
  out.histogram.excluded_hours = shares.excluded_hours;
  return out;
}

namespace {

struct HourVolumes {
  double load = 0.0;
  double res = 0.0;
  double traded = 0.0;
};

ShareSeries metric_series(std::span<const HourVolumes> hours, std::string_view metric) {
  std::vector<double> num(hours.size());
  std::vector<double> den(hours.size());
  for (std::size_t i = 0; i < hours.size(); ++i) {
    if (metric == "market_load") {
      num[i] = hours[i].traded;
      den[i] = hours[i].load;
    } else if (metric == "res_load") {
      num[i] = hours[i].res;
      den[i] = hours[i].load;
    } else if (metric == "res_market") {
      num[i] = hours[i].res;
      den[i] = hours[i].traded;
    } else {
      throw ConfigError("unknown share metric '" + std::string(metric) + "'");
    }
  }
  const auto sep = metric.find('_');
  return share_series(num, den, std::string(metric.substr(0, sep)),
                      std::string(metric.substr(sep + 1)));
}

HourVolumes volumes_of(const HourlyMarketRecord& record, const ClearingResult& result) {
  return {record.load_mwh, record.wind_mwh + record.pv_mwh, result.volume};
}

}  // namespace

ShareSeries share_metric(std::span<const HourlyMarketRecord> records,
                         std::span<const ClearingResult> results, std::string_view metric) {
  if (records.size() != results.size()) throw DataError("records and results differ in length");
  std::vector<HourVolumes> hours;
  hours.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) hours.push_back(volumes_of(records[i], results[i]));
  return metric_series(hours, metric);
}

std::vector<YearlyReport> yearly_reports(std::span<const HourlyMarketRecord> records,
                                         std::span<const ClearingResult> results,
                                         const PeakCalendar& calendar, double bin_width) {
  if (records.empty()) throw DataError("no hours to report");
  if (records.size() != results.size()) throw DataError("records and results differ in length");
  std::map<int, std::vector<std::size_t>> by_year;
  for (std::size_t i = 0; i < records.size(); ++i) {
    by_year[year_of(records[i].hour_start)].push_back(i);
  }

  std::vector<YearlyReport> out;
  for (const auto& [year, idx] : by_year) {
    std::vector<HourVolumes> volumes;
    std::vector<double> prices;
    std::vector<Timestamp> hours;
    volumes.reserve(idx.size());
    for (auto i : idx) {
      volumes.push_back(volumes_of(records[i], results[i]));
      if (results[i].status != ClearingStatus::no_trade &&
          results[i].status != ClearingStatus::failed) {
        prices.push_back(results[i].price);
        hours.push_back(records[i].hour_start);
      }
    }
    if (prices.empty()) throw DataError(std::to_string(year) + ": no priced hours");
    YearlyReport report;
    report.year = year;
    report.prices = price_stats(prices);
    report.peak_base_spread = peak_base_spread(prices, hours, calendar);
    for (const char* metric : kShareMetrics) {
      report.shares.push_back(summarize_share(metric_series(volumes, metric), metric, bin_width));
    }
    out.push_back(std::move(report));
  }
  return out;
}

}  // namespace meritorder

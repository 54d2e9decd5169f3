#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "meritorder/clearing.hpp"
#include "meritorder/counterfactual.hpp"
#include "meritorder/ingest.hpp"
#include "meritorder/stats.hpp"
#include "meritorder/synth.hpp"

namespace meritorder {

// Corpus directory layout.
inline constexpr std::string_view kHourlyFile = "hourly.csv";  // timestamp,load_mwh,...
inline constexpr std::string_view kCurvesFile = "curves.csv";  // hour,side,price,block volume

/// hourly.csv plus curves.csv; one curve block per row, canonical order.
void write_corpus(const std::filesystem::path& dir, std::span<const HourlyMarketRecord> records);

/// Inverse of write_corpus. A missing file is a ConfigError, a malformed one
/// a DataError.
std::vector<HourlyMarketRecord> read_corpus(const std::filesystem::path& dir,
                                            const PriceBounds& bounds = {});

/// timestamp,value rows of an hourly or quarter-hourly series.
std::string series_csv(const RawSeries& series);

/// Scenario file: {"c_wind": "floor"|number, "c_pv": ..., "mode": ...,
/// "pool_multiplier": number, "otc_bands": [[price, share], ...]}. Missing
/// keys keep their defaults.
ScenarioConfig parse_scenario_json(std::string_view text, std::string name);
ScenarioConfig load_scenario(const std::filesystem::path& path);  // name = file stem
std::string scenario_json(const ScenarioConfig& config);

/// Generator settings file: SynthParams keys plus "calibrate" and "targets".
struct SynthConfig {
  SynthParams params;
  bool calibrate = true;
  ShareTargets targets;
};

/// Absent keys keep their defaults; unknown keys and wrong types are a
/// ConfigError.
SynthConfig parse_synth_json(std::string_view text);
std::string synth_json(const SynthConfig& config);

/// hour,price_eur_mwh,volume_mwh,status
std::string clearing_csv(std::span<const HourlyMarketRecord> records,
                         std::span<const ClearingResult> results);

struct ClearingRow {
  Timestamp hour;
  ClearingResult result;
};
std::vector<ClearingRow> read_clearing_csv(const std::filesystem::path& path);

/// Cost rows by year columns; the first column is marginal_cost_eur_mwh and
/// the floor sentinel prints as the floor price.
std::string sweep_mean_csv(const SweepTable& table, const PriceBounds& bounds = {});
std::string sweep_std_csv(const SweepTable& table, const PriceBounds& bounds = {});

/// One row per year.
std::string stats_csv(std::span<const YearlyReport> reports);

/// bin_lo,bin_hi,count
std::string histogram_csv(const Histogram& histogram);

}  // namespace meritorder

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "meritorder/clearing.hpp"
#include "meritorder/curves.hpp"
#include "meritorder/ingest.hpp"

namespace meritorder {

/// Bid price assumed for a renewable technology: either a marginal cost in
/// EUR/MWh or the FLOOR sentinel (bid at the exchange price floor, as under
/// a feed-in tariff).
class MarginalCost {
 public:
  static MarginalCost floor() { return MarginalCost{}; }
  static MarginalCost eur(double value);
  /// "floor" or a decimal number.
  static MarginalCost parse(std::string_view text);

  bool is_floor() const { return !value_.has_value(); }
  double value() const;  // throws if floor
  double bid_price(const PriceBounds& bounds = {}) const {
    return value_ ? *value_ : bounds.floor;
  }
  std::string to_string() const;

  friend bool operator==(const MarginalCost&, const MarginalCost&) = default;

 private:
  std::optional<double> value_;
};

struct MarginalCostBreakdown {
  double wear_tear_eur = 0.0;
  double land_lease_eur = 0.0;
  double concession_tax_eur = 0.0;
  double forecast_error_eur = 0.0;
};

/// Sum of the four per-MWh cost components. Throws ConfigError if any is negative.
double total_marginal_cost(const MarginalCostBreakdown& breakdown);

enum class ScenarioMode { baseline, wind_only, pv_only, both };

std::string_view to_string(ScenarioMode mode);
ScenarioMode parse_scenario_mode(std::string_view text);

struct OtcBand {
  double price_eur = 0.0;
  double volume_share = 0.0;

  friend bool operator==(const OtcBand&, const OtcBand&) = default;
};

/// Stylized conventional stack for volume moved from OTC into the pool:
/// 20 % at 5, 50 % at 25, 30 % at 45 EUR/MWh.
std::vector<OtcBand> default_otc_bands();

struct ScenarioConfig {
  std::string name = "baseline";
  MarginalCost wind_cost = MarginalCost::floor();
  MarginalCost pv_cost = MarginalCost::floor();
  ScenarioMode mode = ScenarioMode::baseline;
  double pool_multiplier = 1.0;
  std::vector<OtcBand> otc_bands = default_otc_bands();

  /// Throws ConfigError on out-of-range costs, multiplier < 1 or band shares
  /// that do not sum to one.
  void validate(const PriceBounds& bounds = {}) const;
};

struct StripResult {
  AuctionCurve residual;
  double stripped_wind_mwh = 0.0;
  double stripped_pv_mwh = 0.0;
  /// Set when the floor-priced segment was too small and removal continued
  /// into higher-priced blocks.
  std::optional<std::string> warning;
};

/// Removes wind + pv volume from the cheapest end of the supply curve.
/// Throws DataError if the renewable volume is not strictly smaller than the
/// curve's total volume.
StripResult strip_res_floor(const AuctionCurve& supply, double wind_mwh, double pv_mwh,
                            const PriceBounds& bounds = {});

/// Inserts wind and pv blocks at the given costs and re-canonicalizes.
AuctionCurve reprice_res(const AuctionCurve& residual, double wind_mwh, MarginalCost wind_cost,
                         double pv_mwh, MarginalCost pv_cost, const PriceBounds& bounds = {});

/// Moves (multiplier - 1) x cleared volume from OTC into the pool: supply
/// blocks at the OTC band prices and a price-inelastic demand block at the cap.
HourlyMarketRecord apply_pool_expansion(const HourlyMarketRecord& record, double pool_multiplier,
                                        std::span<const OtcBand> otc_bands,
                                        const PriceBounds& bounds = {});

/// Supply slope over the volume traded above the RES floor segment: the
/// average slope of the stripped supply curve over (0, V* - wind - pv), V*
/// being the volume the hour clears at. Empty when that window is empty.
std::optional<SlopeMetric> traded_window_slope(const HourlyMarketRecord& record,
                                               const ClearingOptions& options = {});

/// Supply curve an hour clears against under the scenario (pool expansion
/// excluded).
AuctionCurve scenario_supply(const HourlyMarketRecord& record, const ScenarioConfig& config,
                             const PriceBounds& bounds = {},
                             std::optional<std::string>* warning = nullptr);

struct HourIssue {
  std::size_t hour_index = 0;
  std::string message;
};

struct ScenarioRun {
  std::vector<ClearingResult> results;  // one per input record, input order
  std::vector<HourIssue> warnings;
  std::vector<HourIssue> errors;        // hours marked ClearingStatus::failed
};

struct RunOptions {
  ClearingOptions clearing;
  unsigned jobs = 1;
};

/// Re-clears every hour under the scenario. Per-hour failures are collected,
/// not thrown. Results are independent of `jobs`.
ScenarioRun run_scenario(std::span<const HourlyMarketRecord> records, const ScenarioConfig& config,
                         const RunOptions& options = {});

/// Mean and population standard deviation of one column of prices.
struct PriceSummary {
  double mean = 0.0;
  double std = 0.0;
  std::size_t hours = 0;
};

struct SweepRow {
  MarginalCost cost;
  std::vector<PriceSummary> per_year;  // aligned with SweepTable::years
};

struct SweepTable {
  ScenarioMode mode = ScenarioMode::both;
  std::vector<int> years;
  std::vector<SweepRow> rows;  // in the order of the requested costs
};

/// Prices that enter yearly statistics: every hour except no-trade and failed.
bool counts_as_price(const ClearingResult& result);

/// One scenario run per cost; `base` supplies pool-expansion settings.
SweepTable sensitivity_sweep(std::span<const HourlyMarketRecord> records,
                             std::span<const MarginalCost> costs, ScenarioMode mode,
                             const RunOptions& options = {}, const ScenarioConfig& base = {});

}  // namespace meritorder

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "meritorder/clearing.hpp"
#include "meritorder/ingest.hpp"

namespace meritorder {

/// Identifier of the random stream, written to run manifests.
inline constexpr std::string_view kSynthRngAlgorithm = "mt19937_64/box-muller/v1";

/// Volumes are rounded to multiples of this quantum (1/64 MWh). Such values
/// print with at most six decimals and add exactly in double precision.
inline constexpr double kVolumeQuantum = 1.0 / 64.0;

/// One conventional technology. Its capacity is offered as `bids` equal
/// sub-bids at integer prices spread evenly over cost +- spread.
struct MeritTechnology {
  std::string label;
  double capacity_mw = 0.0;
  double marginal_cost_eur = 0.0;
  double spread_eur = 0.0;
  int bids = 1;
};

/// Default stack: must-run at 0, nuclear 8, lignite 18, hard coal 32, gas 55,
/// oil/peaker 90 and a thin scarcity tail.
std::vector<MeritTechnology> default_merit_stack();

struct SynthParams {
  std::uint64_t seed = 42;
  int year = 2011;
  double mean_load_mw = 64'075.0;
  double load_daily_amp = 0.12;
  double load_seasonal_amp = 0.08;
  double load_weekend_dip = 0.10;
  double load_noise = 0.015;
  double wind_capacity_mw = 31'300.0;
  double pv_capacity_mw = 17'400.0;
  double wind_persistence = 0.97;  // AR(1) coefficient, hourly
  std::vector<MeritTechnology> merit_stack = default_merit_stack();
  double availability_min = 0.85;  // lower bound of hourly plant availability
  double elastic_demand_share = 0.45;
  double spot_market_share = 0.49;
  double latitude_deg = 51.0;
  double longitude_deg = 10.0;

  /// Throws ConfigError on negative capacities or fractions outside [0, 1].
  void validate() const;
};

/// Hourly records for the UTC calendar year `p.year`, cleared with `clearing`
/// to fill the traded volume and realized price. Identical for identical
/// parameters. Throws DataError when an hour's demand at the cap exceeds its
/// supply.
std::vector<HourlyMarketRecord> generate_year(const SynthParams& p,
                                              const ClearingOptions& clearing = {});

/// Volume-weighted yearly shares.
struct MeasuredShares {
  double market_load = 0.0;  // traded volume / load
  double res_load = 0.0;     // (wind + pv) / load
  double res_market = 0.0;   // (wind + pv) / traded volume
};

MeasuredShares measure_shares(const std::vector<HourlyMarketRecord>& records);

struct ShareTargets {
  double market_load = 0.358;
  double res_load = 0.156;
  /// Checked but not steered: it follows from the other two.
  std::optional<double> res_market = 0.450;
  double tolerance = 0.02;  // absolute
};

struct Calibration {
  SynthParams params;
  MeasuredShares shares;
  int iterations = 0;
};

/// Scales wind/pv capacities and the spot market share until the measured
/// shares sit within tolerance of the targets. Throws ConfigError on targets
/// outside (0, 1] and DataError when 100 iterations do not converge.
Calibration calibrate(const SynthParams& p, const ShareTargets& targets = {},
                      const ClearingOptions& clearing = {});

}  // namespace meritorder

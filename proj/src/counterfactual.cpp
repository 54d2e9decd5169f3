#include "meritorder/counterfactual.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "meritorder/csv.hpp"
#include "meritorder/stats.hpp"

namespace meritorder {

MarginalCost MarginalCost::eur(double value) {
  if (!std::isfinite(value)) throw ConfigError("marginal cost must be finite");
  MarginalCost c;
  c.value_ = value;
  return c;
}

MarginalCost MarginalCost::parse(std::string_view text) {
  if (text == "floor" || text == "FLOOR") return floor();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("marginal cost '" + std::string(text) + "' is neither a number nor 'floor'");
  }
  return eur(v);
}

double MarginalCost::value() const {
  if (!value_) throw ConfigError("marginal cost is the floor sentinel");
  return *value_;
}

std::string MarginalCost::to_string() const {
  return value_ ? csv::format_double(*value_) : std::string("floor");
}

double total_marginal_cost(const MarginalCostBreakdown& b) {
  for (double c : {b.wear_tear_eur, b.land_lease_eur, b.concession_tax_eur, b.forecast_error_eur}) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw ConfigError("cost components must be >= 0");
  }
  return b.wear_tear_eur + b.land_lease_eur + b.concession_tax_eur + b.forecast_error_eur;
}

std::string_view to_string(ScenarioMode mode) {
  switch (mode) {
    case ScenarioMode::baseline: return "baseline";
    case ScenarioMode::wind_only: return "windOnly";
    case ScenarioMode::pv_only: return "pvOnly";
    case ScenarioMode::both: return "both";
  }
  return "baseline";
}

ScenarioMode parse_scenario_mode(std::string_view text) {
  if (text == "baseline") return ScenarioMode::baseline;
  if (text == "windOnly" || text == "wind_only" || text == "wind") return ScenarioMode::wind_only;
  if (text == "pvOnly" || text == "pv_only" || text == "pv") return ScenarioMode::pv_only;
  if (text == "both") return ScenarioMode::both;
  throw ConfigError("unknown scenario mode '" + std::string(text) +
                    "' (expected baseline, windOnly, pvOnly or both)");
}

std::vector<OtcBand> default_otc_bands() { return {{5.0, 0.2}, {25.0, 0.5}, {45.0, 0.3}}; }

void ScenarioConfig::validate(const PriceBounds& bounds) const {
  for (const auto* cost : {&wind_cost, &pv_cost}) {
    if (!cost->is_floor() && !(cost->value() >= 0.0 && cost->value() <= bounds.cap)) {
      throw ConfigError("marginal cost " + cost->to_string() + " outside [0, cap]");
    }
  }
  if (!(pool_multiplier >= 1.0) || !std::isfinite(pool_multiplier)) {
    throw ConfigError("pool multiplier must be >= 1");
  }
  if (!otc_bands.empty()) {
    double share = 0.0;
    for (const auto& band : otc_bands) {
      if (!(band.volume_share >= 0.0)) throw ConfigError("OTC band shares must be >= 0");
      if (!bounds.contains(band.price_eur)) throw ConfigError("OTC band price outside bounds");
      share += band.volume_share;
    }
    if (std::abs(share - 1.0) > 1e-9) throw ConfigError("OTC band shares must sum to 1");
  } else if (pool_multiplier > 1.0) {
    throw ConfigError("pool expansion requires OTC bands");
  }
}

namespace {

CurveLimits limits_for(const PriceBounds& bounds, std::size_t points) {
  return {bounds, std::max<std::size_t>(10'000, points)};
}

void append_positive(std::vector<Bid>& out, const std::vector<Bid>& blocks) {
  for (const auto& b : blocks) {
    if (b.volume > 0.0) out.push_back(b);
  }
}

}  // namespace

StripResult strip_res_floor(const AuctionCurve& supply, double wind_mwh, double pv_mwh,
                            const PriceBounds& bounds) {
  if (supply.side() != Side::supply) throw DataError("strip_res_floor needs a supply curve");
  if (!(wind_mwh >= 0.0) || !(pv_mwh >= 0.0)) throw DataError("RES volumes must be >= 0");
  const double res = wind_mwh + pv_mwh;
  if (res == 0.0) return {supply, 0.0, 0.0, std::nullopt};
  if (!(res < supply.total_volume())) {
    throw DataError("RES volume " + csv::format_double(res) + " MWh exceeds supply volume " +
                    csv::format_double(supply.total_volume()) + " MWh");
  }

  double remaining = res;
  bool crossed = false;
  std::vector<Bid> kept;
  for (const auto& block : supply.blocks()) {
    if (remaining > 0.0) {
      if (block.price > bounds.floor && block.volume > 0.0) crossed = true;
      if (block.volume <= remaining) {
        remaining -= block.volume;
        continue;
      }
      kept.push_back({block.price, block.volume - remaining});
      remaining = 0.0;
      continue;
    }
    kept.push_back(block);
  }
  std::vector<Bid> positive;
  append_positive(positive, kept);
  if (positive.empty()) throw DataError("stripping RES leaves an empty supply curve");

  StripResult out{build_curve(positive, Side::supply, limits_for(bounds, positive.size())),
                  wind_mwh, pv_mwh, std::nullopt};
  if (crossed) {
    out.warning = "floor segment smaller than RES volume " + csv::format_double(res) +
                  " MWh; removal continued into priced blocks";
  }
  return out;
}

AuctionCurve reprice_res(const AuctionCurve& residual, double wind_mwh, MarginalCost wind_cost,
                         double pv_mwh, MarginalCost pv_cost, const PriceBounds& bounds) {
  if (residual.side() != Side::supply) throw DataError("reprice_res needs a supply curve");
  if (!(wind_mwh >= 0.0) || !(pv_mwh >= 0.0)) throw DataError("RES volumes must be >= 0");
  // RES blocks go first so that at equal prices they merge in the same order
  // as an original wind-then-pv floor block.
  std::vector<Bid> bids;
  bids.reserve(residual.size() + 2);
  if (wind_mwh > 0.0) bids.push_back({wind_cost.bid_price(bounds), wind_mwh});
  if (pv_mwh > 0.0) bids.push_back({pv_cost.bid_price(bounds), pv_mwh});
  append_positive(bids, residual.blocks());
  return build_curve(bids, Side::supply, limits_for(bounds, bids.size()));
}

HourlyMarketRecord apply_pool_expansion(const HourlyMarketRecord& record, double pool_multiplier,
                                        std::span<const OtcBand> otc_bands,
                                        const PriceBounds& bounds) {
  if (!(pool_multiplier >= 1.0) || !std::isfinite(pool_multiplier)) {
    throw ConfigError("pool multiplier must be >= 1");
  }
  if (pool_multiplier == 1.0) return record;
  if (otc_bands.empty()) throw ConfigError("pool expansion requires OTC bands");
  const double added = (pool_multiplier - 1.0) * record.cleared_volume_mwh;
  if (!(added > 0.0)) return record;

  std::vector<Bid> supply;
  append_positive(supply, record.supply.blocks());
  for (const auto& band : otc_bands) {
    if (band.volume_share > 0.0) supply.push_back({band.price_eur, band.volume_share * added});
  }
  std::vector<Bid> demand;
  append_positive(demand, record.demand.blocks());
  demand.push_back({bounds.cap, added});

  HourlyMarketRecord out = record;
  out.supply = build_curve(supply, Side::supply, limits_for(bounds, supply.size()));
  out.demand = build_curve(demand, Side::demand, limits_for(bounds, demand.size()));
  return out;
}

std::optional<SlopeMetric> traded_window_slope(const HourlyMarketRecord& record,
                                               const ClearingOptions& options) {
  const auto result = clear(record.demand, record.supply, options);
  const double hi = result.volume - (record.wind_mwh + record.pv_mwh);
  if (!(hi > 0.0)) return std::nullopt;
  const auto stripped =
      strip_res_floor(record.supply, record.wind_mwh, record.pv_mwh, options.bounds);
  return average_slope(stripped.residual, {0.0, std::min(hi, stripped.residual.total_volume())},
                       options.mode);
}

AuctionCurve scenario_supply(const HourlyMarketRecord& record, const ScenarioConfig& config,
                             const PriceBounds& bounds, std::optional<std::string>* warning) {
  if (config.mode == ScenarioMode::baseline) return record.supply;
  const bool wind_repriced =
      config.mode == ScenarioMode::wind_only || config.mode == ScenarioMode::both;
  const bool pv_repriced = config.mode == ScenarioMode::pv_only || config.mode == ScenarioMode::both;
  // Nothing to move: keep the hour's curve untouched.
  if ((!wind_repriced || record.wind_mwh == 0.0) && (!pv_repriced || record.pv_mwh == 0.0)) {
    return record.supply;
  }
  auto stripped = strip_res_floor(record.supply, record.wind_mwh, record.pv_mwh, bounds);
  if (warning) *warning = std::move(stripped.warning);
  return reprice_res(stripped.residual, record.wind_mwh,
                     wind_repriced ? config.wind_cost : MarginalCost::floor(), record.pv_mwh,
                     pv_repriced ? config.pv_cost : MarginalCost::floor(), bounds);
}

ScenarioRun run_scenario(std::span<const HourlyMarketRecord> records, const ScenarioConfig& config,
                         const RunOptions& options) {
  config.validate(options.clearing.bounds);
  const std::size_t n = records.size();
  ScenarioRun run;
  run.results.resize(n);
  std::vector<std::optional<std::string>> warnings(n);
  std::vector<std::optional<std::string>> errors(n);

  auto process = [&](std::size_t i) {
    try {
      const HourlyMarketRecord* record = &records[i];
      HourlyMarketRecord expanded_storage{records[i]};
      if (config.pool_multiplier > 1.0) {
        expanded_storage = apply_pool_expansion(records[i], config.pool_multiplier,
                                                config.otc_bands, options.clearing.bounds);
        record = &expanded_storage;
      }
      const auto supply =
          scenario_supply(*record, config, options.clearing.bounds, &warnings[i]);
      run.results[i] = clear(record->demand, supply, options.clearing);
    } catch (const std::exception& e) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      run.results[i] = {nan, 0.0, ClearingStatus::failed, nan, nan};
      errors[i] = e.what();
    }
  };

  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(n)));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) process(i);
  } else {
    std::atomic<std::size_t> next{0};
    constexpr std::size_t kChunk = 64;
    std::vector<std::jthread> workers;
    workers.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (;;) {
          const std::size_t start = next.fetch_add(kChunk);
          if (start >= n) break;
          const std::size_t stop = std::min(n, start + kChunk);
          for (std::size_t i = start; i < stop; ++i) process(i);
        }
      });
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (warnings[i]) run.warnings.push_back({i, *warnings[i]});
    if (errors[i]) run.errors.push_back({i, *errors[i]});
  }
  return run;
}

bool counts_as_price(const ClearingResult& result) {
  return result.status != ClearingStatus::no_trade && result.status != ClearingStatus::failed;
}

SweepTable sensitivity_sweep(std::span<const HourlyMarketRecord> records,
                             std::span<const MarginalCost> costs, ScenarioMode mode,
                             const RunOptions& options, const ScenarioConfig& base) {
  if (costs.empty()) throw ConfigError("sweep needs at least one cost");
  if (mode == ScenarioMode::baseline) throw ConfigError("sweep mode must be windOnly, pvOnly or both");

  SweepTable table;
  table.mode = mode;
  std::map<int, std::size_t> year_column;
  std::vector<int> hour_year(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    hour_year[i] = year_of(records[i].hour_start);
    year_column.emplace(hour_year[i], 0);
  }
  for (auto& [year, col] : year_column) {
    col = table.years.size();
    table.years.push_back(year);
  }

  for (const auto& cost : costs) {
    ScenarioConfig config = base;
    config.mode = mode;
    config.name = std::string(to_string(mode)) + "_" + cost.to_string();
    config.wind_cost = mode == ScenarioMode::pv_only ? MarginalCost::floor() : cost;
    config.pv_cost = mode == ScenarioMode::wind_only ? MarginalCost::floor() : cost;
    const auto run = run_scenario(records, config, options);

    std::vector<std::vector<double>> prices(table.years.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (counts_as_price(run.results[i])) {
        prices[year_column.at(hour_year[i])].push_back(run.results[i].price);
      }
    }
    SweepRow row{cost, {}};
    for (const auto& column : prices) {
      if (column.empty()) {
        row.per_year.push_back({std::numeric_limits<double>::quiet_NaN(),
                                std::numeric_limits<double>::quiet_NaN(), 0});
        continue;
      }
      const auto s = price_stats(column);
      row.per_year.push_back({s.mean, s.std, s.hours});
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace meritorder

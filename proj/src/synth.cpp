#include "meritorder/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "meritorder/numeric.hpp"

namespace meritorder {
namespace {

using std::numbers::pi;

// Portable normal deviates: the standard distributions are implementation
// defined, so uniforms and Box-Muller are done by hand.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // (0, 1)
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (spare_) {
      const double z = *spare_;
      spare_.reset();
      return z;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * pi * uniform();
    spare_ = r * std::sin(theta);
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

// Bounded, mean-reverting latent process with unit stationary variance.
class Ar1 {
 public:
  explicit Ar1(double phi) : phi_(phi), scale_(std::sqrt(1.0 - phi * phi)) {}
  double step(NormalStream& rng) {
    x_ = std::clamp(phi_ * x_ + scale_ * rng.normal(), -3.5, 3.5);
    return x_;
  }

 private:
  double phi_;
  double scale_;
  double x_ = 0.0;
};

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double quantize(double mwh) { return std::round(mwh / kVolumeQuantum) * kVolumeQuantum; }

struct TailBid {
  double price;
  double weight;
};

// Price-responsive demand, most of it above zero with a thin negative tail
// (storage pumping, exports).
constexpr TailBid kDemandTail[] = {
    {250, .03}, {150, .04}, {100, .05}, {70, .06},  {50, .07},   {40, .07},   {30, .08},  {20, .09},
    {10, .10},  {0, .10},   {-10, .08}, {-25, .07}, {-50, .06}, {-100, .05}, {-200, .05},
};

double solar_elevation_sine(Timestamp hour_start, double lat_deg, double lon_deg) {
  using namespace std::chrono;
  const auto day = floor<days>(hour_start);
  const year_month_day ymd{day};
  const int doy = (day - sys_days{ymd.year() / January / 1}).count() + 1;
  const double utc_hour =
      static_cast<double>(duration_cast<hours>(hour_start - day).count()) + 0.5;
  const double decl = 23.44 * pi / 180.0 * std::sin(2.0 * pi * (284.0 + doy) / 365.0);
  const double hour_angle = (utc_hour + lon_deg / 15.0 - 12.0) * 15.0 * pi / 180.0;
  const double lat = lat_deg * pi / 180.0;
  return std::sin(lat) * std::sin(decl) + std::cos(lat) * std::cos(decl) * std::cos(hour_angle);
}

void check_fraction(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(what) + " must lie in [0, 1]");
}

void check_non_negative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be >= 0");
}

}  // namespace

std::vector<MeritTechnology> default_merit_stack() {
  return {
      {"must-run", 3'000, 0, 0, 1},     {"nuclear", 7'000, 8, 3, 7},
      {"lignite", 11'000, 18, 5, 11},   {"hard coal", 15'000, 32, 7, 8},
      {"gas", 16'000, 55, 12, 9},       {"oil", 5'000, 90, 15, 7},
      {"scarcity", 2'000, 300, 200, 3},
  };
}

void SynthParams::validate() const {
  check_non_negative(mean_load_mw, "mean load");
  check_non_negative(wind_capacity_mw, "wind capacity");
  check_non_negative(pv_capacity_mw, "pv capacity");
  check_fraction(load_daily_amp, "daily load amplitude");
  check_fraction(load_seasonal_amp, "seasonal load amplitude");
  check_fraction(load_weekend_dip, "weekend load dip");
  check_fraction(load_noise, "load noise");
  check_fraction(availability_min, "minimum availability");
  check_fraction(elastic_demand_share, "elastic demand share");
  check_fraction(spot_market_share, "spot market share");
  if (!(wind_persistence >= 0.0 && wind_persistence < 1.0)) {
    throw ConfigError("wind persistence must lie in [0, 1)");
  }
  if (load_daily_amp + load_seasonal_amp + load_weekend_dip + 4.0 * load_noise >= 1.0) {
    throw ConfigError("load amplitudes leave no positive load");
  }
  if (merit_stack.empty()) throw ConfigError("merit stack is empty");
  const PriceBounds bounds;
  for (const auto& tech : merit_stack) {
    check_non_negative(tech.capacity_mw, "technology capacity");
    check_non_negative(tech.spread_eur, "technology price spread");
    if (tech.bids < 1) throw ConfigError(tech.label + ": needs at least one bid");
    if (!bounds.contains(tech.marginal_cost_eur - tech.spread_eur) ||
        !bounds.contains(tech.marginal_cost_eur + tech.spread_eur)) {
      throw ConfigError(tech.label + ": prices outside exchange bounds");
    }
  }
}

std::vector<HourlyMarketRecord> generate_year(const SynthParams& p,
                                              const ClearingOptions& clearing) {
  p.validate();
  const auto start = make_utc(p.year, 1, 1);
  const int n = hours_in_year(p.year);
  const PriceBounds& bounds = clearing.bounds;
  const CurveLimits limits{bounds, 10'000};

  NormalStream rng(p.seed);
  Ar1 wind_state(p.wind_persistence);
  Ar1 cloud_state(0.9);
  Ar1 load_state(0.9);

  std::vector<HourlyMarketRecord> out;
  out.reserve(n);
  std::vector<Bid> supply;
  std::vector<Bid> demand;
  for (int h = 0; h < n; ++h) {
    using namespace std::chrono;
    const Timestamp t = start + hours{h};
    const auto local = t + hours{1};  // load shape follows CET
    const auto local_day = floor<days>(local);
    const double local_hour = static_cast<double>(duration_cast<hours>(local - local_day).count());
    const double season = std::cos(2.0 * pi * (static_cast<double>(h) / 24.0 - 15.0) / 365.25);
    const unsigned wd = weekday{local_day}.c_encoding();

    double shape = 1.0 + p.load_daily_amp * -std::cos(2.0 * pi * (local_hour - 4.0) / 24.0) +
                   p.load_seasonal_amp * season + p.load_noise * load_state.step(rng);
    if (wd == 6) shape -= 0.6 * p.load_weekend_dip;
    if (wd == 0) shape -= p.load_weekend_dip;
    const double load = quantize(p.mean_load_mw * shape);

    const double wind_cf = logistic(-1.3 + 0.9 * wind_state.step(rng) + 0.3 * season);
    const double wind = quantize(p.wind_capacity_mw * wind_cf);

    const double clearness = 0.35 + 0.65 * logistic(0.8 + 1.2 * cloud_state.step(rng));
    const double sun = solar_elevation_sine(t, p.latitude_deg, p.longitude_deg);
    const double pv = sun > 0.0 ? quantize(p.pv_capacity_mw * 0.8 * sun * clearness) : 0.0;

    supply.clear();
    if (wind > 0.0) supply.push_back({bounds.floor, wind});
    if (pv > 0.0) supply.push_back({bounds.floor, pv});
    for (const auto& tech : p.merit_stack) {
      const double avail = p.availability_min + (1.0 - p.availability_min) * rng.uniform();
      const double block = quantize(tech.capacity_mw * p.spot_market_share * avail / tech.bids);
      if (!(block > 0.0)) continue;
      for (int j = 0; j < tech.bids; ++j) {
        const double offset =
            tech.bids == 1 ? 0.0 : -tech.spread_eur + 2.0 * tech.spread_eur * j / (tech.bids - 1);
        supply.push_back({std::round(tech.marginal_cost_eur + offset), block});
      }
    }

    const double traded = p.spot_market_share * load;
    const double inelastic = quantize((1.0 - p.elastic_demand_share) * traded);
    demand.clear();
    if (inelastic > 0.0) demand.push_back({bounds.cap, inelastic});
    for (const auto& bid : kDemandTail) {
      const double v = quantize(p.elastic_demand_share * traded * bid.weight);
      if (v > 0.0) demand.push_back({bid.price, v});
    }

    if (supply.empty() || demand.empty()) {
      throw DataError(format_iso8601(t) + ": empty synthetic curve");
    }
    HourlyMarketRecord rec{t,
                           load,
                           wind,
                           pv,
                           0.0,
                           0.0,
                           build_curve(demand, Side::demand, limits),
                           build_curve(supply, Side::supply, limits)};
    if (inelastic > rec.supply.total_volume()) {
      throw DataError(format_iso8601(t) + ": demand at the cap exceeds total supply");
    }
    const auto result = clear(rec.demand, rec.supply, clearing);
    rec.cleared_volume_mwh = result.volume;
    rec.realized_price_eur = result.price;
    out.push_back(std::move(rec));
  }
  return out;
}

MeasuredShares measure_shares(const std::vector<HourlyMarketRecord>& records) {
  CompensatedSum load;
  CompensatedSum res;
  CompensatedSum traded;
  for (const auto& r : records) {
    load.add(r.load_mwh);
    res.add(r.wind_mwh + r.pv_mwh);
    traded.add(r.cleared_volume_mwh);
  }
  if (!(load.value() > 0.0) || !(traded.value() > 0.0)) {
    throw DataError("shares undefined without load and traded volume");
  }
  return {traded.value() / load.value(), res.value() / load.value(), res.value() / traded.value()};
}

Calibration calibrate(const SynthParams& p, const ShareTargets& targets,
                      const ClearingOptions& clearing) {
  for (double t : {targets.market_load, targets.res_load}) {
    if (!(t > 0.0 && t <= 1.0)) throw ConfigError("share targets must lie in (0, 1]");
  }
  if (targets.res_market && !(*targets.res_market > 0.0 && *targets.res_market <= 1.0)) {
    throw ConfigError("share targets must lie in (0, 1]");
  }
  if (!(targets.tolerance > 0.0)) throw ConfigError("calibration tolerance must be positive");
  if (p.wind_capacity_mw + p.pv_capacity_mw <= 0.0) {
    throw ConfigError("calibration needs some wind or pv capacity");
  }

  constexpr int kMaxIterations = 100;
  Calibration cal{p, {}, 0};
  for (int it = 1; it <= kMaxIterations; ++it) {
    cal.iterations = it;
    cal.shares = measure_shares(generate_year(cal.params, clearing));
    const bool market_ok = std::abs(cal.shares.market_load - targets.market_load) <= targets.tolerance;
    const bool res_ok = std::abs(cal.shares.res_load - targets.res_load) <= targets.tolerance;
    if (market_ok && res_ok) {
      if (targets.res_market &&
          std::abs(cal.shares.res_market - *targets.res_market) > targets.tolerance) {
        throw DataError("RES/market target out of reach: measured " +
                        std::to_string(cal.shares.res_market) + " with the other targets met");
      }
      return cal;
    }
    if (!market_ok) {
      cal.params.spot_market_share =
          std::min(1.0, cal.params.spot_market_share * targets.market_load / cal.shares.market_load);
    }
    if (!res_ok) {
      const double f = targets.res_load / cal.shares.res_load;
      cal.params.wind_capacity_mw *= f;
      cal.params.pv_capacity_mw *= f;
    }
  }
  throw DataError("calibration did not converge in 100 iterations");
}

}  // namespace meritorder

#include "meritorder/io.hpp"

#include <cmath>
#include <map>

#include "json.hpp"
#include "meritorder/csv.hpp"

namespace meritorder {
namespace {

using nlohmann::json;
using csv::format_double;

std::string format_value(double v) { return std::isnan(v) ? std::string("nan") : format_double(v); }

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

double number_at(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
  return v.get<double>();
}

MarginalCost cost_at(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (v.is_string()) {
    if (v.get<std::string>() != "floor") {
      throw ConfigError("'" + key + "' must be a number or \"floor\"");
    }
    return MarginalCost::floor();
  }
  if (!v.is_number()) throw ConfigError("'" + key + "' must be a number or \"floor\"");
  return MarginalCost::eur(v.get<double>());
}

json cost_json(const MarginalCost& c) {
  return c.is_floor() ? json("floor") : json(c.value());
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, const char* what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ConfigError(std::string(what) + ": unknown key '" + key + "'");
  }
}

void require_file(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) {
    throw ConfigError("missing file '" + path.string() + "'");
  }
}

}  // namespace

void write_corpus(const std::filesystem::path& dir, std::span<const HourlyMarketRecord> records) {
  std::filesystem::create_directories(dir);
  std::string hourly = "timestamp,load_mwh,wind_mwh,pv_mwh,volume_mwh,price_eur_mwh\n";
  std::string curves = "hour,side,price_eur_mwh,block_volume_mwh\n";
  for (const auto& r : records) {
    const auto hour = format_iso8601(r.hour_start);
    hourly += hour + ',' + format_double(r.load_mwh) + ',' + format_double(r.wind_mwh) + ',' +
              format_double(r.pv_mwh) + ',' + format_double(r.cleared_volume_mwh) + ',' +
              format_double(r.realized_price_eur) + '\n';
    for (const auto* curve : {&r.demand, &r.supply}) {
      const std::string prefix = hour + ',' + std::string(to_string(curve->side())) + ',';
      for (const auto& b : curve->blocks()) {
        curves += prefix + format_double(b.price) + ',' + format_double(b.volume) + '\n';
      }
    }
  }
  csv::write_text(dir / kHourlyFile, hourly);
  csv::write_text(dir / kCurvesFile, curves);
}

std::vector<HourlyMarketRecord> read_corpus(const std::filesystem::path& dir,
                                            const PriceBounds& bounds) {
  const auto hourly_path = dir / kHourlyFile;
  const auto curves_path = dir / kCurvesFile;
  require_file(hourly_path);
  require_file(curves_path);

  const auto hourly = csv::read_file(hourly_path);
  const auto source = hourly_path.string();
  auto column = [&](const char* name) {
    return series_from_table(hourly, {"timestamp", name, name, 60}, source);
  };
  const auto load = column("load_mwh");
  const auto wind = column("wind_mwh");
  const auto pv = column("pv_mwh");
  const auto volume = column("volume_mwh");
  const auto price = column("price_eur_mwh");
  const std::size_t n = load.samples.size();

  std::map<Timestamp, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(load.samples[i].time, i);
  std::vector<std::vector<Bid>> demand(n);
  std::vector<std::vector<Bid>> supply(n);

  const auto curves_text = csv::read_text(curves_path);
  const auto curves_source = curves_path.string();
  csv::Reader reader(curves_text, curves_source);
  const auto c_hour = reader.require_column("hour");
  const auto c_side = reader.require_column("side");
  const auto c_price = reader.require_column("price_eur_mwh");
  const auto c_volume = reader.require_column("block_volume_mwh");
  csv::Row row;
  std::string last_hour;
  std::size_t slot = 0;
  while (reader.next(row)) {
    const auto where = curves_source + ":" + std::to_string(row.line);
    if (row.fields[c_hour] != last_hour) {
      Timestamp t;
      try {
        t = parse_iso8601(row.fields[c_hour]).utc;
      } catch (const DataError& e) {
        throw DataError(where + ": " + e.what());
      }
      const auto it = index.find(t);
      if (it == index.end()) throw DataError(where + ": hour not present in " + source);
      slot = it->second;
      last_hour = row.fields[c_hour];
    }
    Side side;
    try {
      side = parse_side(row.fields[c_side]);
    } catch (const std::exception& e) {
      throw DataError(where + ": " + e.what());
    }
    const Bid bid{csv::to_double(row.fields[c_price], curves_source, row.line),
                  csv::to_double(row.fields[c_volume], curves_source, row.line)};
    (side == Side::demand ? demand : supply)[slot].push_back(bid);
  }

  const CurveLimits limits{bounds, 10'000};
  std::vector<HourlyMarketRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto when = format_iso8601(load.samples[i].time);
    if (demand[i].empty() || supply[i].empty()) {
      throw DataError(curves_source + ": no " + (demand[i].empty() ? "demand" : "supply") +
                      " curve for " + when);
    }
    try {
      HourlyMarketRecord rec{load.samples[i].time,
                             load.samples[i].value,
                             wind.samples[i].value,
                             pv.samples[i].value,
                             volume.samples[i].value,
                             price.samples[i].value,
                             build_curve(demand[i], Side::demand, limits),
                             build_curve(supply[i], Side::supply, limits)};
      validate(rec, bounds);
      out.push_back(std::move(rec));
    } catch (const DataError& e) {
      throw DataError(when + ": " + e.what());
    }
  }
  return out;
}

std::string series_csv(const RawSeries& series) {
  std::string out = "timestamp,value\n";
  for (const auto& s : series.samples) {
    out += format_iso8601(s.time, s.utc_offset_minutes) + ',' + format_double(s.value) + '\n';
  }
  return out;
}

ScenarioConfig parse_scenario_json(std::string_view text, std::string name) {
  const auto j = parse_json(text, "scenario");
  check_keys(j, {"name", "c_wind", "c_pv", "mode", "pool_multiplier", "otc_bands"}, "scenario");
  ScenarioConfig config;
  config.name = std::move(name);
  try {
    if (j.contains("name")) {
      if (!j["name"].is_string()) throw ConfigError("'name' must be a string");
      config.name = j["name"].get<std::string>();
    }
    if (j.contains("c_wind")) config.wind_cost = cost_at(j, "c_wind");
    if (j.contains("c_pv")) config.pv_cost = cost_at(j, "c_pv");
    if (j.contains("mode")) {
      if (!j["mode"].is_string()) throw ConfigError("'mode' must be a string");
      config.mode = parse_scenario_mode(j["mode"].get<std::string>());
    } else if (j.contains("c_wind") || j.contains("c_pv")) {
      // costs without a mode mean both; FLOOR costs still reproduce the baseline
      config.mode = ScenarioMode::both;
    }
    if (j.contains("pool_multiplier")) config.pool_multiplier = number_at(j, "pool_multiplier");
    if (j.contains("otc_bands")) {
      const auto& bands = j["otc_bands"];
      if (!bands.is_array()) throw ConfigError("'otc_bands' must be an array");
      config.otc_bands.clear();
      for (const auto& b : bands) {
        if (b.is_array() && b.size() == 2 && b[0].is_number() && b[1].is_number()) {
          config.otc_bands.push_back({b[0].get<double>(), b[1].get<double>()});
        } else if (b.is_object()) {
          config.otc_bands.push_back({number_at(b, "price_eur"), number_at(b, "volume_share")});
        } else {
          throw ConfigError("'otc_bands' entries must be [price, share]");
        }
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  if (config.name.empty()) throw ConfigError("scenario name is empty");
  config.validate();
  return config;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  require_file(path);
  return parse_scenario_json(csv::read_text(path), path.stem().string());
}

std::string scenario_json(const ScenarioConfig& config) {
  json bands = json::array();
  for (const auto& b : config.otc_bands) bands.push_back({b.price_eur, b.volume_share});
  const json j = {{"name", config.name},
                  {"c_wind", cost_json(config.wind_cost)},
                  {"c_pv", cost_json(config.pv_cost)},
                  {"mode", std::string(to_string(config.mode))},
                  {"pool_multiplier", config.pool_multiplier},
                  {"otc_bands", bands}};
  return j.dump(2) + "\n";
}

SynthConfig parse_synth_json(std::string_view text) {
  const auto j = parse_json(text, "synth config");
  check_keys(j,
             {"seed", "year", "mean_load_mw", "load_daily_amp", "load_seasonal_amp",
              "load_weekend_dip", "load_noise", "wind_capacity_mw", "pv_capacity_mw",
              "wind_persistence", "merit_stack", "availability_min", "elastic_demand_share",
              "spot_market_share", "latitude_deg", "longitude_deg", "calibrate", "targets"},
             "synth config");
  SynthConfig config;
  auto& p = config.params;
  try {
    if (j.contains("seed")) {
      if (!j["seed"].is_number_integer() || j["seed"].get<long long>() < 0) {
        throw ConfigError("'seed' must be a non-negative integer");
      }
      p.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("year")) {
      if (!j["year"].is_number_integer()) throw ConfigError("'year' must be an integer");
      p.year = j["year"].get<int>();
    }
    const std::pair<const char*, double*> numbers[] = {
        {"mean_load_mw", &p.mean_load_mw},
        {"load_daily_amp", &p.load_daily_amp},
        {"load_seasonal_amp", &p.load_seasonal_amp},
        {"load_weekend_dip", &p.load_weekend_dip},
        {"load_noise", &p.load_noise},
        {"wind_capacity_mw", &p.wind_capacity_mw},
        {"pv_capacity_mw", &p.pv_capacity_mw},
        {"wind_persistence", &p.wind_persistence},
        {"availability_min", &p.availability_min},
        {"elastic_demand_share", &p.elastic_demand_share},
        {"spot_market_share", &p.spot_market_share},
        {"latitude_deg", &p.latitude_deg},
        {"longitude_deg", &p.longitude_deg},
    };
    for (const auto& [key, dst] : numbers) {
      if (j.contains(key)) *dst = number_at(j, key);
    }
    if (j.contains("merit_stack")) {
      if (!j["merit_stack"].is_array()) throw ConfigError("'merit_stack' must be an array");
      p.merit_stack.clear();
      for (const auto& t : j["merit_stack"]) {
        check_keys(t, {"label", "capacity_mw", "marginal_cost_eur", "spread_eur", "bids"},
                   "merit_stack entry");
        MeritTechnology tech;
        tech.label = t.value("label", std::string("unnamed"));
        tech.capacity_mw = number_at(t, "capacity_mw");
        tech.marginal_cost_eur = number_at(t, "marginal_cost_eur");
        if (t.contains("spread_eur")) tech.spread_eur = number_at(t, "spread_eur");
        if (t.contains("bids")) {
          if (!t["bids"].is_number_integer()) throw ConfigError("'bids' must be an integer");
          tech.bids = t["bids"].get<int>();
        }
        p.merit_stack.push_back(std::move(tech));
      }
    }
    if (j.contains("calibrate")) {
      if (!j["calibrate"].is_boolean()) throw ConfigError("'calibrate' must be true or false");
      config.calibrate = j["calibrate"].get<bool>();
    }
    if (j.contains("targets")) {
      const auto& t = j["targets"];
      check_keys(t, {"market_load", "res_load", "res_market", "tolerance"}, "targets");
      if (t.contains("market_load")) config.targets.market_load = number_at(t, "market_load");
      if (t.contains("res_load")) config.targets.res_load = number_at(t, "res_load");
      if (t.contains("res_market")) {
        if (t["res_market"].is_null()) {
          config.targets.res_market.reset();
        } else {
          config.targets.res_market = number_at(t, "res_market");
        }
      }
      if (t.contains("tolerance")) config.targets.tolerance = number_at(t, "tolerance");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("synth config: ") + e.what());
  }
  p.validate();
  return config;
}

std::string synth_json(const SynthConfig& config) {
  const auto& p = config.params;
  json stack = json::array();
  for (const auto& t : p.merit_stack) {
    stack.push_back({{"label", t.label},
                     {"capacity_mw", t.capacity_mw},
                     {"marginal_cost_eur", t.marginal_cost_eur},
                     {"spread_eur", t.spread_eur},
                     {"bids", t.bids}});
  }
  json targets = {{"market_load", config.targets.market_load},
                  {"res_load", config.targets.res_load},
                  {"tolerance", config.targets.tolerance}};
  targets["res_market"] = config.targets.res_market ? json(*config.targets.res_market) : json();
  const json j = {{"seed", p.seed},
                  {"year", p.year},
                  {"mean_load_mw", p.mean_load_mw},
                  {"load_daily_amp", p.load_daily_amp},
                  {"load_seasonal_amp", p.load_seasonal_amp},
                  {"load_weekend_dip", p.load_weekend_dip},
                  {"load_noise", p.load_noise},
                  {"wind_capacity_mw", p.wind_capacity_mw},
                  {"pv_capacity_mw", p.pv_capacity_mw},
                  {"wind_persistence", p.wind_persistence},
                  {"merit_stack", stack},
                  {"availability_min", p.availability_min},
                  {"elastic_demand_share", p.elastic_demand_share},
                  {"spot_market_share", p.spot_market_share},
                  {"latitude_deg", p.latitude_deg},
                  {"longitude_deg", p.longitude_deg},
                  {"calibrate", config.calibrate},
                  {"targets", targets}};
  return j.dump(2) + "\n";
}

std::string clearing_csv(std::span<const HourlyMarketRecord> records,
                         std::span<const ClearingResult> results) {
  if (records.size() != results.size()) throw DataError("records and results differ in length");
  std::string out = "hour,price_eur_mwh,volume_mwh,status\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    out += format_iso8601(records[i].hour_start) + ',' + format_value(results[i].price) + ',' +
           format_double(results[i].volume) + ',' + std::string(to_string(results[i].status)) +
           '\n';
  }
  return out;
}

std::vector<ClearingRow> read_clearing_csv(const std::filesystem::path& path) {
  require_file(path);
  const auto table = csv::read_file(path);
  const auto source = path.string();
  const auto c_hour = table.require_column("hour", source);
  const auto c_price = table.require_column("price_eur_mwh", source);
  const auto c_volume = table.require_column("volume_mwh", source);
  const auto c_status = table.require_column("status", source);
  std::vector<ClearingRow> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    const auto where = source + ":" + std::to_string(row.line);
    ClearingRow r;
    try {
      r.hour = parse_iso8601(row.fields[c_hour]).utc;
      r.result.status = parse_clearing_status(row.fields[c_status]);
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
    r.result.price = r.result.status == ClearingStatus::failed
                         ? std::nan("")
                         : csv::to_double(row.fields[c_price], source, row.line);
    r.result.volume = csv::to_double(row.fields[c_volume], source, row.line);
    r.result.price_low = r.result.price_high = r.result.price;
    out.push_back(r);
  }
  if (out.empty()) throw DataError(source + ": no rows");
  return out;
}

namespace {

std::string sweep_csv(const SweepTable& table, const PriceBounds& bounds, bool mean) {
  std::string out = "marginal_cost_eur_mwh";
  for (int y : table.years) out += ',' + std::to_string(y);
  out += '\n';
  for (const auto& row : table.rows) {
    out += format_double(row.cost.bid_price(bounds));
    for (const auto& cell : row.per_year) out += ',' + format_value(mean ? cell.mean : cell.std);
    out += '\n';
  }
  return out;
}

}  // namespace

std::string sweep_mean_csv(const SweepTable& table, const PriceBounds& bounds) {
  return sweep_csv(table, bounds, true);
}

std::string sweep_std_csv(const SweepTable& table, const PriceBounds& bounds) {
  return sweep_csv(table, bounds, false);
}

std::string stats_csv(std::span<const YearlyReport> reports) {
  std::string out =
      "year,hours,mean_price_eur_mwh,std_price_eur_mwh,min_price_eur_mwh,max_price_eur_mwh,"
      "negative_hours,peak_base_spread_eur_mwh";
  for (const char* m : kShareMetrics) {
    const std::string metric = m;
    out += ',' + metric + "_vw_mean," + metric + "_min," + metric + "_max";
  }
  out += '\n';
  for (const auto& r : reports) {
    out += std::to_string(r.year) + ',' + std::to_string(r.prices.hours) + ',' +
           format_double(r.prices.mean) + ',' + format_double(r.prices.std) + ',' +
           format_double(r.prices.min) + ',' + format_double(r.prices.max) + ',' +
           std::to_string(r.prices.negative_hours) + ',' + format_double(r.peak_base_spread);
    for (const auto& s : r.shares) {
      out += ',' + format_double(s.vw_mean) + ',' + format_double(s.min) + ',' +
             format_double(s.max);
    }
    out += '\n';
  }
  return out;
}

std::string histogram_csv(const Histogram& histogram) {
  std::string out = "bin_lo,bin_hi,count\n";
  for (const auto& b : histogram.bins) {
    out += format_double(b.lo) + ',' + format_double(b.hi) + ',' + std::to_string(b.count) + '\n';
  }
  return out;
}

}  // namespace meritorder

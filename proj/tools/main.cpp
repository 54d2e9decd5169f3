// meritorder: command-line driver for synthesis, clearing, sweeps and reports.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "meritorder/counterfactual.hpp"
#include "meritorder/csv.hpp"
#include "meritorder/io.hpp"
#include "meritorder/manifest.hpp"
#include "meritorder/stats.hpp"
#include "meritorder/synth.hpp"

namespace fs = std::filesystem;
using namespace meritorder;
using nlohmann::ordered_json;

namespace {

struct Globals {
  std::string config;
  std::string out;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::string curve_mode = "linear";
  std::optional<std::uint64_t> seed;
};

ClearingOptions clearing_options(const Globals& g) {
  ClearingOptions opts;
  opts.mode = parse_interpolation_mode(g.curve_mode);
  return opts;
}

fs::path require_out(const Globals& g) {
  if (g.out.empty()) throw ConfigError("--out is required");
  fs::create_directories(g.out);
  return g.out;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

std::vector<std::pair<std::string, std::string>> corpus_digests(const fs::path& dir) {
  return {{std::string(kHourlyFile), sha256_file(dir / kHourlyFile)},
          {std::string(kCurvesFile), sha256_file(dir / kCurvesFile)}};
}

void set_span(RunManifest& m, const std::vector<HourlyMarketRecord>& records) {
  if (records.empty()) return;
  m.data_start = format_iso8601(records.front().hour_start);
  m.data_end = format_iso8601(records.back().hour_start);
}

// -- synth -----------------------------------------------------------------

int cmd_synth(const Globals& g, bool no_calibrate) {
  SynthConfig config;
  if (!g.config.empty()) config = parse_synth_json(csv::read_text(g.config));
  if (g.seed) config.params.seed = *g.seed;
  if (no_calibrate) config.calibrate = false;
  const auto opts = clearing_options(g);
  const auto out = require_out(g);

  std::vector<std::string> warnings;
  if (config.calibrate) {
    const auto cal = calibrate(config.params, config.targets, opts);
    config.params = cal.params;
    std::cerr << "calibrated in " << cal.iterations << " iteration(s): market/load "
              << cal.shares.market_load << ", res/load " << cal.shares.res_load << ", res/market "
              << cal.shares.res_market << '\n';
  }
  const auto records = generate_year(config.params, opts);
  write_corpus(out, records);

  RawSeries load{"load_mwh", 60, {}};
  RawSeries wind{"wind_mwh", 60, {}};
  RawSeries pv{"pv_mwh", 60, {}};
  for (const auto& r : records) {
    load.samples.push_back({r.hour_start, 0, r.load_mwh});
    wind.samples.push_back({r.hour_start, 0, r.wind_mwh});
    pv.samples.push_back({r.hour_start, 0, r.pv_mwh});
  }
  csv::write_text(out / "load.csv", series_csv(load));
  csv::write_text(out / "wind.csv", series_csv(wind));
  csv::write_text(out / "pv.csv", series_csv(pv));
  const auto params_json = synth_json(config);
  csv::write_text(out / "synth_params.json", params_json);

  RunManifest m;
  m.command = "synth";
  ordered_json cfg = ordered_json::parse(params_json);
  cfg["curve_mode"] = g.curve_mode;
  m.config = cfg.dump();
  if (!g.config.empty()) m.inputs.emplace_back(fs::path(g.config).filename().string(), sha256_file(g.config));
  m.seed = config.params.seed;
  m.rng_algorithm = std::string(kSynthRngAlgorithm);
  m.warnings = warnings;
  set_span(m, records);
  write_manifest(out, m,
                 {std::string(kHourlyFile), std::string(kCurvesFile), "load.csv", "wind.csv",
                  "pv.csv", "synth_params.json"});
  std::cout << "wrote " << records.size() << " hours to " << out.string() << '\n';
  return 0;
}

// -- ingest ----------------------------------------------------------------

struct IngestArgs {
  std::string input;
  SeriesSchema schema;
  bool dst = false;
  std::optional<double> official_total;
};

int cmd_ingest(const Globals& g, const IngestArgs& a) {
  if (a.input.empty()) throw ConfigError("--input is required");
  if (!fs::is_regular_file(a.input)) throw ConfigError("missing file '" + a.input + "'");
  const auto out = require_out(g);
  std::vector<std::string> warnings;
  auto series = parse_series(a.input, a.schema);
  std::cerr << "read " << series.samples.size() << " rows from " << a.input << '\n';
  if (series.resolution_minutes == 15) series = downsample_quarter_hourly(series, &warnings);
  if (a.dst) series = normalize_dst(series, &warnings);
  if (a.official_total) series = rescale_to_annual_total(series, *a.official_total);
  print_warnings(warnings);

  const std::string file = series.name + ".csv";
  csv::write_text(out / file, series_csv(series));

  RunManifest m;
  m.command = "ingest";
  ordered_json cfg;
  cfg["timestamp_column"] = a.schema.timestamp_column;
  cfg["value_column"] = a.schema.value_column;
  cfg["name"] = series.name;
  cfg["resolution_minutes"] = a.schema.resolution_minutes;
  cfg["dst"] = a.dst;
  cfg["official_total"] = a.official_total ? ordered_json(*a.official_total) : ordered_json();
  m.config = cfg.dump();
  m.inputs.emplace_back(fs::path(a.input).filename().string(), sha256_file(a.input));
  m.warnings = warnings;
  m.data_start = format_iso8601(series.samples.front().time, series.samples.front().utc_offset_minutes);
  m.data_end = format_iso8601(series.samples.back().time, series.samples.back().utc_offset_minutes);
  write_manifest(out, m, {file});
  std::cout << "wrote " << series.samples.size() << " hourly values to " << (out / file).string()
            << '\n';
  return 0;
}

// -- clear -----------------------------------------------------------------

int cmd_clear(const Globals& g, const std::string& corpus, std::vector<std::string> scenarios) {
  if (corpus.empty()) throw ConfigError("--corpus is required");
  if (scenarios.empty() && !g.config.empty()) scenarios.push_back(g.config);
  std::vector<ScenarioConfig> configs;
  for (const auto& path : scenarios) configs.push_back(load_scenario(path));
  if (configs.empty()) configs.emplace_back();  // baseline
  const auto records = read_corpus(corpus);
  const auto out = require_out(g);
  const RunOptions run_opts{clearing_options(g), g.jobs};

  RunManifest m;
  m.command = "clear";
  ordered_json cfg;
  cfg["curve_mode"] = g.curve_mode;
  cfg["scenarios"] = ordered_json::array();
  std::vector<std::string> files;
  for (const auto& config : configs) {
    const auto run = run_scenario(records, config, run_opts);
    for (const auto& issue : run.warnings) {
      m.warnings.push_back(config.name + " " + format_iso8601(records[issue.hour_index].hour_start) +
                           ": " + issue.message);
    }
    for (const auto& issue : run.errors) {
      m.warnings.push_back(config.name + " " + format_iso8601(records[issue.hour_index].hour_start) +
                           " failed: " + issue.message);
    }
    const std::string file = "clearing_" + config.name + ".csv";
    csv::write_text(out / file, clearing_csv(records, run.results));
    files.push_back(file);
    cfg["scenarios"].push_back(ordered_json::parse(scenario_json(config)));
    std::size_t negative = 0;
    for (const auto& r : run.results) negative += counts_as_price(r) && r.price < 0.0;
    std::cout << config.name << ": " << records.size() << " hours, " << negative
              << " negative, " << run.errors.size() << " failed\n";
  }
  print_warnings(m.warnings);
  m.config = cfg.dump();
  m.inputs = corpus_digests(corpus);
  for (const auto& path : scenarios) {
    m.inputs.emplace_back(fs::path(path).filename().string(), sha256_file(path));
  }
  set_span(m, records);
  write_manifest(out, m, files);
  return 0;
}

// -- sweep -----------------------------------------------------------------

int cmd_sweep(const Globals& g, const std::string& corpus, const std::vector<std::string>& cost_text,
              const std::vector<std::string>& mode_text) {
  if (corpus.empty()) throw ConfigError("--corpus is required");
  std::vector<MarginalCost> costs;
  for (const auto& c : cost_text) {
    const auto cost = MarginalCost::parse(c);
    if (!cost.is_floor() && cost.value() < 0.0) throw ConfigError("costs must be >= 0 or 'floor'");
    costs.push_back(cost);
  }
  if (costs.empty()) throw ConfigError("--costs is empty");
  std::vector<ScenarioMode> modes;
  for (const auto& m : mode_text) {
    modes.push_back(parse_scenario_mode(m));
    if (modes.back() == ScenarioMode::baseline) throw ConfigError("sweep mode cannot be baseline");
  }
  ScenarioConfig base;
  if (!g.config.empty()) base = load_scenario(g.config);
  const auto records = read_corpus(corpus);
  const auto out = require_out(g);
  const RunOptions run_opts{clearing_options(g), g.jobs};

  std::vector<std::string> files;
  ordered_json cfg;
  cfg["curve_mode"] = g.curve_mode;
  cfg["costs"] = cost_text;
  cfg["modes"] = ordered_json::array();
  for (auto mode : modes) {
    const auto table = sensitivity_sweep(records, costs, mode, run_opts, base);
    const std::string tag(to_string(mode));
    csv::write_text(out / ("sweep_mean_" + tag + ".csv"), sweep_mean_csv(table));
    csv::write_text(out / ("sweep_std_" + tag + ".csv"), sweep_std_csv(table));
    files.push_back("sweep_mean_" + tag + ".csv");
    files.push_back("sweep_std_" + tag + ".csv");
    cfg["modes"].push_back(tag);
    std::cout << "sweep " << tag << ": " << table.rows.size() << " costs x " << table.years.size()
              << " year(s)\n";
  }
  cfg["pool_multiplier"] = base.pool_multiplier;

  RunManifest m;
  m.command = "sweep";
  m.config = cfg.dump();
  m.inputs = corpus_digests(corpus);
  if (!g.config.empty()) m.inputs.emplace_back(fs::path(g.config).filename().string(), sha256_file(g.config));
  set_span(m, records);
  write_manifest(out, m, files);
  return 0;
}

// -- stats -----------------------------------------------------------------

int cmd_stats(const Globals& g, const std::string& corpus, const std::string& results_path,
              double bin_width) {
  if (corpus.empty()) throw ConfigError("--corpus is required");
  if (fs::is_regular_file(fs::path(corpus) / kHourlyFile)) {
    const auto table = csv::read_file(fs::path(corpus) / kHourlyFile);
    if (table.rows.empty()) throw ConfigError("empty input: " + (fs::path(corpus) / kHourlyFile).string());
  }
  const auto records = read_corpus(corpus);

  std::string scenario = "baseline";
  std::vector<ClearingResult> results;
  results.reserve(records.size());
  if (results_path.empty()) {
    for (const auto& r : records) {
      const auto status = r.cleared_volume_mwh > 0.0 ? ClearingStatus::cleared : ClearingStatus::no_trade;
      results.push_back({r.realized_price_eur, r.cleared_volume_mwh, status, r.realized_price_eur,
                         r.realized_price_eur});
    }
  } else {
    const auto rows = read_clearing_csv(results_path);
    if (rows.size() != records.size()) {
      throw DataError(results_path + ": " + std::to_string(rows.size()) + " rows for " +
                      std::to_string(records.size()) + " corpus hours");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].hour != records[i].hour_start) {
        throw DataError(results_path + ": hour " + format_iso8601(rows[i].hour) +
                        " does not match corpus hour " + format_iso8601(records[i].hour_start));
      }
      results.push_back(rows[i].result);
    }
    scenario = fs::path(results_path).stem().string();
    if (scenario.starts_with("clearing_")) scenario = scenario.substr(9);
  }

  const auto out = require_out(g);
  const auto reports = yearly_reports(records, results, {}, bin_width);
  std::vector<std::string> files;
  const std::string stats_file = "stats_" + scenario + ".csv";
  csv::write_text(out / stats_file, stats_csv(reports));
  files.push_back(stats_file);

  std::vector<std::string> warnings;
  for (const char* metric : kShareMetrics) {
    const auto shares = share_metric(records, results, metric);
    if (shares.ratios.empty()) throw DataError(std::string(metric) + ": no hour with a positive denominator");
    auto hist = ratio_histogram(shares.ratios, bin_width);
    if (!shares.excluded_hours.empty()) {
      warnings.push_back(std::string(metric) + ": excluded " +
                         std::to_string(shares.excluded_hours.size()) +
                         " hour(s) with zero denominator");
    }
    if (shares.exceeds_one) warnings.push_back(std::string(metric) + ": some hourly ratios exceed 1");
    const std::string file = "hist_" + std::string(metric) + ".csv";
    csv::write_text(out / file, histogram_csv(hist));
    files.push_back(file);
  }
  print_warnings(warnings);

  for (const auto& r : reports) {
    std::cout << r.year << ": mean " << r.prices.mean << " EUR/MWh, std " << r.prices.std << ", "
              << r.prices.negative_hours << " negative hour(s)";
    for (const auto& s : r.shares) std::cout << ", " << s.label << ' ' << s.vw_mean;
    std::cout << '\n';
  }

  RunManifest m;
  m.command = "stats";
  ordered_json cfg;
  cfg["scenario"] = scenario;
  cfg["bin_width"] = bin_width;
  m.config = cfg.dump();
  m.inputs = corpus_digests(corpus);
  if (!results_path.empty()) {
    m.inputs.emplace_back(fs::path(results_path).filename().string(), sha256_file(results_path));
  }
  m.warnings = warnings;
  set_span(m, records);
  write_manifest(out, m, files);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Day-ahead auction clearing and renewable repricing scenarios"};
  app.set_version_flag("--version", std::string(MERITORDER_VERSION));
  app.require_subcommand(1);

  Globals g;
  app.add_option("--config", g.config, "JSON configuration for the command");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--jobs", g.jobs, "Worker threads for per-hour clearing")->check(CLI::PositiveNumber);
  app.add_option("--curve-mode", g.curve_mode, "Curve interpolation")
      ->check(CLI::IsMember({"linear", "step"}));
  app.add_option("--seed", g.seed, "Random seed (synth)");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  bool no_calibrate = false;
  synth->add_flag("--no-calibrate", no_calibrate, "Use the parameters as given");

  auto* ingest = app.add_subcommand("ingest", "Harmonize a feed-in or load series to hourly values");
  IngestArgs ia;
  ingest->add_option("--input", ia.input, "CSV file")->required();
  ingest->add_option("--timestamp-column", ia.schema.timestamp_column, "Timestamp column name");
  ingest->add_option("--value-column", ia.schema.value_column, "Value column name");
  ingest->add_option("--name", ia.schema.name, "Series name (output file stem)");
  ingest->add_option("--resolution", ia.schema.resolution_minutes, "Input resolution in minutes")
      ->check(CLI::IsMember({15, 60}));
  ingest->add_flag("--dst", ia.dst, "Normalize daylight-saving anomalies");
  ingest->add_option("--official-total", ia.official_total, "Rescale to this total (MWh)");

  auto* clear_cmd = app.add_subcommand("clear", "Re-clear every hour under scenarios");
  std::string corpus;
  std::vector<std::string> scenarios;
  clear_cmd->add_option("--corpus", corpus, "Corpus directory")->required();
  clear_cmd->add_option("--scenario", scenarios, "Scenario JSON (repeatable)");

  auto* sweep = app.add_subcommand("sweep", "Marginal-cost sensitivity tables");
  std::vector<std::string> costs{"floor", "0", "5", "10", "15", "20", "25"};
  std::vector<std::string> modes{"both"};
  sweep->add_option("--corpus", corpus, "Corpus directory")->required();
  sweep->add_option("--costs", costs, "Costs in EUR/MWh or 'floor'")->delimiter(',');
  sweep->add_option("--mode", modes, "windOnly, pvOnly or both")->delimiter(',');

  auto* stats = app.add_subcommand("stats", "Price statistics, share metrics and histograms");
  std::string results_path;
  double bin_width = kDefaultBinWidth;
  stats->add_option("--corpus", corpus, "Corpus directory")->required();
  stats->add_option("--results", results_path, "clearing_<scenario>.csv (default: realized prices)");
  stats->add_option("--bin-width", bin_width, "Histogram bin width")->check(CLI::PositiveNumber);

  for (auto* sub : {synth, ingest, clear_cmd, sweep, stats}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*synth) return cmd_synth(g, no_calibrate);
    if (*ingest) return cmd_ingest(g, ia);
    if (*clear_cmd) return cmd_clear(g, corpus, scenarios);
    if (*sweep) return cmd_sweep(g, corpus, costs, modes);
    if (*stats) return cmd_stats(g, corpus, results_path, bin_width);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}

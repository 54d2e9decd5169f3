#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "meritorder/csv.hpp"
#include "meritorder/io.hpp"
#include "meritorder/manifest.hpp"

using namespace meritorder;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("meritorder_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<HourlyMarketRecord> two_days() {
  auto records = generate_year({});
  records.erase(records.begin() + 48, records.end());
  return records;
}

}  // namespace

TEST_CASE("csv parsing") {
  const auto t = csv::parse("a,b\n1,\"x,y\"\n\n2,z\n", "mem");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].fields[1] == "x,y");
  CHECK(t.rows[1].line == 4);
  CHECK(t.require_column("b", "mem") == 1);
  CHECK_THROWS_AS(t.require_column("c", "mem"), DataError);
  CHECK_THROWS_AS(csv::parse("a,b\n1\n", "mem"), DataError);
  CHECK_THROWS_AS(csv::parse("", "mem"), DataError);
  CHECK(csv::format_double(0.1) == "0.1");
  CHECK(csv::format_double(-3000) == "-3000");
  CHECK(csv::to_double("1e3", "mem", 1) == 1000);
  CHECK_THROWS_AS(csv::to_double("1,5", "mem", 1), DataError);
}

TEST_CASE("corpus round trip") {
  const auto dir = scratch("corpus");
  const auto records = two_days();
  write_corpus(dir, records);
  const auto back = read_corpus(dir);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(back[i].hour_start == records[i].hour_start);
    CHECK(back[i].load_mwh == records[i].load_mwh);
    CHECK(back[i].wind_mwh == records[i].wind_mwh);
    CHECK(back[i].pv_mwh == records[i].pv_mwh);
    CHECK(back[i].cleared_volume_mwh == records[i].cleared_volume_mwh);
    CHECK(back[i].realized_price_eur == records[i].realized_price_eur);
    CHECK(back[i].supply == records[i].supply);
    CHECK(back[i].demand == records[i].demand);
  }
  fs::remove(dir / kCurvesFile);
  CHECK_THROWS_AS(read_corpus(dir), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("malformed corpus is a data error") {
  const auto dir = scratch("bad_corpus");
  write_corpus(dir, two_days());
  csv::write_text(dir / kCurvesFile, "hour,side,price_eur_mwh,block_volume_mwh\n"
                                     "2011-01-01T00:00:00Z,supply,10,-5\n");
  CHECK_THROWS_AS(read_corpus(dir), DataError);
  fs::remove_all(dir);
}

TEST_CASE("scenario JSON") {
  const auto c = parse_scenario_json(
      R"({"c_wind": 25, "c_pv": "floor", "mode": "windOnly", "pool_multiplier": 2,
          "otc_bands": [[10, 0.5], {"price_eur": 30, "volume_share": 0.5}]})",
      "s1");
  CHECK(c.name == "s1");
  CHECK(c.wind_cost == MarginalCost::eur(25));
  CHECK(c.pv_cost.is_floor());
  CHECK(c.mode == ScenarioMode::wind_only);
  CHECK(c.pool_multiplier == 2);
  CHECK(c.otc_bands == std::vector<OtcBand>{{10, 0.5}, {30, 0.5}});

  const auto again = parse_scenario_json(scenario_json(c), "s1");
  CHECK(again.wind_cost == c.wind_cost);
  CHECK(again.otc_bands == c.otc_bands);
  CHECK(again.mode == c.mode);

  CHECK(parse_scenario_json(R"({"c_wind": 25})", "x").mode == ScenarioMode::both);
  CHECK(parse_scenario_json(R"({"pool_multiplier": 2})", "x").mode == ScenarioMode::baseline);
  CHECK_THROWS_AS(parse_scenario_json(R"({"c_hydro": 3})", "x"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_json(R"({"c_wind": "cheap"})", "x"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_json("{", "x"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_json(R"({"mode": "tidal"})", "x"), ConfigError);
}

TEST_CASE("synth JSON") {
  const auto c = parse_synth_json(R"({"seed": 7, "wind_capacity_mw": 1000, "calibrate": false})");
  CHECK(c.params.seed == 7);
  CHECK(c.params.wind_capacity_mw == 1000);
  CHECK_FALSE(c.calibrate);
  const auto again = parse_synth_json(synth_json(c));
  CHECK(again.params.seed == 7);
  CHECK(again.params.merit_stack.size() == c.params.merit_stack.size());
  CHECK_THROWS_AS(parse_synth_json(R"({"seed": "abc"})"), ConfigError);
  CHECK_THROWS_AS(parse_synth_json(R"({"seed": -1})"), ConfigError);
  CHECK_THROWS_AS(parse_synth_json(R"({"seed": 1.5})"), ConfigError);
  CHECK_THROWS_AS(parse_synth_json(R"({"colour": 1})"), ConfigError);
}

TEST_CASE("clearing CSV round trip") {
  const auto dir = scratch("clearing");
  const auto records = two_days();
  std::vector<ClearingResult> results;
  for (const auto& r : records) results.push_back(clear(r.demand, r.supply));
  results[3] = {std::nan(""), 0.0, ClearingStatus::failed, std::nan(""), std::nan("")};
  const auto text = clearing_csv(records, results);
  CHECK(text.rfind("hour,price_eur_mwh,volume_mwh,status\n", 0) == 0);
  CHECK(text.find(",nan,") != std::string::npos);
  csv::write_text(dir / "clearing_x.csv", text);
  const auto rows = read_clearing_csv(dir / "clearing_x.csv");
  REQUIRE(rows.size() == records.size());
  CHECK(rows[0].hour == records[0].hour_start);
  CHECK(rows[0].result.price == results[0].price);
  CHECK(rows[0].result.volume == results[0].volume);
  CHECK(rows[0].result.status == results[0].status);
  CHECK(rows[3].result.status == ClearingStatus::failed);
  CHECK(std::isnan(rows[3].result.price));
  fs::remove_all(dir);
}

TEST_CASE("sweep table layout") {
  SweepTable t;
  t.years = {2010, 2011};
  t.rows.push_back({MarginalCost::floor(), {{40, 4, 10}, {41, 5, 10}}});
  t.rows.push_back({MarginalCost::eur(5), {{42.5, 3, 10}, {43, 2, 10}}});
  CHECK(sweep_mean_csv(t) == "marginal_cost_eur_mwh,2010,2011\n-3000,40,41\n5,42.5,43\n");
  CHECK(sweep_std_csv(t) == "marginal_cost_eur_mwh,2010,2011\n-3000,4,5\n5,3,2\n");
}

TEST_CASE("histogram CSV") {
  const auto h = ratio_histogram(std::vector<double>{0.12, 0.31}, 0.05);
  const auto text = histogram_csv(h);
  CHECK(text.rfind("bin_lo,bin_hi,count\n0,0.05,0\n0.05,0.1,0\n0.1,0.15,1\n", 0) == 0);
}

TEST_CASE("SHA-256 digests") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  const auto dir = scratch("sha");
  csv::write_text(dir / "abc.txt", "abc");
  CHECK(sha256_file(dir / "abc.txt") == sha256_hex("abc"));
  fs::remove_all(dir);
}

TEST_CASE("manifest content") {
  const auto dir = scratch("manifest");
  csv::write_text(dir / "out.csv", "a\n1\n");
  RunManifest m;
  m.command = "clear";
  m.config = R"({"mode":"both"})";
  m.inputs = {{"hourly.csv", sha256_hex("x")}};
  m.seed = 42;
  write_manifest(dir, m, {"out.csv"});
  const auto j = nlohmann::json::parse(csv::read_text(dir / kManifestFile));
  CHECK(j["command"] == "clear");
  CHECK(j["config_hash"] == sha256_hex(m.config));
  CHECK(j["output_digests"]["out.csv"] == sha256_hex("a\n1\n"));
  CHECK(j["input_digests"]["hourly.csv"] == sha256_hex("x"));
  CHECK(j["seed"] == 42);
  CHECK(j["version"] == MERITORDER_VERSION);
  CHECK(j["timestamps"].contains("created"));
  fs::remove_all(dir);
}

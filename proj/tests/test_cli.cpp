#include <doctest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <string>

#include "meritorder/csv.hpp"
#include "meritorder/io.hpp"

using namespace meritorder;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "meritorder_test_cli";

int run(const std::string& args) {
  const std::string cmd =
      "SOURCE_DATE_EPOCH=1700000000 '" MERITORDER_CLI "' " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t lines(const fs::path& file) {
  const auto text = csv::read_text(file);
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

// Synthesizes the shared corpus once.
const fs::path& corpus() {
  static const fs::path dir = [] {
    fs::remove_all(kRoot);
    fs::create_directories(kRoot);
    const auto d = kRoot / "corpus";
    REQUIRE(run("synth --out '" + d.string() + "' --seed 42") == 0);
    return d;
  }();
  return dir;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run("--help") == 0);
  CHECK(run("--version") == 0);
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("synth --bogus") == 2);
  CHECK(run("synth --out x --curve-mode cubic") == 2);
}

TEST_CASE("synth writes a full year and a manifest") {
  const auto& d = corpus();
  CHECK(lines(d / "hourly.csv") == 8761);
  CHECK(lines(d / "load.csv") == 8761);
  CHECK(lines(d / "wind.csv") == 8761);
  CHECK(lines(d / "pv.csv") == 8761);
  CHECK(fs::exists(d / "manifest.json"));
}

TEST_CASE("synth rejects a bad seed type") {
  const auto cfg = kRoot / "bad_seed.json";
  csv::write_text(cfg, R"({"seed": "forty-two"})");
  CHECK(run("synth --config " + q(cfg) + " --out " + q(kRoot / "bad")) == 2);
}

TEST_CASE("synth rerun gives identical digests") {
  const auto& d = corpus();
  const auto again = kRoot / "corpus_again";
  REQUIRE(run("synth --out " + q(again) + " --seed 42") == 0);
  for (const char* f : {"hourly.csv", "curves.csv", "manifest.json"}) {
    CHECK(csv::read_text(d / f) == csv::read_text(again / f));
  }
  fs::remove_all(again);
}

TEST_CASE("clear: statuses, floor identity and the 25 EUR scenario") {
  const auto& d = corpus();
  const auto floor_cfg = kRoot / "floor.json";
  const auto res25 = kRoot / "res25.json";
  csv::write_text(floor_cfg, R"({"mode": "both", "c_wind": "floor", "c_pv": "floor"})");
  csv::write_text(res25, R"({"mode": "both", "c_wind": 25, "c_pv": 25})");
  const auto out = kRoot / "clear";
  REQUIRE(run("clear --corpus " + q(d) + " --out " + q(out) + " --jobs 3") == 0);
  REQUIRE(run("clear --corpus " + q(d) + " --out " + q(out) + " --scenario " + q(floor_cfg) +
              " --scenario " + q(res25)) == 0);

  const auto base = read_clearing_csv(out / "clearing_baseline.csv");
  REQUIRE(base.size() == 8760);
  const std::set<ClearingStatus> allowed{ClearingStatus::cleared, ClearingStatus::boundary_floor,
                                         ClearingStatus::boundary_cap, ClearingStatus::no_trade};
  for (const auto& row : base) CHECK(allowed.count(row.result.status) == 1);

  CHECK(csv::read_text(out / "clearing_floor.csv") == csv::read_text(out / "clearing_baseline.csv"));

  int negative = 0;
  for (const auto& row : read_clearing_csv(out / "clearing_res25.csv")) {
    negative += row.result.status == ClearingStatus::cleared && row.result.price < 0;
  }
  CHECK(negative == 0);
}

TEST_CASE("clear: missing or broken inputs") {
  const auto broken = kRoot / "broken";
  fs::create_directories(broken);
  fs::copy_file(corpus() / "hourly.csv", broken / "hourly.csv", fs::copy_options::overwrite_existing);
  CHECK(run("clear --corpus " + q(broken) + " --out " + q(kRoot / "o1")) == 2);
  csv::write_text(broken / "curves.csv", "hour,side,price_eur_mwh,block_volume_mwh\n"
                                         "2011-01-01T00:00:00Z,supply,10,-5\n");
  CHECK(run("clear --corpus " + q(broken) + " --out " + q(kRoot / "o1")) == 3);
  CHECK(run("clear --corpus " + q(corpus()) + " --out " + q(kRoot / "o1") + " --scenario " +
            q(kRoot / "nope.json")) == 2);
}

TEST_CASE("sweep: layout, monotone means and bad modes") {
  const auto out = kRoot / "sweep";
  REQUIRE(run("sweep --corpus " + q(corpus()) + " --out " + q(out) + " --costs 10 --mode pvOnly") == 0);
  const auto single = csv::read_file(out / "sweep_mean_pvOnly.csv");
  CHECK(single.header == std::vector<std::string>{"marginal_cost_eur_mwh", "2011"});
  CHECK(single.rows.size() == 1);

  REQUIRE(run("sweep --corpus " + q(corpus()) + " --out " + q(out) + " --mode both") == 0);
  const auto table = csv::read_file(out / "sweep_mean_both.csv");
  REQUIRE(table.rows.size() == 7);
  CHECK(table.rows[0].fields[0] == "-3000");
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    CHECK(std::stod(table.rows[i].fields[1]) >= std::stod(table.rows[i - 1].fields[1]));
  }
  CHECK(fs::exists(out / "sweep_std_both.csv"));
  CHECK(run("sweep --corpus " + q(corpus()) + " --out " + q(out) + " --mode hydro") == 2);
  CHECK(run("sweep --corpus " + q(corpus()) + " --out " + q(out) + " --costs cheap") == 2);
  CHECK(run("sweep --corpus " + q(corpus()) + " --out " + q(out) + " --costs -5") == 2);
}

TEST_CASE("stats: reports, histograms and empty input") {
  const auto out = kRoot / "stats";
  REQUIRE(run("stats --corpus " + q(corpus()) + " --out " + q(out)) == 0);
  const auto stats = csv::read_file(out / "stats_baseline.csv");
  REQUIRE(stats.rows.size() == 1);
  const auto col = stats.require_column("market_load_vw_mean", "stats");
  CHECK(std::abs(std::stod(stats.rows[0].fields[col]) - 0.358) <= 0.02);
  std::size_t total = 0;
  for (const auto& row : csv::read_file(out / "hist_market_load.csv").rows) {
    total += std::stoul(row.fields[2]);
  }
  CHECK(total == 8760);

  const auto flat = kRoot / "flat";
  fs::create_directories(flat);
  csv::write_text(flat / "hourly.csv",
                  "timestamp,load_mwh,wind_mwh,pv_mwh,volume_mwh,price_eur_mwh\n");
  csv::write_text(flat / "curves.csv", "hour,side,price_eur_mwh,block_volume_mwh\n");
  CHECK(run("stats --corpus " + q(flat) + " --out " + q(kRoot / "o2")) == 2);
}

TEST_CASE("ingest harmonizes a quarter-hour file") {
  const auto in = kRoot / "quarters.csv";
  csv::write_text(in, "time,mw\n2011-01-01T00:00:00Z,1\n2011-01-01T00:15:00Z,2\n"
                      "2011-01-01T00:30:00Z,3\n2011-01-01T00:45:00Z,4\n");
  const auto out = kRoot / "ingest";
  REQUIRE(run("ingest --input " + q(in) + " --timestamp-column time --value-column mw --name load "
              "--resolution 15 --out " + q(out)) == 0);
  const auto t = csv::read_file(out / "load.csv");
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].fields[1] == "10");
  CHECK(run("ingest --input " + q(kRoot / "absent.csv") + " --out " + q(out)) != 0);
}

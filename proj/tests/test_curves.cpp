#include <doctest.h>

#include <random>
#include <vector>

#include "meritorder/curves.hpp"
#include "oracles.hpp"

using namespace meritorder;

namespace {

std::vector<CurvePoint> pts(const AuctionCurve& c) { return {c.points().begin(), c.points().end()}; }

AuctionCurve supply_0_5_10_10() { return build_curve(std::vector<Bid>{{10, 5}, {0, 5}}, Side::supply); }

}  // namespace

TEST_CASE("build_curve sorts and accumulates supply bids") {
  const auto c = supply_0_5_10_10();
  CHECK(pts(c) == std::vector<CurvePoint>{{0, 5}, {10, 10}});
  CHECK(c.side() == Side::supply);
}

TEST_CASE("build_curve merges equal prices") {
  const auto c = build_curve(std::vector<Bid>{{10, 3}, {10, 7}}, Side::supply);
  CHECK(pts(c) == std::vector<CurvePoint>{{10, 10}});
}

TEST_CASE("build_curve sorts demand descending") {
  const auto c = build_curve(std::vector<Bid>{{50, 2}, {100, 3}}, Side::demand);
  CHECK(pts(c) == std::vector<CurvePoint>{{100, 3}, {50, 5}});
}

TEST_CASE("build_curve rejects bad input") {
  CHECK_THROWS_AS(build_curve(std::vector<Bid>{}, Side::supply), DataError);
  CHECK_THROWS_AS(build_curve(std::vector<Bid>{{1, 0}}, Side::supply), DataError);
  CHECK_THROWS_AS(build_curve(std::vector<Bid>{{1, -2}}, Side::supply), DataError);
  CHECK_THROWS_AS(build_curve(std::vector<Bid>{{3001, 1}}, Side::supply), DataError);
  CHECK_THROWS_AS(build_curve(std::vector<Bid>{{-3001, 1}}, Side::demand), DataError);
  const CurveLimits tiny{{}, 2};
  CHECK_THROWS_AS(build_curve(std::vector<Bid>{{1, 1}, {2, 1}, {3, 1}}, Side::supply, tiny),
                  DataError);
}

TEST_CASE("from_points validates ordering") {
  CHECK_NOTHROW(AuctionCurve::from_points(Side::supply, {{0, 0}, {100, 100}}));
  CHECK_THROWS_AS(AuctionCurve::from_points(Side::supply, {{10, 5}, {0, 10}}), DataError);
  CHECK_THROWS_AS(AuctionCurve::from_points(Side::demand, {{0, 5}, {10, 10}}), DataError);
  CHECK_THROWS_AS(AuctionCurve::from_points(Side::supply, {{0, 5}, {10, 5}}), DataError);
  CHECK_THROWS_AS(AuctionCurve::from_points(Side::supply, {}), DataError);
}

TEST_CASE("volume_at_price on a two-point supply curve") {
  const auto c = supply_0_5_10_10();
  CHECK(volume_at_price(c, 5, InterpolationMode::linear) == 7.5);
  CHECK(volume_at_price(c, 5, InterpolationMode::step) == 5);
  CHECK(volume_at_price(c, 11, InterpolationMode::linear) == 10);
  CHECK(volume_at_price(c, 3000, InterpolationMode::step) == 10);
  CHECK(volume_at_price(c, -1, InterpolationMode::linear) == 0);
  // right-continuous at the jump
  CHECK(volume_at_price(c, 0, InterpolationMode::step) == 5);
  CHECK(volume_below(c, 0, InterpolationMode::step) == 0);
  CHECK(volume_below(c, 10, InterpolationMode::step) == 5);
  CHECK(volume_below(c, 10, InterpolationMode::linear) == 10);
}

TEST_CASE("demand is left-continuous") {
  const auto d = build_curve(std::vector<Bid>{{50, 2}, {100, 3}}, Side::demand);
  CHECK(volume_at_price(d, 100, InterpolationMode::step) == 3);
  CHECK(volume_above(d, 100, InterpolationMode::step) == 0);
  CHECK(volume_at_price(d, 75, InterpolationMode::step) == 3);
  CHECK(volume_at_price(d, 75, InterpolationMode::linear) == 4);
  CHECK(volume_at_price(d, 10, InterpolationMode::linear) == 5);
  CHECK(volume_above(d, 50, InterpolationMode::step) == 3);
}

TEST_CASE("one-sided limits across a vertical segment") {
  const auto s = AuctionCurve::from_points(Side::supply, {{0, 5}, {10, 8}, {10, 12}, {20, 15}});
  CHECK(volume_below(s, 10, InterpolationMode::step) == 5);
  CHECK(volume_below(s, 10, InterpolationMode::linear) == 8);
  CHECK(volume_at_price(s, 10, InterpolationMode::step) == 12);
  CHECK(volume_at_price(s, 10, InterpolationMode::linear) == 12);
}

TEST_CASE("scale_volume") {
  const auto c = supply_0_5_10_10();
  CHECK(scale_volume(c, 1.0) == c);
  CHECK(pts(scale_volume(c, 2.0)) == std::vector<CurvePoint>{{0, 10}, {10, 20}});
  CHECK_THROWS_AS(scale_volume(c, 0.0), ConfigError);
  CHECK_THROWS_AS(scale_volume(c, -1.0), ConfigError);
}

TEST_CASE("average_slope examples") {
  const auto c = AuctionCurve::from_points(Side::supply, {{0, 0}, {100, 100}});
  CHECK(average_slope(c, {0, 100}).dp_dv == 1.0);
  CHECK(average_slope(scale_volume(c, 2.0), {0, 200}).dp_dv == 0.5);
  CHECK_THROWS_AS(average_slope(c, {50, 50}), DataError);
  CHECK_THROWS_AS(average_slope(c, {0, 101}), DataError);

  // three segments: slopes 0.5, 2 and 0.25
  const std::vector<CurvePoint> three{{0, 0}, {10, 20}, {30, 30}, {40, 70}};
  const auto t = AuctionCurve::from_points(Side::supply, three);
  for (const VolumeWindow w : {VolumeWindow{0, 70}, {5, 25}, {12, 65}, {20, 30}, {29, 31}}) {
    const double exact = average_slope(t, w).dp_dv;
    CHECK(exact == doctest::Approx(oracle::finite_difference_slope(three, w.lo, w.hi)).epsilon(1e-9));
  }
  CHECK(average_slope(t, {5, 25}).dp_dv == doctest::Approx((20.0 - 2.5) / 20.0));
}

TEST_CASE("price_at_volume inverts volume_at_price") {
  const auto c = supply_0_5_10_10();
  CHECK(price_at_volume(c, 7.5, InterpolationMode::linear) == 5);
  CHECK(price_at_volume(c, 7.5, InterpolationMode::step) == 10);
  CHECK(price_at_volume(c, 2, InterpolationMode::linear) == 0);
  CHECK_THROWS_AS(price_at_volume(c, 10.5, InterpolationMode::linear), DataError);
}

TEST_CASE("property: random curves agree with the naive oracle") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> probe(-200.0, 400.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Side side = trial % 2 ? Side::demand : Side::supply;
    const auto bids = oracle::random_bids(rng, 60, -150, 350);
    const auto curve = build_curve(bids, side);
    const auto expected = oracle::points_from_bids(bids, side);
    REQUIRE(pts(curve) == expected);

    // idempotent rebuild and volume conservation
    const auto blocks = curve.blocks();
    CHECK(build_curve(blocks, side) == curve);
    double total = 0.0;
    for (const auto& b : blocks) total += b.volume;
    CHECK(total == curve.total_volume());

    double prev = side == Side::supply ? 0.0 : curve.total_volume();
    for (int k = -400; k <= 800; ++k) {
      const double p = k * 0.5 + 0.25;
      for (auto mode : {InterpolationMode::linear, InterpolationMode::step}) {
        CHECK(volume_at_price(curve, p, mode) ==
              doctest::Approx(oracle::volume(expected, side, p, mode)).epsilon(1e-12));
      }
      const double v = volume_at_price(curve, p, InterpolationMode::linear);
      if (side == Side::supply) {
        CHECK(v >= prev);
      } else {
        CHECK(v <= prev);
      }
      prev = v;
    }
    const double p = probe(rng);
    for (auto mode : {InterpolationMode::linear, InterpolationMode::step}) {
      const double limit = side == Side::supply ? volume_below(curve, p, mode)
                                                : volume_above(curve, p, mode);
      CHECK(limit <= volume_at_price(curve, p, mode));
      CHECK(limit >= volume_at_price(curve, side == Side::supply ? p - 1e-6 : p + 1e-6, mode));
    }
  }
}

TEST_CASE("property: slope scales exactly with volume") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto curve = build_curve(oracle::random_bids(rng, 40, -50, 300), Side::supply);
    if (curve.size() < 2) continue;
    const double lo = curve.points()[0].cumulative_volume * 0.5;
    const double hi = curve.total_volume();
    const double base = average_slope(curve, {lo, hi}).dp_dv;
    for (double k : {1.0, 1.5, 2.0, 4.0, 0.3}) {
      const double scaled = average_slope(scale_volume(curve, k), {k * lo, k * hi}).dp_dv;
      CHECK(scaled == doctest::Approx(base / k).epsilon(1e-12));
    }
  }
}

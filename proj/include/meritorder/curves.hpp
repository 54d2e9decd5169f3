#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "meritorder/common.hpp"

namespace meritorder {

struct CurvePoint {
  double price = 0.0;              // EUR/MWh
  double cumulative_volume = 0.0;  // MWh

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// A single price/quantity order as it appears in an exchange bid list.
struct Bid {
  double price = 0.0;   // EUR/MWh
  double volume = 0.0;  // MWh, block (not cumulative)

  friend bool operator==(const Bid&, const Bid&) = default;
};

struct CurveLimits {
  PriceBounds bounds;
  std::size_t max_points = 10'000;
};

/// Aggregated hourly bid (demand) or ask (supply) curve.
///
/// Points are ordered along cumulative volume, which is strictly increasing.
/// Supply prices are non-decreasing along the sequence, demand prices
/// non-increasing. The block volumes that produced the cumulative sums are
/// retained so that rebuilding from blocks reproduces the curve bit for bit.
/// Immutable after construction.
class AuctionCurve {
 public:
  /// Validates and adopts already-accumulated points. The first point may
  /// carry zero cumulative volume (an interpolation anchor).
  static AuctionCurve from_points(Side side, std::vector<CurvePoint> points,
                                  const CurveLimits& limits = {});

  Side side() const { return side_; }
  std::span<const CurvePoint> points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  /// Block volumes implied by the points, in curve order.
  std::vector<Bid> blocks() const;

  double total_volume() const { return points_.back().cumulative_volume; }
  double first_price() const { return points_.front().price; }
  double last_price() const { return points_.back().price; }

  friend bool operator==(const AuctionCurve&, const AuctionCurve&) = default;

 private:
  friend AuctionCurve build_curve(std::span<const Bid>, Side, const CurveLimits&);
  friend AuctionCurve scale_volume(const AuctionCurve&, double);

  AuctionCurve(Side side, std::vector<CurvePoint> points, std::vector<double> block_volumes)
      : side_(side), points_(std::move(points)), block_volumes_(std::move(block_volumes)) {}

  Side side_;
  std::vector<CurvePoint> points_;
  std::vector<double> block_volumes_;
};

/// Canonicalizes a bid list: sorts by price (ascending for supply, descending
/// for demand, stable), merges equal prices by summing in input order and
/// accumulates volumes. Throws DataError on an empty list, a non-positive
/// block volume or an out-of-bounds price.
AuctionCurve build_curve(std::span<const Bid> bids, Side side, const CurveLimits& limits = {});

/// Cumulative volume offered (supply) or sought (demand) at `price`.
///
/// Below the first supply price the supply volume is zero; above the first
/// (highest) demand price the demand volume is zero. Past the last point the
/// curve saturates at its total volume. Between points the volume is
/// interpolated linearly in price (`linear`) or held at the last reached
/// point (`step`). Supply is right-continuous, demand left-continuous.
double volume_at_price(const AuctionCurve& curve, double price, InterpolationMode mode);

/// One-sided limits of volume_at_price at `price` (from above and below).
double volume_above(const AuctionCurve& curve, double price, InterpolationMode mode);
double volume_below(const AuctionCurve& curve, double price, InterpolationMode mode);

/// Price of the marginal order at cumulative `volume` (inverse of
/// volume_at_price). Throws DataError if volume is outside [0, total].
double price_at_volume(const AuctionCurve& curve, double volume, InterpolationMode mode);

/// Multiplies every cumulative volume by `factor`; prices are unchanged.
AuctionCurve scale_volume(const AuctionCurve& curve, double factor);

struct VolumeWindow {
  double lo = 0.0;  // MWh
  double hi = 0.0;  // MWh
};

struct SlopeMetric {
  double dp_dv = 0.0;  // EUR/MWh per MWh
  VolumeWindow window;
};

/// Average slope (P(hi) - P(lo)) / (hi - lo) of the curve's price over
/// cumulative volume, P being price_at_volume.
SlopeMetric average_slope(const AuctionCurve& curve, VolumeWindow window,
                          InterpolationMode mode = InterpolationMode::linear);

}  // namespace meritorder

#include "meritorder/curves.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace meritorder {
namespace {

// Position of `price` along the curve's price ordering: number of points
// whose price is reached at `price` (supply: p_i <= price, demand: p_i >= price).
std::size_t reached_points(const AuctionCurve& curve, double price) {
  const auto pts = curve.points();
  if (curve.side() == Side::supply) {
    return static_cast<std::size_t>(
        std::upper_bound(pts.begin(), pts.end(), price,
                         [](double p, const CurvePoint& pt) { return p < pt.price; }) -
        pts.begin());
  }
  return static_cast<std::size_t>(
      std::upper_bound(pts.begin(), pts.end(), price,
                       [](double p, const CurvePoint& pt) { return p > pt.price; }) -
      pts.begin());
}

// Fraction of the way from points[i] to points[i+1] in price.
double price_fraction(const CurvePoint& a, const CurvePoint& b, double price) {
  return (price - a.price) / (b.price - a.price);
}

double interpolate_volume(const CurvePoint& a, const CurvePoint& b, double price) {
  return a.cumulative_volume +
         price_fraction(a, b, price) * (b.cumulative_volume - a.cumulative_volume);
}

void validate_points(Side side, const std::vector<CurvePoint>& points, const CurveLimits& limits) {
  if (points.empty()) throw DataError("auction curve needs at least one point");
  if (points.size() > limits.max_points) {
    throw DataError("auction curve has " + std::to_string(points.size()) +
                    " points, limit is " + std::to_string(limits.max_points));
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    if (!std::isfinite(pt.price) || !limits.bounds.contains(pt.price)) {
      throw DataError("curve price " + std::to_string(pt.price) + " outside exchange bounds");
    }
    if (!std::isfinite(pt.cumulative_volume) || pt.cumulative_volume < 0.0) {
      throw DataError("curve volume must be finite and non-negative");
    }
    if (i == 0) continue;
    const auto& prev = points[i - 1];
    if (!(pt.cumulative_volume > prev.cumulative_volume)) {
      throw DataError("cumulative volume must be strictly increasing");
    }
    const bool ordered = side == Side::supply ? pt.price >= prev.price : pt.price <= prev.price;
    if (!ordered) {
      throw DataError(side == Side::supply ? "supply prices must be non-decreasing"
                                           : "demand prices must be non-increasing");
    }
  }
}

}  // namespace

AuctionCurve AuctionCurve::from_points(Side side, std::vector<CurvePoint> points,
                                       const CurveLimits& limits) {
  validate_points(side, points, limits);
  std::vector<double> blocks(points.size());
  double previous = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    blocks[i] = points[i].cumulative_volume - previous;
    previous = points[i].cumulative_volume;
  }
  return AuctionCurve(side, std::move(points), std::move(blocks));
}

std::vector<Bid> AuctionCurve::blocks() const {
  std::vector<Bid> out(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) out[i] = {points_[i].price, block_volumes_[i]};
  return out;
}

AuctionCurve build_curve(std::span<const Bid> bids, Side side, const CurveLimits& limits) {
  if (bids.empty()) throw DataError("empty bid list");
  for (const auto& bid : bids) {
    if (!std::isfinite(bid.price) || !limits.bounds.contains(bid.price)) {
      throw DataError("bid price " + std::to_string(bid.price) + " outside exchange bounds");
    }
    if (!std::isfinite(bid.volume) || !(bid.volume > 0.0)) {
      throw DataError("bid volume must be positive");
    }
  }

  std::vector<Bid> sorted(bids.begin(), bids.end());
  if (side == Side::supply) {
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Bid& a, const Bid& b) { return a.price < b.price; });
  } else {
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Bid& a, const Bid& b) { return a.price > b.price; });
  }

  std::vector<CurvePoint> points;
  std::vector<double> block_volumes;
  points.reserve(sorted.size());
  block_volumes.reserve(sorted.size());
  for (const auto& bid : sorted) {
    if (!block_volumes.empty() && points.back().price == bid.price) {
      block_volumes.back() += bid.volume;
    } else {
      points.push_back({bid.price, 0.0});
      block_volumes.push_back(bid.volume);
    }
  }
  double cumulative = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    cumulative += block_volumes[i];
    points[i].cumulative_volume = cumulative;
  }
  validate_points(side, points, limits);
  return AuctionCurve(side, std::move(points), std::move(block_volumes));
}

double volume_at_price(const AuctionCurve& curve, double price, InterpolationMode mode) {
  const auto pts = curve.points();
  const std::size_t reached = reached_points(curve, price);
  if (reached == 0) return 0.0;
  const std::size_t i = reached - 1;
  if (i + 1 == pts.size() || mode == InterpolationMode::step) return pts[i].cumulative_volume;
  return interpolate_volume(pts[i], pts[i + 1], price);
}

namespace {

// One-sided limit of the volume at `price` from the side where the curve has
// not yet reached it: supply from below, demand from above.
double volume_before(const AuctionCurve& curve, double price, InterpolationMode mode) {
  const auto pts = curve.points();
  const std::size_t reached = reached_points(curve, price);
  if (reached == 0) return 0.0;
  if (pts[reached - 1].price != price) return volume_at_price(curve, price, mode);
  // First point of the (possibly vertical) group sitting at `price`.
  std::size_t j = reached - 1;
  while (j > 0 && pts[j - 1].price == price) --j;
  if (j == 0) return 0.0;
  return mode == InterpolationMode::step ? pts[j - 1].cumulative_volume : pts[j].cumulative_volume;
}

}  // namespace

double volume_above(const AuctionCurve& curve, double price, InterpolationMode mode) {
  if (curve.side() == Side::supply) return volume_at_price(curve, price, mode);
  return volume_before(curve, price, mode);
}

double volume_below(const AuctionCurve& curve, double price, InterpolationMode mode) {
  if (curve.side() == Side::demand) return volume_at_price(curve, price, mode);
  return volume_before(curve, price, mode);
}

double price_at_volume(const AuctionCurve& curve, double volume, InterpolationMode mode) {
  const auto pts = curve.points();
  if (!(volume >= 0.0) || volume > curve.total_volume()) {
    throw DataError("volume " + std::to_string(volume) + " outside curve range [0, " +
                    std::to_string(curve.total_volume()) + "]");
  }
  const auto it = std::lower_bound(
      pts.begin(), pts.end(), volume,
      [](const CurvePoint& pt, double v) { return pt.cumulative_volume < v; });
  const auto i = static_cast<std::size_t>(it - pts.begin());
  if (i == 0 || mode == InterpolationMode::step) return pts[i].price;
  const auto& a = pts[i - 1];
  const auto& b = pts[i];
  const double t = (volume - a.cumulative_volume) / (b.cumulative_volume - a.cumulative_volume);
  return a.price + t * (b.price - a.price);
}

AuctionCurve scale_volume(const AuctionCurve& curve, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw ConfigError("volume scale factor must be positive");
  }
  std::vector<CurvePoint> points(curve.points_);
  for (auto& pt : points) pt.cumulative_volume *= factor;
  std::vector<double> volumes(curve.block_volumes_);
  for (auto& v : volumes) v *= factor;
  return AuctionCurve(curve.side_, std::move(points), std::move(volumes));
}

SlopeMetric average_slope(const AuctionCurve& curve, VolumeWindow window, InterpolationMode mode) {
  if (!(window.hi > window.lo)) throw DataError("slope window needs hi > lo");
  const double p_lo = price_at_volume(curve, window.lo, mode);
  const double p_hi = price_at_volume(curve, window.hi, mode);
  return {(p_hi - p_lo) / (window.hi - window.lo), window};
}

}  // namespace meritorder

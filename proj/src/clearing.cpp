#include "meritorder/clearing.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace meritorder {

std::string_view to_string(ClearingStatus status) {
  switch (status) {
    case ClearingStatus::cleared: return "cleared";
    case ClearingStatus::no_trade: return "no-trade";
    case ClearingStatus::boundary_floor: return "boundary-floor";
    case ClearingStatus::boundary_cap: return "boundary-cap";
    case ClearingStatus::failed: return "failed";
  }
  return "failed";
}

ClearingStatus parse_clearing_status(std::string_view text) {
  if (text == "cleared") return ClearingStatus::cleared;
  if (text == "no-trade") return ClearingStatus::no_trade;
  if (text == "boundary-floor") return ClearingStatus::boundary_floor;
  if (text == "boundary-cap") return ClearingStatus::boundary_cap;
  if (text == "failed") return ClearingStatus::failed;
  throw DataError("unknown clearing status '" + std::string(text) + "'");
}

namespace {

// Excess demand and its one-sided limits.
class ExcessDemand {
 public:
  ExcessDemand(const AuctionCurve& demand, const AuctionCurve& supply, InterpolationMode mode)
      : demand_(demand), supply_(supply), mode_(mode) {}

  double at(double p) const {
    return volume_at_price(demand_, p, mode_) - volume_at_price(supply_, p, mode_);
  }
  double above(double p) const {
    return volume_above(demand_, p, mode_) - volume_above(supply_, p, mode_);
  }
  double below(double p) const {
    return volume_below(demand_, p, mode_) - volume_below(supply_, p, mode_);
  }
  double traded(double p) const {
    return std::min(volume_at_price(demand_, p, mode_), volume_at_price(supply_, p, mode_));
  }
  bool linear() const { return mode_ == InterpolationMode::linear; }

 private:
  const AuctionCurve& demand_;
  const AuctionCurve& supply_;
  InterpolationMode mode_;
};

// Zero of the linear excess-demand segment running from `e_left` at `left`
// to `e_right` at `right` (e_left > 0 > e_right).
double segment_root(double left, double right, double e_left, double e_right) {
  const double root = left + (right - left) * (e_left / (e_left - e_right));
  return std::clamp(root, left, right);
}

std::vector<double> breakpoints(const AuctionCurve& demand, const AuctionCurve& supply,
                                const PriceBounds& bounds) {
  std::vector<double> out;
  out.reserve(demand.size() + supply.size() + 2);
  out.push_back(bounds.floor);
  out.push_back(bounds.cap);
  for (const auto& pt : demand.points()) out.push_back(std::clamp(pt.price, bounds.floor, bounds.cap));
  for (const auto& pt : supply.points()) out.push_back(std::clamp(pt.price, bounds.floor, bounds.cap));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Lowest price with ED <= tol, or nullopt if demand still exceeds supply at the cap.
std::optional<double> lowest_clearing_price(const ExcessDemand& ed, const std::vector<double>& bp,
                                            double tol) {
  if (ed.at(bp.front()) <= tol) return bp.front();
  for (std::size_t j = 0; j + 1 < bp.size(); ++j) {
    const double e_left = ed.above(bp[j]);
    if (e_left <= tol) return bp[j];
    if (ed.linear()) {
      const double e_right = ed.below(bp[j + 1]);
      if (e_right < 0.0) return segment_root(bp[j], bp[j + 1], e_left, e_right);
    }
    if (ed.at(bp[j + 1]) <= tol) return bp[j + 1];
  }
  return std::nullopt;
}

// Highest price with ED >= -tol (the floor if there is none).
double highest_clearing_price(const ExcessDemand& ed, const std::vector<double>& bp, double tol) {
  if (ed.at(bp.back()) >= -tol) return bp.back();
  for (std::size_t j = bp.size() - 1; j > 0; --j) {
    const double e_right = ed.below(bp[j]);
    if (e_right >= -tol) return bp[j];
    if (ed.linear()) {
      const double e_left = ed.above(bp[j - 1]);
      if (e_left > 0.0) return segment_root(bp[j - 1], bp[j], e_left, e_right);
    }
    if (ed.at(bp[j - 1]) >= -tol) return bp[j - 1];
  }
  return bp.front();
}

ClearingResult settle_at(const ExcessDemand& ed, double price, double low, double high, double tol) {
  ClearingResult result;
  result.price = price;
  result.price_low = low;
  result.price_high = high;
  result.volume = ed.traded(price);
  if (result.volume <= tol) {
    result.volume = 0.0;
    result.status = ClearingStatus::no_trade;
  } else {
    result.status = ClearingStatus::cleared;
  }
  return result;
}

void check_options(const ClearingOptions& options) {
  if (!(options.bounds.cap > options.bounds.floor)) throw ConfigError("price cap must exceed floor");
  if (!(options.volume_tolerance >= 0.0)) throw ConfigError("volume tolerance must be >= 0");
}

void check_sides(const AuctionCurve& demand, const AuctionCurve& supply) {
  if (demand.side() != Side::demand) throw DataError("clear: first curve must be a demand curve");
  if (supply.side() != Side::supply) throw DataError("clear: second curve must be a supply curve");
}

}  // namespace

ClearingResult clear(const AuctionCurve& demand, const AuctionCurve& supply,
                     const ClearingOptions& options) {
  check_options(options);
  check_sides(demand, supply);
  const double tol = options.volume_tolerance;
  const auto& bounds = options.bounds;
  const ExcessDemand ed(demand, supply, options.mode);

  if (ed.at(bounds.floor) < -tol) {
    return {bounds.floor, ed.traded(bounds.floor), ClearingStatus::boundary_floor, bounds.floor,
            bounds.floor};
  }
  const auto bp = breakpoints(demand, supply, bounds);
  const auto low = lowest_clearing_price(ed, bp, tol);
  if (!low) {
    return {bounds.cap, ed.traded(bounds.cap), ClearingStatus::boundary_cap, bounds.cap, bounds.cap};
  }
  const double high = std::max(*low, highest_clearing_price(ed, bp, tol));
  const double price = options.tie_break == TieBreak::lower ? *low : 0.5 * (*low + high);
  return settle_at(ed, price, *low, high, tol);
}

ClearingResult clear_brute_force(const AuctionCurve& demand, const AuctionCurve& supply,
                                 double grid_step, const ClearingOptions& options) {
  check_options(options);
  check_sides(demand, supply);
  if (!(grid_step > 0.0)) throw ConfigError("grid step must be positive");
  const double tol = options.volume_tolerance;
  const auto& bounds = options.bounds;
  const ExcessDemand ed(demand, supply, options.mode);

  const auto steps = static_cast<long long>(std::ceil((bounds.cap - bounds.floor) / grid_step - 1e-9));
  double prev_price = bounds.floor;
  double prev_excess = 0.0;
  for (long long k = 0; k <= steps; ++k) {
    const double price =
        k == steps ? bounds.cap : bounds.floor + static_cast<double>(k) * grid_step;
    const double excess = ed.at(price);
    if (k == 0 && excess < -tol) {
      return {price, ed.traded(price), ClearingStatus::boundary_floor, price, price};
    }
    if (excess <= tol) {
      const double chosen =
          (k > 0 && std::abs(prev_excess) <= std::abs(excess)) ? prev_price : price;
      return settle_at(ed, chosen, chosen, chosen, tol);
    }
    prev_price = price;
    prev_excess = excess;
  }
  return {bounds.cap, ed.traded(bounds.cap), ClearingStatus::boundary_cap, bounds.cap, bounds.cap};
}

}  // namespace meritorder

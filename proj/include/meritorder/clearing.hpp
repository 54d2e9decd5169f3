#pragma once

#include <string_view>

#include "meritorder/common.hpp"
#include "meritorder/curves.hpp"

namespace meritorder {

enum class ClearingStatus {
  cleared,
  no_trade,
  boundary_floor,  // supply exceeds demand at the price floor
  boundary_cap,    // demand exceeds supply at the price cap
  failed,          // hour could not be processed (scenario runs only)
};

std::string_view to_string(ClearingStatus status);
ClearingStatus parse_clearing_status(std::string_view text);

/// Rule applied when every price in an interval clears the market.
enum class TieBreak { lower, midpoint };

struct ClearingOptions {
  InterpolationMode mode = InterpolationMode::linear;
  PriceBounds bounds;
  double volume_tolerance = 1e-6;  // MWh
  TieBreak tie_break = TieBreak::lower;
};

struct ClearingResult {
  double price = 0.0;   // EUR/MWh
  double volume = 0.0;  // MWh
  ClearingStatus status = ClearingStatus::cleared;
  // Interval of market-clearing prices; equal to price unless the curves
  // overlap along a vertical (price) segment.
  double price_low = 0.0;
  double price_high = 0.0;

  friend bool operator==(const ClearingResult&, const ClearingResult&) = default;
};

/// Intersects the demand and supply curves exactly.
///
/// With excess demand ED(p) = D(p) - S(p) (non-increasing in p), the clearing
/// interval runs from the lowest price with ED <= 0 to the highest price with
/// ED >= 0, tolerance applied. Linear segments are solved for their root;
/// jumps of either curve clear at the jump price. The traded volume is
/// min(D(p*), S(p*)).
ClearingResult clear(const AuctionCurve& demand, const AuctionCurve& supply,
                     const ClearingOptions& options = {});

/// Grid-scan oracle for clear(). Walks the price grid from the floor in
/// `grid_step` increments until excess demand first drops to zero or below,
/// then returns whichever of the two bracketing grid prices has the smaller
/// |ED| (ties toward the lower price).
ClearingResult clear_brute_force(const AuctionCurve& demand, const AuctionCurve& supply,
                                 double grid_step, const ClearingOptions& options = {});

}  // namespace meritorder

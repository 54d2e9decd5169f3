#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace meritorder {

// Exchange bid price bounds (EPEX day-ahead: -3000 / +3000 EUR/MWh).
inline constexpr double kPriceFloor = -3000.0;
inline constexpr double kPriceCap = 3000.0;

struct PriceBounds {
  double floor = kPriceFloor;
  double cap = kPriceCap;

  bool contains(double price) const { return price >= floor && price <= cap; }
};

enum class Side { supply, demand };

// How cumulative volume is evaluated between curve points.
enum class InterpolationMode { linear, step };

std::string_view to_string(Side side);
std::string_view to_string(InterpolationMode mode);
Side parse_side(std::string_view text);
InterpolationMode parse_interpolation_mode(std::string_view text);

/// Invalid configuration or arguments (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent data (CLI exit code 3).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace meritorder

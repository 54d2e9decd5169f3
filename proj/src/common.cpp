#include "meritorder/common.hpp"

#include <string>

namespace meritorder {

std::string_view to_string(Side side) {
  return side == Side::supply ? "supply" : "demand";
}

std::string_view to_string(InterpolationMode mode) {
  return mode == InterpolationMode::linear ? "linear" : "step";
}

Side parse_side(std::string_view text) {
  if (text == "supply" || text == "ask" || text == "sell") return Side::supply;
  if (text == "demand" || text == "bid" || text == "buy") return Side::demand;
  throw DataError("unknown curve side '" + std::string(text) + "'");
}

InterpolationMode parse_interpolation_mode(std::string_view text) {
  if (text == "linear") return InterpolationMode::linear;
  if (text == "step") return InterpolationMode::step;
  throw ConfigError("unknown curve mode '" + std::string(text) + "' (expected linear or step)");
}

}  // namespace meritorder

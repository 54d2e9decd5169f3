#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "meritorder/clearing.hpp"
#include "meritorder/counterfactual.hpp"
#include "meritorder/curves.hpp"
#include "meritorder/stats.hpp"
#include "meritorder/synth.hpp"

namespace py = pybind11;
using namespace meritorder;

namespace {

std::vector<Bid> to_bids(const std::vector<std::pair<double, double>>& pairs) {
  std::vector<Bid> bids;
  bids.reserve(pairs.size());
  for (const auto& [price, volume] : pairs) bids.push_back({price, volume});
  return bids;
}

std::vector<std::pair<double, double>> points_of(const AuctionCurve& c) {
  std::vector<std::pair<double, double>> out;
  for (const auto& p : c.points()) out.emplace_back(p.price, p.cumulative_volume);
  return out;
}

ClearingOptions options_for(const std::string& mode) {
  ClearingOptions o;
  o.mode = parse_interpolation_mode(mode);
  return o;
}

}  // namespace

PYBIND11_MODULE(_meritorder, m) {
  m.doc() = "Day-ahead merit-order clearing and RES marginal-cost counterfactuals.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

  m.attr("PRICE_FLOOR") = kPriceFloor;
  m.attr("PRICE_CAP") = kPriceCap;
  m.attr("__version__") = MERITORDER_VERSION;

  py::class_<AuctionCurve>(m, "AuctionCurve")
      .def_property_readonly("side", [](const AuctionCurve& c) { return std::string(to_string(c.side())); })
      .def_property_readonly("points", &points_of)
      .def_property_readonly("total_volume", &AuctionCurve::total_volume)
      .def("volume_at", [](const AuctionCurve& c, double price, const std::string& mode) {
            return volume_at_price(c, price, parse_interpolation_mode(mode));
          }, py::arg("price"), py::arg("mode") = "linear")
      .def("price_at", [](const AuctionCurve& c, double volume, const std::string& mode) {
            return price_at_volume(c, volume, parse_interpolation_mode(mode));
          }, py::arg("volume"), py::arg("mode") = "linear")
      .def("scaled", &scale_volume, py::arg("factor"))
      .def("average_slope", [](const AuctionCurve& c, double lo, double hi) {
            return average_slope(c, {lo, hi}).dp_dv;
          }, py::arg("lo"), py::arg("hi"))
      .def("__len__", &AuctionCurve::size)
      .def("__eq__", [](const AuctionCurve& a, const AuctionCurve& b) { return a == b; })
      .def("__repr__", [](const AuctionCurve& c) {
        return "<AuctionCurve " + std::string(to_string(c.side())) + ", " +
               std::to_string(c.size()) + " points>";
      });

  m.def("build_curve", [](const std::vector<std::pair<double, double>>& bids, const std::string& side) {
        return build_curve(to_bids(bids), parse_side(side));
      }, py::arg("bids"), py::arg("side"),
      "Curve from (price, volume) blocks; side is 'supply' or 'demand'.");

  py::class_<ClearingResult>(m, "ClearingResult")
      .def_readonly("price", &ClearingResult::price)
      .def_readonly("volume", &ClearingResult::volume)
      .def_property_readonly("status", [](const ClearingResult& r) { return std::string(to_string(r.status)); })
      .def_readonly("price_low", &ClearingResult::price_low)
      .def_readonly("price_high", &ClearingResult::price_high)
      .def("__repr__", [](const ClearingResult& r) {
        return "<ClearingResult " + std::string(to_string(r.status)) + " price=" +
               std::to_string(r.price) + " volume=" + std::to_string(r.volume) + ">";
      });

  m.def("clear", [](const AuctionCurve& d, const AuctionCurve& s, const std::string& mode) {
        return clear(d, s, options_for(mode));
      }, py::arg("demand"), py::arg("supply"), py::arg("mode") = "linear");
  m.def("clear_brute_force", [](const AuctionCurve& d, const AuctionCurve& s, double step,
                                const std::string& mode) {
        return clear_brute_force(d, s, step, options_for(mode));
      }, py::arg("demand"), py::arg("supply"), py::arg("grid_step") = 0.01, py::arg("mode") = "linear");

  m.def("strip_res_floor", [](const AuctionCurve& s, double wind, double pv) {
        return strip_res_floor(s, wind, pv).residual;
      }, py::arg("supply"), py::arg("wind_mwh"), py::arg("pv_mwh"));
  m.def("reprice_res", [](const AuctionCurve& residual, double wind, const std::string& wind_cost,
                          double pv, const std::string& pv_cost) {
        return reprice_res(residual, wind, MarginalCost::parse(wind_cost), pv,
                           MarginalCost::parse(pv_cost));
      }, py::arg("residual"), py::arg("wind_mwh"), py::arg("wind_cost"), py::arg("pv_mwh"),
      py::arg("pv_cost"), "Costs are decimal strings or 'floor'.");
  m.def("total_marginal_cost", [](double wear, double lease, double tax, double forecast) {
        return total_marginal_cost({wear, lease, tax, forecast});
      }, py::arg("wear_tear"), py::arg("land_lease"), py::arg("concession_tax"),
      py::arg("forecast_error"));

  m.def("volume_weighted_mean", [](const std::vector<double>& r, const std::vector<double>& w) {
        return volume_weighted_mean(r, w);
      }, py::arg("ratios"), py::arg("weights"));
  m.def("price_stats", [](const std::vector<double>& prices) {
        const auto s = price_stats(prices);
        py::dict d;
        d["mean"] = s.mean;
        d["std"] = s.std;
        d["min"] = s.min;
        d["max"] = s.max;
        d["negative_hours"] = s.negative_hours;
        d["hours"] = s.hours;
        return d;
      }, py::arg("prices"));

  m.def("synth_year", [](std::uint64_t seed, int year) {
        SynthParams p;
        p.seed = seed;
        p.year = year;
        std::vector<HourlyMarketRecord> records;
        {
          py::gil_scoped_release release;
          records = generate_year(p);
        }
        std::vector<py::dict> rows;
        rows.reserve(records.size());
        for (const auto& r : records) {
          py::dict d;
          d["hour"] = r.hour_start.time_since_epoch().count();
          d["load_mwh"] = r.load_mwh;
          d["wind_mwh"] = r.wind_mwh;
          d["pv_mwh"] = r.pv_mwh;
          d["volume_mwh"] = r.cleared_volume_mwh;
          d["price_eur_mwh"] = r.realized_price_eur;
          rows.push_back(std::move(d));
        }
        return rows;
      }, py::arg("seed") = 42, py::arg("year") = 2011,
      "Hourly summary of a synthetic year (hour as Unix seconds).");
}

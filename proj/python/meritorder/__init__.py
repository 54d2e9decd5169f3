"""Day-ahead merit-order clearing and RES marginal-cost counterfactuals."""

from ._meritorder import (
    PRICE_CAP,
    PRICE_FLOOR,
    AuctionCurve,
    ClearingResult,
    ConfigError,
    DataError,
    __version__,
    build_curve,
    clear,
    clear_brute_force,
    price_stats,
    reprice_res,
    strip_res_floor,
    synth_year,
    total_marginal_cost,
    volume_weighted_mean,
)

__all__ = [
    "PRICE_CAP",
    "PRICE_FLOOR",
    "AuctionCurve",
    "ClearingResult",
    "ConfigError",
    "DataError",
    "__version__",
    "build_curve",
    "clear",
    "clear_brute_force",
    "price_stats",
    "reprice_res",
    "strip_res_floor",
    "synth_year",
    "total_marginal_cost",
    "volume_weighted_mean",
]

"""Pricing, simulation and hedging of long-dated contracts under the
minimal market model, where the discounted numeraire portfolio is a
time-changed squared Bessel process of dimension four and the benchmarked
savings account is a strict supermartingale.  The package covers
calibration from index data, minimal / risk-neutral / loading price
triples for zero-coupon and stylized CAT bonds, exact path simulation,
hedge backtests and risk-minimization ledgers."""

from .calibrate import CalibrationResult, fit_rho
from .hedging import (
    BookResult,
    HedgeLedger,
    backtest_minimal_zcb,
    diversify_book,
    risk_minimize_cat,
    risk_minimize_loading,
)
from .market_data import (
    DiscountedSeries,
    QuadraticVariationCurve,
    RawSeries,
    build_discounted,
    load_raw,
    quadratic_variation,
)
from .model import (
    MmmParams,
    PriceTriple,
    YearTime,
    alpha,
    discounted_minimal_zcb,
    hedge_fraction,
    hedge_ratio,
    price_ratio,
    rho,
    rho_increment,
    zcb_price_triple,
)
from .pricing import ClaimSpec, MarketState, benchmark, extract_loading, price, unbenchmark
from .simulate import (
    CatastropheModel,
    LoadingSpec,
    PathGrid,
    SampledPath,
    besq4_transition,
    claim_probability,
    sample_catastrophe,
    sample_catastrophes,
    simulate_loading,
    simulate_path,
    simulate_path_euler,
    simulate_paths,
    simulate_paths_euler,
    substream,
)

__version__ = "0.1.0"

__all__ = [
    "YearTime",
    "MmmParams",
    "PriceTriple",
    "alpha",
    "rho",
    "rho_increment",
    "discounted_minimal_zcb",
    "zcb_price_triple",
    "price_ratio",
    "hedge_ratio",
    "hedge_fraction",
    "RawSeries",
    "DiscountedSeries",
    "QuadraticVariationCurve",
    "load_raw",
    "build_discounted",
    "quadratic_variation",
    "CalibrationResult",
    "fit_rho",
    "PathGrid",
    "SampledPath",
    "CatastropheModel",
    "LoadingSpec",
    "substream",
    "besq4_transition",
    "simulate_path",
    "simulate_paths",
    "simulate_path_euler",
    "simulate_paths_euler",
    "sample_catastrophe",
    "sample_catastrophes",
    "claim_probability",
    "simulate_loading",
    "ClaimSpec",
    "MarketState",
    "price",
    "extract_loading",
    "benchmark",
    "unbenchmark",
    "HedgeLedger",
    "BookResult",
    "backtest_minimal_zcb",
    "risk_minimize_cat",
    "risk_minimize_loading",
    "diversify_book",
]

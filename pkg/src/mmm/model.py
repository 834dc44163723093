"""Closed-form quantities of the minimal market model (MMM).

Under the MMM the discounted numeraire portfolio (NP) is a squared Bessel
process of dimension four run on the deterministic clock

    rho(t) = alpha0 / (4 eta) * (exp(eta t) - 1),

driven by the scaling function alpha(t) = alpha0 * exp(eta t).  Everything
priced here follows from one expectation: for the discounted NP level
nbar at time t and a maturity T >= t,

    E[nbar_t / nbar_T] = 1 - exp(-nbar_t / (2 (rho_T - rho_t))),

which is strictly below one for t < T.  That gap is what separates the
minimal (real-world) price of a savings-account payoff from its formally
obtained risk-neutral price.

All functions are pure, take the discounted NP level as an explicit
argument, and broadcast over numpy arrays.  Time is measured in years as
plain floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

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
]

# Years since the series reference epoch; nonnegative by convention.
YearTime = float


@dataclass(frozen=True)
class MmmParams:
    """Model triple (alpha0, eta, n0) defining all closed forms.

    alpha0: initial scaling level (1/year, in discounted-NP units), > 0.
    eta:    net growth rate of the discounted NP (1/year), > 0.
    n0:     initial discounted NP level, > 0.
    """

    alpha0: float
    eta: float
    n0: float

    def __post_init__(self) -> None:
        for name in ("alpha0", "eta", "n0"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be a positive finite real, got {value!r}")


@dataclass(frozen=True)
class PriceTriple:
    """Minimal, risk-neutral and loading price of one claim, plus the degree.

    The loading price interpolates (and for degrees above one extrapolates)
    between the minimal and risk-neutral prices:

        loading = degree * risk_neutral + (1 - degree) * minimal.

    All three prices are in currency units at the valuation time.
    """

    minimal: float
    risk_neutral: float
    loading: float
    loading_degree: float

    def __post_init__(self) -> None:
        scale = max(1.0, abs(self.risk_neutral))
        slack = 1e-12 * scale
        if self.loading_degree < 0.0:
            raise ValueError("loading degree must be nonnegative")
        if self.minimal > self.risk_neutral + slack:
            raise ValueError("minimal price exceeds risk-neutral price")
        if self.loading < self.minimal - slack:
            raise ValueError("loading price below minimal price")
        recon = self.loading_degree * self.risk_neutral + (1.0 - self.loading_degree) * self.minimal
        if abs(self.loading - recon) > slack:
            raise ValueError("loading price inconsistent with its degree")


def _as_float_or_array(x):
    """Return a python float for 0-d results, the array otherwise."""
    arr = np.asarray(x)
    if arr.ndim == 0:
        return float(arr)
    return arr


def _check_times(t, T=None) -> None:
    if np.any(np.asarray(t) < 0.0):
        raise ValueError("time must be nonnegative")
    if T is not None and np.any(np.asarray(T) < 0.0):
        raise ValueError("maturity must be nonnegative")


def alpha(params: MmmParams, t):
    """Scaling function alpha0 * exp(eta * t)."""
    _check_times(t)
    return _as_float_or_array(params.alpha0 * np.exp(params.eta * np.asarray(t, dtype=float)))


def rho(params: MmmParams, t):
    """Intrinsic clock alpha0/(4 eta) * (exp(eta t) - 1); rho(0) = 0, increasing."""
    _check_times(t)
    return _as_float_or_array(
        params.alpha0 / (4.0 * params.eta) * np.expm1(params.eta * np.asarray(t, dtype=float))
    )


def rho_increment(params: MmmParams, t, T):
    """rho(T) - rho(t), computed stably for small T - t."""
    _check_times(t, T)
    t = np.asarray(t, dtype=float)
    T = np.asarray(T, dtype=float)
    if np.any(T < t):
        raise ValueError("maturity must not precede valuation time")
    # rho_T - rho_t = alpha0/(4 eta) * exp(eta t) * (exp(eta (T - t)) - 1)
    out = params.alpha0 / (4.0 * params.eta) * np.exp(params.eta * t) * np.expm1(params.eta * (T - t))
    return _as_float_or_array(out)


def discounted_minimal_zcb(params: MmmParams, nbar_t, t, T):
    """Savings-discounted minimal price of a bond paying one savings unit at T.

    Equals 1 - exp(-nbar_t / (2 (rho_T - rho_t))), in (0, 1], increasing in
    nbar_t and in t for fixed T, and exactly 1 at t = T (payoff convention).
    """
    nbar_t = np.asarray(nbar_t, dtype=float)
    if np.any(nbar_t <= 0.0):
        raise ValueError("discounted NP level must be positive")
    dr = np.asarray(rho_increment(params, t, T))
    with np.errstate(divide="ignore"):
        u = np.where(dr > 0.0, nbar_t / (2.0 * np.where(dr > 0.0, dr, 1.0)), np.inf)
    return _as_float_or_array(-np.expm1(-u))


def zcb_price_triple(params: MmmParams, nbar_t: float, savings_t: float, t: float, T: float,
                     loading: float) -> PriceTriple:
    """Price triple of the savings-unit zero-coupon bond at time t.

    minimal      = savings_t * discounted_minimal_zcb(...)
    risk_neutral = savings_t          (one savings-account unit)
    loading      = degree * risk_neutral + (1 - degree) * minimal
    """
    if loading < 0.0:
        raise ValueError("loading degree must be nonnegative")
    if savings_t <= 0.0:
        raise ValueError("savings account value must be positive")
    vbar = discounted_minimal_zcb(params, nbar_t, t, T)
    minimal = savings_t * vbar
    risk_neutral = savings_t
    price = loading * risk_neutral + (1.0 - loading) * minimal
    return PriceTriple(minimal, risk_neutral, price, loading)


def price_ratio(params: MmmParams, nbar_t, t, T):
    """Risk-neutral over minimal price, always >= 1.

    The ratio is the reciprocal of the discounted minimal bond price, so it
    is the same for every claim whose savings-discounted payoff is
    independent of the benchmarked savings account.  Requires t < T.
    """
    if np.any(np.asarray(T) <= np.asarray(t)):
        raise ValueError("price ratio requires t < T")
    vbar = discounted_minimal_zcb(params, nbar_t, t, T)
    return _as_float_or_array(1.0 / np.asarray(vbar))


def hedge_ratio(params: MmmParams, nbar_t, t, T):
    """Units of discounted NP held to replicate the minimal bond.

    With u = nbar_t / (2 (rho_T - rho_t)) this is exp(-u) / (2 (rho_T - rho_t)),
    the partial derivative of discounted_minimal_zcb with respect to nbar_t.
    Zero at t = T (the limit as maturity is reached).
    """
    nbar_t = np.asarray(nbar_t, dtype=float)
    if np.any(nbar_t <= 0.0):
        raise ValueError("discounted NP level must be positive")
    dr = np.asarray(rho_increment(params, t, T))
    safe = np.where(dr > 0.0, dr, 1.0)
    with np.errstate(divide="ignore"):
        out = np.where(dr > 0.0, np.exp(-nbar_t / (2.0 * safe)) / (2.0 * safe), 0.0)
    return _as_float_or_array(out)


def hedge_fraction(params: MmmParams, nbar_t, t, T):
    """Fraction of the minimal-bond value invested in the NP, in (0, 1).

    Equals u / (exp(u) - 1) with u = nbar_t / (2 (rho_T - rho_t)); decreasing
    in u, tends to 1 for short maturities relative to the index level and to
    0 deep in the long end.  Requires t < T.
    """
    nbar_t = np.asarray(nbar_t, dtype=float)
    if np.any(nbar_t <= 0.0):
        raise ValueError("discounted NP level must be positive")
    if np.any(np.asarray(T) <= np.asarray(t)):
        raise ValueError("hedge fraction requires t < T")
    dr = np.asarray(rho_increment(params, t, T))
    u = nbar_t / (2.0 * dr)
    with np.errstate(over="ignore"):
        out = u / np.expm1(u)
    return _as_float_or_array(out)

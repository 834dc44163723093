"""Price triples and loading-degree extraction for bonds and stylized CAT bonds.

A stylized CAT bond in the occurrence convention pays one savings-account
unit at maturity T if the catastrophe time xi falls in [0, T], nothing
otherwise; the principal-protected variant pays when it does not.  Because
the discounted payoff is independent of the market, every such claim's
prices are the conditional payoff probability times the corresponding
zero-coupon bond prices, and the risk-neutral-to-minimal ratio is
claim-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import MmmParams, PriceTriple, discounted_minimal_zcb
from .simulate import CatastropheModel, claim_probability

__all__ = [
    "ClaimSpec",
    "MarketState",
    "price",
    "extract_loading",
    "benchmark",
    "unbenchmark",
]

KIND_ZCB = "zcb"
KIND_CAT = "cat_bond"
OCCURRENCE = "occurrence"
PRINCIPAL_PROTECTED = "principal_protected"

_B_CHECK_TOL = 1e-12


@dataclass(frozen=True)
class ClaimSpec:
    """Contract description: zero-coupon bond or stylized CAT bond."""

    kind: str
    maturity: float
    model: CatastropheModel | None = None
    convention: str = OCCURRENCE

    def __post_init__(self) -> None:
        if self.kind not in (KIND_ZCB, KIND_CAT):
            raise ValueError(f"unknown claim kind {self.kind!r}")
        if not self.maturity > 0.0:
            raise ValueError("maturity must be positive")
        if self.kind == KIND_CAT:
            if self.model is None:
                raise ValueError("CAT bond claim needs a catastrophe model")
            if self.convention not in (OCCURRENCE, PRINCIPAL_PROTECTED):
                raise ValueError(f"unknown payoff convention {self.convention!r}")
        elif self.model is not None:
            raise ValueError("zero-coupon bond takes no catastrophe model")

    @classmethod
    def zcb(cls, maturity: float) -> "ClaimSpec":
        return cls(KIND_ZCB, maturity)

    @classmethod
    def cat_bond(cls, maturity: float, model: CatastropheModel,
                 convention: str = OCCURRENCE) -> "ClaimSpec":
        return cls(KIND_CAT, maturity, model, convention)


@dataclass(frozen=True)
class MarketState:
    """Everything the closed forms need at one valuation time.

    ``xi`` is the catastrophe time when one has been observed (xi <= t);
    +inf means none has happened yet.
    """

    t: float
    nbar_t: float
    savings_t: float
    xi: float = math.inf

    def __post_init__(self) -> None:
        if self.t < 0.0:
            raise ValueError("valuation time must be nonnegative")
        if not self.nbar_t > 0.0:
            raise ValueError("discounted NP level must be positive")
        if not self.savings_t > 0.0:
            raise ValueError("savings account value must be positive")
        if not self.xi > 0.0:
            raise ValueError("catastrophe time must be positive")


def price(params: MmmParams, state: MarketState, claim: ClaimSpec, loading: float) -> PriceTriple:
    """Minimal, risk-neutral and loading price of the claim at the state.

    For CAT bonds the loading price is computed both as the degree-weighted
    combination and from its direct closed form; the two must agree to
    1e-12, which guards the implementation.
    """
    if loading < 0.0:
        raise ValueError("loading degree must be nonnegative")
    if state.t > claim.maturity:
        raise ValueError("valuation time is past maturity")

    vbar = discounted_minimal_zcb(params, state.nbar_t, state.t, claim.maturity)
    if claim.kind == KIND_ZCB:
        minimal = state.savings_t * vbar
        risk_neutral = state.savings_t
        loaded = loading * risk_neutral + (1.0 - loading) * minimal
        return PriceTriple(minimal, risk_neutral, loaded, loading)

    hbar = claim_probability(claim.model, state.t, claim.maturity, state.xi)
    if claim.convention == PRINCIPAL_PROTECTED:
        hbar = 1.0 - hbar
    minimal = hbar * state.savings_t * vbar
    risk_neutral = hbar * state.savings_t
    loaded = loading * risk_neutral + (1.0 - loading) * minimal
    direct = hbar * state.savings_t * (1.0 - (1.0 - loading) * (1.0 - vbar))
    if abs(loaded - direct) > _B_CHECK_TOL * max(1.0, abs(loaded)):
        raise ArithmeticError(
            f"loading price routes disagree: {loaded!r} vs {direct!r}"
        )
    return PriceTriple(minimal, risk_neutral, loaded, loading)


def extract_loading(b_obs: float, minimal: float, risk_neutral: float) -> float:
    """Loading degree implied by an observed loading price.

    Returns (b_obs - minimal) / (risk_neutral - minimal); by convention 1
    when the two reference prices coincide.  Rejects observations below the
    minimal price.
    """
    if minimal > risk_neutral:
        raise ValueError("minimal price exceeds risk-neutral price")
    if b_obs < minimal:
        raise ValueError("observed price below the minimal price")
    if risk_neutral == minimal:
        return 1.0
    return (b_obs - minimal) / (risk_neutral - minimal)


def benchmark(price_units: float, n_t: float) -> float:
    """Price in units of the NP."""
    if not n_t > 0.0:
        raise ValueError("NP value must be positive")
    return price_units / n_t


def unbenchmark(benchmarked: float, n_t: float) -> float:
    """Currency price from a benchmarked one; inverse of benchmark()."""
    if not n_t > 0.0:
        raise ValueError("NP value must be positive")
    return benchmarked * n_t

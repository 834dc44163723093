import math

import numpy as np
import pytest

from mmm.model import MmmParams, discounted_minimal_zcb, price_ratio, zcb_price_triple
from mmm.pricing import ClaimSpec, MarketState, benchmark, extract_loading, price, unbenchmark
from mmm.simulate import PURPOSE_CAT, PURPOSE_NP, CatastropheModel, besq4_transition, substream

PARAMS = MmmParams(0.18, 0.052, 10.0)
MODEL = CatastropheModel(0.05)


def state(t=0.0, nbar=10.0, savings=1.0, xi=math.inf):
    return MarketState(t=t, nbar_t=nbar, savings_t=savings, xi=xi)


def test_cat_bond_long_maturity_reference():
    trip = price(PARAMS, state(), ClaimSpec.cat_bond(89.0, MODEL), loading=0.0)
    assert trip.risk_neutral == pytest.approx(0.98832143303, rel=1e-10)
    assert trip.minimal == pytest.approx(0.0547879051525, rel=1e-10)
    assert trip.loading == trip.minimal


def test_cat_bond_ten_year_reference():
    trip = price(PARAMS, state(), ClaimSpec.cat_bond(10.0, MODEL), loading=0.3)
    assert trip.minimal == pytest.approx(0.393386964879, rel=1e-10)
    assert trip.risk_neutral == pytest.approx(0.393469340287, rel=1e-10)
    assert trip.loading == pytest.approx(0.393411677501, rel=1e-10)
    # at ten years the minimal and risk-neutral prices nearly coincide
    assert trip.risk_neutral / trip.minimal - 1.0 < 3e-4


def test_cat_bond_after_event_matches_zcb():
    trip = price(PARAMS, state(t=5.0, xi=2.5), ClaimSpec.cat_bond(30.0, MODEL), loading=0.4)
    zcb = zcb_price_triple(PARAMS, 10.0, 1.0, 5.0, 30.0, 0.4)
    assert trip.minimal == zcb.minimal
    assert trip.risk_neutral == zcb.risk_neutral
    assert trip.loading == zcb.loading


def test_conventions_complement_to_the_zcb():
    occ = price(PARAMS, state(), ClaimSpec.cat_bond(30.0, MODEL), loading=0.25)
    pp = price(PARAMS, state(), ClaimSpec.cat_bond(30.0, MODEL, "principal_protected"), 0.25)
    zcb = price(PARAMS, state(), ClaimSpec.zcb(30.0), loading=0.25)
    assert occ.minimal + pp.minimal == pytest.approx(zcb.minimal, rel=1e-13)
    assert occ.risk_neutral + pp.risk_neutral == pytest.approx(zcb.risk_neutral, rel=1e-13)
    assert occ.loading + pp.loading == pytest.approx(zcb.loading, rel=1e-13)


def test_ratio_is_claim_independent():
    for T in (5.0, 10.0, 30.0, 89.0):
        trip = price(PARAMS, state(), ClaimSpec.cat_bond(T, MODEL), loading=0.0)
        ratio = price_ratio(PARAMS, 10.0, 0.0, T)
        assert trip.risk_neutral / trip.minimal == pytest.approx(ratio, abs=1e-12, rel=1e-12)


def test_price_validation():
    with pytest.raises(ValueError):
        price(PARAMS, state(), ClaimSpec.zcb(10.0), loading=-0.01)
    with pytest.raises(ValueError):
        price(PARAMS, state(t=11.0, xi=math.inf), ClaimSpec.zcb(10.0), loading=0.0)
    with pytest.raises(ValueError):
        ClaimSpec.cat_bond(10.0, MODEL, "exotic")
    with pytest.raises(ValueError):
        ClaimSpec("zcb", 10.0, MODEL)
    with pytest.raises(ValueError):
        MarketState(t=-1.0, nbar_t=10.0, savings_t=1.0)


def test_extract_loading_edges_and_roundtrip():
    assert extract_loading(0.5, 0.5, 1.0) == 0.0
    assert extract_loading(1.0, 0.5, 1.0) == 1.0
    assert extract_loading(0.7, 0.7, 0.7) == 1.0
    rng = np.random.default_rng(21)
    for _ in range(200):
        L = float(rng.uniform(0.0, 1.8))
        T = float(rng.uniform(20.0, 89.0))  # long-dated: the gap R - V is material
        trip = price(PARAMS, state(), ClaimSpec.cat_bond(T, MODEL), loading=L)
        back = extract_loading(trip.loading, trip.minimal, trip.risk_neutral)
        assert abs(back - L) < 1e-12
    with pytest.raises(ValueError):
        extract_loading(0.4, 0.5, 1.0)
    with pytest.raises(ValueError):
        extract_loading(0.9, 1.2, 1.0)


def test_extract_loading_degenerate_short_end():
    # at very short maturities the bond price saturates at 1 in float64, the
    # two reference prices coincide, and the degree is 1 by convention
    trip = price(PARAMS, state(), ClaimSpec.cat_bond(1.0, MODEL), loading=0.7)
    assert trip.risk_neutral == trip.minimal
    assert extract_loading(trip.loading, trip.minimal, trip.risk_neutral) == 1.0


def test_benchmark_round_trip():
    assert benchmark(0.0, 123.0) == 0.0
    assert benchmark(5.0, 10.0) == 0.5
    rng = np.random.default_rng(8)
    for _ in range(100):
        p = float(rng.normal(0.0, 10.0))
        n = float(np.exp(rng.uniform(-2, 4)))
        assert abs(unbenchmark(benchmark(p, n), n) - p) <= 1e-15 * max(1.0, abs(p))
    with pytest.raises(ValueError):
        benchmark(1.0, 0.0)


def test_triple_invariants_random_sweep():
    rng = np.random.default_rng(99)
    for _ in range(500):
        params = MmmParams(*np.exp(rng.uniform(-3, 1, size=3)))
        t = float(rng.uniform(0.0, 40.0))
        T = t + float(rng.uniform(1e-2, 60.0))
        lam = float(rng.uniform(0.0, 0.3))
        L = float(rng.uniform(0.0, 1.0))
        st = MarketState(t=t, nbar_t=float(np.exp(rng.uniform(-1, 4))),
                         savings_t=float(np.exp(rng.uniform(0, 2))))
        trip = price(params, st, ClaimSpec.cat_bond(T, CatastropheModel(lam)), loading=L)
        assert trip.minimal <= trip.loading <= trip.risk_neutral + 1e-12
        recon = L * trip.risk_neutral + (1.0 - L) * trip.minimal
        assert abs(trip.loading - recon) <= 1e-12 * max(1.0, trip.loading)


def test_benchmarked_minimal_price_is_fair_in_the_mean():
    # across joint (market, catastrophe) scenarios the average terminal
    # benchmarked payoff matches the initial benchmarked minimal price, while
    # the benchmarked risk-neutral price overshoots by the closed-form factor
    n, T = 200_000, 89.0
    terminal_nbar = besq4_transition(
        PARAMS, np.full(n, PARAMS.n0), 0.0, T, substream(11, PURPOSE_NP, 0)
    )
    xis = substream(11, PURPOSE_CAT, 0).exponential(1.0 / MODEL.lam, size=n)
    payoff_benchmarked = (xis <= T) / terminal_nbar

    trip = price(PARAMS, state(), ClaimSpec.cat_bond(T, MODEL), loading=0.0)
    v0_hat = benchmark(trip.minimal, PARAMS.n0)
    r0_hat = benchmark(trip.risk_neutral, PARAMS.n0)

    se = payoff_benchmarked.std() / math.sqrt(n)
    assert abs(payoff_benchmarked.mean() - v0_hat) < 4.0 * se

    gap_factor = discounted_minimal_zcb(PARAMS, PARAMS.n0, 0.0, T)
    assert abs(payoff_benchmarked.mean() - r0_hat * gap_factor) < 4.0 * se
    assert payoff_benchmarked.mean() < r0_hat  # strict supermartingale gap

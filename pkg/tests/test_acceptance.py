"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run as:  pytest tests/test_acceptance.py -v -s
"""

import math

import numpy as np

from mmm.calibrate import fit_rho
from mmm.cli import main
from mmm.hedging import backtest_minimal_zcb, diversify_book, risk_minimize_cat, \
    risk_minimize_loading
from mmm.market_data import QuadraticVariationCurve
from mmm.model import MmmParams, discounted_minimal_zcb, price_ratio
from mmm.pricing import ClaimSpec, MarketState, extract_loading, price
from mmm.simulate import (
    PURPOSE_CAT,
    PURPOSE_NP,
    CatastropheModel,
    LoadingSpec,
    PathGrid,
    SampledPath,
    besq4_transition,
    sample_catastrophes,
    simulate_loading,
    simulate_path,
    simulate_paths,
    substream,
)

PARAMS = MmmParams(alpha0=0.18, eta=0.052, n0=10.0)


def report(number: int, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
    assert ok


def test_criterion_01_long_horizon_ratio_anchor():
    ratio = price_ratio(PARAMS, 10.0, 0.0, 89.0)
    ok = abs(ratio - 18.04) <= 0.5
    report(1, ok, f"89-year risk-neutral/minimal ratio = {ratio:.4f} (target 18.04 +- 0.5)")


def test_criterion_02_strict_local_martingale_monte_carlo():
    n = 1_000_000
    details = []
    ok = True
    for k, T in enumerate((5.0, 10.0, 30.0, 89.0)):
        rng = substream(8601, PURPOSE_NP, k)
        draws = besq4_transition(PARAMS, np.full(n, 10.0), 0.0, T, rng)
        sample = 10.0 / draws
        closed = discounted_minimal_zcb(PARAMS, 10.0, 0.0, T)
        se = sample.std() / math.sqrt(n)
        gap = abs(sample.mean() - closed)
        ok = ok and gap <= 4.0 * se
        details.append(f"T={T:g}: |mc-closed|={gap:.2e} (4se={4 * se:.2e})")
    anchor = discounted_minimal_zcb(PARAMS, 10.0, 0.0, 89.0)
    ok = ok and abs(anchor - 0.055432) < 5e-6
    report(2, ok, "E[nbar_0/nbar_T] matches closed form at 4 maturities; " + "; ".join(details))


def test_criterion_03_short_maturity_degeneracy():
    grid = PathGrid.regular(1.0 / 12.0, 10.0)
    paths = simulate_paths(PARAMS, grid, seed=303, n_paths=1000)
    median_nbar = np.median(paths, axis=0)
    worst = 0.0
    for i, t in enumerate(grid.times[:-1]):
        maturities = grid.times[i + 1:]
        ratios = np.atleast_1d(price_ratio(PARAMS, median_nbar[i], float(t), maturities))
        worst = max(worst, float(np.max(ratios - 1.0)))
    ok = worst < 0.02
    report(3, ok, f"max ratio-1 over all <=10y (t,T) pairs at the median path = {worst:.2e} "
                  "(bound 0.02)")


def test_criterion_04_calibration_recovery_study():
    grid = PathGrid.regular(1.0 / 12.0, 89.0)
    paths = simulate_paths(PARAMS, grid, seed=20240801, n_paths=200)
    eta_err, a0_err = [], []
    for nbar in paths:
        qv = np.concatenate(([0.0], np.cumsum(np.diff(np.sqrt(nbar)) ** 2)))
        res = fit_rho(QuadraticVariationCurve(t=grid.times, qv=qv), n0=float(nbar[0]))
        eta_err.append(abs(res.params.eta / PARAMS.eta - 1.0))
        a0_err.append(abs(res.params.alpha0 / PARAMS.alpha0 - 1.0))
    eta_err, a0_err = np.asarray(eta_err), np.asarray(a0_err)
    frac20 = float(np.mean(eta_err < 0.20))
    frac10 = float(np.mean(eta_err < 0.10))
    frac_a0 = float(np.mean(a0_err < 0.30))
    # measured on this study: eta within 20% for 100% of seeds (p95 = 9.6%),
    # within 10% for 95.5%; alpha0 within 30% for 94%
    ok = frac20 >= 0.80 and frac10 >= 0.95 and frac_a0 >= 0.90
    report(4, ok, f"eta within 20%: {frac20:.1%} (floor 80%), within 10%: {frac10:.1%} "
                  f"(pinned 95%), alpha0 within 30%: {frac_a0:.1%} (pinned 90%)")


def test_criterion_05_hedge_replication_and_halving():
    T = 30.0
    daily = PathGrid.regular(1.0 / 250.0, T)
    paths = simulate_paths(PARAMS, daily, seed=500, n_paths=1000)
    errs = [
        abs(backtest_minimal_zcb(PARAMS, SampledPath(daily, nbar, 500, i), T).value[-1] - 1.0)
        for i, nbar in enumerate(paths)
    ]
    mean_err = float(np.mean(errs))

    fine = PathGrid.regular(1.0 / 200.0, T)
    ensemble = simulate_paths(PARAMS, fine, seed=99, n_paths=200)
    halving = []
    for refine in (8, 4, 2, 1):
        grid = PathGrid(fine.times[::refine])
        step_errs = [
            abs(backtest_minimal_zcb(PARAMS, SampledPath(grid, nbar[::refine], 99, i), T)
                .value[-1] - 1.0)
            for i, nbar in enumerate(ensemble)
        ]
        halving.append(float(np.mean(step_errs)))
    monotone = halving[0] > halving[1] > halving[2] > halving[3]
    ok = mean_err < 0.005 and monotone
    report(5, ok, f"daily T=30 mean |terminal-1| = {mean_err:.5f} (bound 0.005); "
                  f"halving errors {['%.5f' % e for e in halving]} monotone={monotone}")


def test_criterion_06_price_triple_algebra_sweep():
    rng = np.random.default_rng(606)
    n = 10_000
    worst_order = worst_recon = worst_round = worst_ratio = 0.0
    rounds = 0
    for _ in range(n):
        params = MmmParams(*np.exp(rng.uniform(-3.0, 1.0, size=3)))
        t = float(rng.uniform(0.0, 40.0))
        T = t + float(rng.uniform(0.01, 60.0))
        lam = 0.0 if rng.random() < 0.1 else float(rng.uniform(0.005, 0.3))
        L = float(rng.uniform(0.0, 1.0))
        nbar = float(np.exp(rng.uniform(-1.0, 4.0)))
        savings = float(np.exp(rng.uniform(0.0, 2.0)))
        state = MarketState(t=t, nbar_t=nbar, savings_t=savings)
        trip = price(params, state, ClaimSpec.cat_bond(T, CatastropheModel(lam)), loading=L)

        worst_order = max(worst_order, trip.minimal - trip.loading,
                          trip.loading - trip.risk_neutral)
        # degree-weighted combination vs the direct closed form
        vbar = discounted_minimal_zcb(params, nbar, t, T)
        hbar = trip.risk_neutral / savings
        direct = hbar * savings * (1.0 - (1.0 - L) * (1.0 - vbar))
        worst_recon = max(worst_recon, abs(trip.loading - direct))
        if lam > 0.0:
            ratio_claim = trip.risk_neutral / trip.minimal
            ratio_bond = price_ratio(params, nbar, t, T)
            worst_ratio = max(worst_ratio, abs(ratio_claim - ratio_bond) / ratio_bond)
            if trip.risk_neutral - trip.minimal > 1e-3 * trip.risk_neutral:
                back = extract_loading(trip.loading, trip.minimal, trip.risk_neutral)
                worst_round = max(worst_round, abs(back - L))
                rounds += 1
    ok = (worst_order <= 1e-12 and worst_recon <= 1e-12 and worst_round <= 1e-12
          and worst_ratio <= 1e-12 and rounds > n // 2)
    report(6, ok, f"10^4 sweeps: ordering slack {worst_order:.1e}, combination gap "
                  f"{worst_recon:.1e}, round trip {worst_round:.1e} ({rounds} well-conditioned), "
                  f"ratio claim-independence {worst_ratio:.1e} (all bounds 1e-12)")


def test_criterion_07_risk_minimization_identities():
    T, n = 30.0, 10_000
    model = CatastropheModel(0.05)
    grid = PathGrid.regular(1.0 / 12.0, T)
    paths = simulate_paths(PARAMS, grid, seed=707, n_paths=n)
    xis = sample_catastrophes(model, substream(707, PURPOSE_CAT, 0), n)
    terminal = np.empty(n)
    cov_terms = np.empty(n)
    worst_identity = 0.0
    for i in range(n):
        led = risk_minimize_cat(PARAMS, SampledPath(grid, paths[i], 707, i), model,
                                float(xis[i]), T)
        worst_identity = max(worst_identity,
                             float(np.max(np.abs(led.holdings_np - led.benchmarked_pnl))))
        terminal[i] = led.benchmarked_pnl[-1]
        cov_terms[i] = float(np.sum(np.diff(led.benchmarked_pnl) * np.diff(1.0 / paths[i])))
    se = terminal.std() / math.sqrt(n)
    se_cov = cov_terms.std() / math.sqrt(n)
    ok = (worst_identity <= 1e-12 and abs(terminal.mean()) <= 4.0 * se
          and abs(cov_terms.mean()) <= 4.0 * se_cov)
    report(7, ok, f"NP-holdings = P&L to {worst_identity:.1e} (bound 1e-12); "
                  f"mean terminal P&L {terminal.mean():+.2e} (4se={4 * se:.2e}); "
                  f"P&L/savings increment covariance {cov_terms.mean():+.2e} "
                  f"(4se={4 * se_cov:.2e})")


def test_criterion_08_constant_loading_minimizes_fluctuations():
    T, n = 30.0, 10_000
    model = CatastropheModel(0.05)
    grid = PathGrid.regular(1.0 / 12.0, T)
    paths = simulate_paths(PARAMS, grid, seed=808, n_paths=n)
    xis = sample_catastrophes(model, substream(808, PURPOSE_CAT, 0), n)
    const = np.full(len(grid), 0.3)
    spec = LoadingSpec.martingale(0.3, 0.5)
    t_const, t_mart = np.empty(n), np.empty(n)
    for i in range(n):
        path = SampledPath(grid, paths[i], 808, i)
        t_const[i] = risk_minimize_loading(PARAMS, path, model, float(xis[i]), T,
                                           const).benchmarked_pnl[-1]
        wiggle = simulate_loading(spec, grid, 808, path_index=i)
        t_mart[i] = risk_minimize_loading(PARAMS, path, model, float(xis[i]), T,
                                          wiggle).benchmarked_pnl[-1]
    ok = t_const.var() < t_mart.var()
    report(8, ok, f"terminal P&L variance: constant L=0.3 {t_const.var():.3e} < "
                  f"martingale L {t_mart.var():.3e}")


def test_criterion_09_diversification_scaling():
    model = CatastropheModel(0.05)
    seeds = range(50)
    small = diversify_book(PARAMS, model, 100, 30.0, seeds=seeds)
    large = diversify_book(PARAMS, model, 10_000, 30.0, seeds=seeds)
    ratio = small.rms_across_seeds / large.rms_across_seeds
    ok = 6.7 <= ratio <= 15.0
    report(9, ok, f"RMS(100)/RMS(10000) = {ratio:.2f} (expected near 10, bounds [6.7, 15])")


def test_criterion_10_cli_determinism(tmp_path):
    import datetime as dt

    from mmm.model import rho

    d0 = dt.date(1926, 1, 1)
    dates = [d0 + dt.timedelta(days=round(k * 365.25 / 12.0)) for k in range(241)]
    tgrid = np.array([(d - d0).days for d in dates]) / 365.25
    r = np.asarray(rho(PARAMS, tgrid))
    nbar = (math.sqrt(10.0) + np.concatenate(([0.0], np.cumsum(np.sqrt(np.diff(r)))))) ** 2
    data = tmp_path / "index.csv"
    with open(data, "w", encoding="utf-8") as handle:
        handle.write("date,index,rate\n")
        for day, level in zip(dates, nbar):
            handle.write(f"{day.isoformat()},{float(level)!r},0.0\n")

    base = ["--params", "0.18,0.052,10"]
    runs = {
        "calibrate": ["calibrate", "--data", str(data)],
        "price": ["price", "--maturity", "89", "--kind", "cat"] + base,
        "figures": ["figures", "--seed", "4", "--horizon", "30"] + base,
        "simulate": ["simulate", "--horizon", "5", "--n-paths", "3", "--seed", "4"] + base,
        "hedge": ["hedge", "--maturity", "20", "--kind", "cat", "--seed", "4"] + base,
        "book": ["book", "--maturity", "10", "--n-contracts", "20", "--replications", "5",
                 "--seed", "4", "--step", "0.25"] + base,
    }
    identical = True
    for name, argv in runs.items():
        out_a, out_b = tmp_path / f"{name}_a", tmp_path / f"{name}_b"
        assert main(argv + ["--out", str(out_a)]) == 0
        assert main(argv + ["--out", str(out_b)]) == 0
        for f in sorted(p.name for p in out_a.iterdir()):
            identical = identical and (out_a / f).read_bytes() == (out_b / f).read_bytes()
    # worker-split independence of the path engine backing the CLI
    whole = simulate_paths(PARAMS, PathGrid.regular(0.25, 5.0), seed=4, n_paths=8)
    split = np.vstack([
        simulate_paths(PARAMS, PathGrid.regular(0.25, 5.0), seed=4, n_paths=3),
        simulate_paths(PARAMS, PathGrid.regular(0.25, 5.0), seed=4, n_paths=5, path_offset=3),
    ])
    identical = identical and bool(np.array_equal(whole, split))
    report(10, identical, "all six CLI commands byte-identical on re-run; "
                          "path engine invariant to worker split")

"""Command-line front end: calibrate, price, figures, simulate, hedge, book.

Every command is a pure function of its inputs: fixed seed and input files
give byte-identical outputs.  Configuration comes from an optional
line-oriented key=value file plus flags; flags win.  Exit codes: 0 success,
2 usage or validation error, 3 numerical failure, each with a single
``error: ...`` line on stderr.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from .calibrate import fit_rho, format_calibration, write_fit_csv
from .hedging import (
    backtest_minimal_zcb,
    diversify_book,
    risk_minimize_cat,
    risk_minimize_loading,
    write_ledger_csv,
)
from .market_data import (
    DiscountedSeries,
    build_discounted,
    load_raw,
    quadratic_variation,
    write_discounted_csv,
    write_qv_csv,
)
from .model import (
    MmmParams,
    discounted_minimal_zcb,
    hedge_fraction,
    price_ratio,
    rho,
)
from .pricing import ClaimSpec, MarketState, price
from .simulate import (
    PURPOSE_CAT,
    CatastropheModel,
    LoadingSpec,
    PathGrid,
    SampledPath,
    sample_catastrophe,
    simulate_loading,
    simulate_path,
    simulate_paths,
    substream,
    write_path_csv,
)

SEED_ENV_VAR = "MMM_SEED"

_FLOAT_KEYS = {"step", "horizon", "maturity", "lambda", "loading", "loading_vol",
               "normalize", "eta_min", "eta_max"}
_INT_KEYS = {"seed", "n_paths", "n_contracts", "replications"}
_STR_KEYS = {"data", "out", "params", "kind"}


def _read_config(path: str) -> dict:
    values: dict = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}: line {lineno}: expected key=value, got {line!r}")
        key, _, raw = line.partition("=")
        key = key.strip().replace("-", "_")
        raw = raw.strip()
        if key in _FLOAT_KEYS:
            values[key] = float(raw)
        elif key in _INT_KEYS:
            values[key] = int(raw)
        elif key in _STR_KEYS:
            values[key] = raw
        else:
            raise ValueError(f"{path}: line {lineno}: unknown key {key!r}")
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmm",
        description="Pricing, simulation and hedging of long-dated contracts "
                    "under the minimal market model.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in [
        ("calibrate", "fit alpha0 and eta to the quadratic variation of a data series"),
        ("price", "emit minimal / risk-neutral / loading quotes"),
        ("figures", "emit CSV bundles behind the standard diagnostic figures"),
        ("simulate", "dump simulated discounted-NP paths"),
        ("hedge", "run a hedge backtest or risk-minimization ledger"),
        ("book", "book-diversification experiment"),
    ]:
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", help="key=value configuration file; flags override it")
        p.add_argument("--data", help="input CSV with header date,index[,rate]")
        p.add_argument("--params", help="explicit model parameters a0,eta,n0")
        p.add_argument("--seed", type=int, help=f"master seed (default ${SEED_ENV_VAR} or 0)")
        p.add_argument("--step", type=float, help="grid step in years (default 1/12)")
        p.add_argument("--horizon", type=float, help="simulation horizon in years (default 89)")
        p.add_argument("--maturity", type=float, help="claim maturity in years (default horizon)")
        p.add_argument("--lambda", dest="lam", type=float,
                       help="catastrophe hazard rate per year (default 0.05)")
        p.add_argument("--loading", type=float, help="loading degree")
        p.add_argument("--loading-vol", dest="loading_vol", type=float,
                       help="loading-degree volatility (martingale loading)")
        p.add_argument("--normalize", type=float,
                       help="rescale the first discounted value to this level (e.g. 10)")
        p.add_argument("--eta-min", dest="eta_min", type=float, help="lower eta bound")
        p.add_argument("--eta-max", dest="eta_max", type=float, help="upper eta bound")
        p.add_argument("--kind", choices=["zcb", "cat", "cat_pp"], help="claim kind")
        p.add_argument("--n-paths", dest="n_paths", type=int, help="number of simulated paths")
        p.add_argument("--n-contracts", dest="n_contracts", type=int,
                       help="contracts per book replication")
        p.add_argument("--replications", type=int, help="book replications")
        p.add_argument("--out", help="output directory (default .)")
    return parser


_DEFAULTS = dict(step=1.0 / 12.0, horizon=89.0, lam=0.05, loading=None, loading_vol=0.0,
                 normalize=None, eta_min=1e-4, eta_max=0.5, kind="zcb", n_paths=1,
                 n_contracts=100, replications=50, out=".")


def _resolve(args: argparse.Namespace) -> argparse.Namespace:
    merged = dict(_DEFAULTS)
    if args.config:
        cfg = _read_config(args.config)
        if "lambda" in cfg:
            cfg["lam"] = cfg.pop("lambda")
        merged.update(cfg)
    for key, value in vars(args).items():
        if value is not None:
            merged[key] = value
    merged.setdefault("data", None)
    merged.setdefault("params", None)
    if merged.get("seed") is None:
        merged["seed"] = int(os.environ.get(SEED_ENV_VAR, "0"))
    if merged.get("maturity") is None:
        merged["maturity"] = merged["horizon"]
    return argparse.Namespace(**merged)


def _parse_params(text: str) -> MmmParams:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError("--params must be three comma-separated numbers a0,eta,n0")
    a0, eta, n0 = (float(p) for p in parts)
    return MmmParams(a0, eta, n0)


def _load_series(cfg) -> DiscountedSeries:
    raw = load_raw(cfg.data)
    return build_discounted(raw, normalize_to=cfg.normalize)


def _get_params_and_series(cfg) -> tuple[MmmParams, DiscountedSeries | None]:
    """Explicit params win; otherwise calibrate from the data series."""
    series = _load_series(cfg) if cfg.data else None
    if cfg.params:
        return _parse_params(cfg.params), series
    if series is None:
        raise ValueError("either --params or --data is required")
    curve = quadratic_variation(series)
    result = fit_rho(curve, (cfg.eta_min, cfg.eta_max), n0=float(series.nbar[0]))
    return result.params, series


def _outdir(cfg) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _fmt(x: float) -> str:
    return repr(float(x))


def cmd_calibrate(cfg) -> int:
    if not cfg.data:
        raise ValueError("calibrate requires --data")
    series = _load_series(cfg)
    curve = quadratic_variation(series)
    result = fit_rho(curve, (cfg.eta_min, cfg.eta_max), n0=float(series.nbar[0]))
    out = _outdir(cfg)
    (out / "calibration.txt").write_text(format_calibration(result), encoding="utf-8")
    write_fit_csv(out / "qv_fit.csv", curve, result.params)
    print(f"wrote {out / 'calibration.txt'} and {out / 'qv_fit.csv'}")
    if not result.converged:
        print(f"error: calibration did not converge: {result.message}", file=sys.stderr)
        return 3
    return 0


def _claim(cfg) -> ClaimSpec:
    if cfg.kind == "zcb":
        return ClaimSpec.zcb(cfg.maturity)
    convention = "principal_protected" if cfg.kind == "cat_pp" else "occurrence"
    return ClaimSpec.cat_bond(cfg.maturity, CatastropheModel(cfg.lam), convention)


def cmd_price(cfg) -> int:
    params, series = _get_params_and_series(cfg)
    claim = _claim(cfg)
    loading = 0.0 if cfg.loading is None else cfg.loading
    if series is not None:
        rows = [(float(t), float(n), float(s)) for t, n, s in
                zip(series.t, series.nbar, series.savings) if t <= claim.maturity]
    else:
        rows = [(0.0, params.n0, 1.0)]
    out = _outdir(cfg)
    quote_path = out / "quotes.csv"
    with open(quote_path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("t,V,R,B,L\n")
        for t, nbar, savings in rows:
            trip = price(params, MarketState(t, nbar, savings), claim, loading)
            handle.write(",".join(_fmt(v) for v in
                                  (t, trip.minimal, trip.risk_neutral, trip.loading,
                                   trip.loading_degree)) + "\n")
    print(f"wrote {quote_path} ({len(rows)} quotes)")
    return 0


def cmd_figures(cfg) -> int:
    params, series = _get_params_and_series(cfg)
    loading = 0.3 if cfg.loading is None else cfg.loading
    if series is not None:
        times = series.t
        nbar = series.nbar
        horizon = float(times[-1])
    else:
        grid = PathGrid.regular(cfg.step, cfg.horizon)
        path = simulate_path(params, grid, cfg.seed)
        times, nbar, horizon = grid.times, path.nbar, cfg.horizon

    out = _outdir(cfg)

    with open(out / "fig1_log_discounted.csv", "w", encoding="utf-8", newline="\n") as handle:
        handle.write("t,log_nbar\n")
        for t, n in zip(times, nbar):
            handle.write(f"{_fmt(t)},{_fmt(math.log(n))}\n")

    curve = quadratic_variation(DiscountedSeries(t=times, nbar=nbar, savings=np.ones(len(times))))
    with open(out / "fig2_qv.csv", "w", encoding="utf-8", newline="\n") as handle:
        handle.write("t,qv,rho_fit\n")
        fitted = np.atleast_1d(rho(params, times))
        for t, q, r in zip(times, curve.qv, fitted):
            handle.write(f"{_fmt(t)},{_fmt(q)},{_fmt(r)}\n")

    live = times < horizon
    with open(out / "fig3_ratio.csv", "w", encoding="utf-8", newline="\n") as handle:
        handle.write("t,time_to_maturity,ratio\n")
        ratios = np.atleast_1d(price_ratio(params, nbar[live], times[live], horizon))
        for t, r in zip(times[live], ratios):
            handle.write(f"{_fmt(t)},{_fmt(horizon - t)},{_fmt(r)}\n")

    with open(out / "fig4_fraction.csv", "w", encoding="utf-8", newline="\n") as handle:
        handle.write("t,fraction_in_np\n")
        fractions = np.atleast_1d(hedge_fraction(params, nbar[live], times[live], horizon))
        for t, f in zip(times[live], fractions):
            handle.write(f"{_fmt(t)},{_fmt(f)}\n")

    hedge_path = SampledPath(grid=PathGrid(times), nbar=np.asarray(nbar, dtype=float),
                             seed=cfg.seed)
    ledger = backtest_minimal_zcb(params, hedge_path, horizon)
    bond = np.atleast_1d(discounted_minimal_zcb(params, nbar, times, horizon))
    with open(out / "fig5_hedge.csv", "w", encoding="utf-8", newline="\n") as handle:
        handle.write("t,log_hedge_value,log_bond,log_loading_price\n")
        for t, v, b in zip(times, ledger.value, bond):
            loaded = loading + (1.0 - loading) * b
            handle.write(f"{_fmt(t)},{_fmt(math.log(v))},{_fmt(math.log(b))},"
                         f"{_fmt(math.log(loaded))}\n")

    names = ["fig1_log_discounted.csv", "fig2_qv.csv", "fig3_ratio.csv",
             "fig4_fraction.csv", "fig5_hedge.csv"]
    print(f"wrote {', '.join(str(out / n) for n in names)}")
    return 0


def cmd_simulate(cfg) -> int:
    params, _ = _get_params_and_series(cfg)
    grid = PathGrid.regular(cfg.step, cfg.horizon)
    block = simulate_paths(params, grid, cfg.seed, cfg.n_paths)
    out = _outdir(cfg)
    for i in range(cfg.n_paths):
        sampled = SampledPath(grid=grid, nbar=block[i], seed=cfg.seed, path_index=i)
        write_path_csv(out / f"path_{i:04d}.csv", sampled)
    print(f"wrote {cfg.n_paths} path file(s) under {out}")
    return 0


def cmd_hedge(cfg) -> int:
    params, _ = _get_params_and_series(cfg)
    T = cfg.maturity
    grid = PathGrid.regular(cfg.step, T)
    path = simulate_path(params, grid, cfg.seed)
    if cfg.kind == "zcb":
        ledger = backtest_minimal_zcb(params, path, T)
    else:
        model = CatastropheModel(cfg.lam)
        xi = sample_catastrophe(model, substream(cfg.seed, PURPOSE_CAT, 0))
        if cfg.loading is None and cfg.loading_vol == 0.0:
            ledger = risk_minimize_cat(params, path, model, xi, T)
        else:
            l0 = 0.3 if cfg.loading is None else cfg.loading
            if cfg.loading_vol > 0.0:
                spec = LoadingSpec.martingale(l0, cfg.loading_vol)
            else:
                spec = LoadingSpec.constant(l0)
            loading = simulate_loading(spec, grid, cfg.seed)
            ledger = risk_minimize_loading(params, path, model, xi, T, loading)
    out = _outdir(cfg)
    write_ledger_csv(out / "ledger.csv", ledger)
    print(f"wrote {out / 'ledger.csv'}")
    return 0


def cmd_book(cfg) -> int:
    params, _ = _get_params_and_series(cfg)
    model = CatastropheModel(cfg.lam)
    seeds = [cfg.seed + r for r in range(cfg.replications)]
    result = diversify_book(params, model, cfg.n_contracts, cfg.maturity, seeds, step=cfg.step)
    out = _outdir(cfg)
    text = (
        f"n_contracts={result.n_contracts}\n"
        f"replications={cfg.replications}\n"
        f"avg_benchmarked_pnl_terminal={_fmt(result.avg_benchmarked_pnl_terminal)}\n"
        f"rms_across_seeds={_fmt(result.rms_across_seeds)}\n"
    )
    (out / "book.txt").write_text(text, encoding="utf-8")
    print(f"wrote {out / 'book.txt'}")
    return 0


_COMMANDS = {
    "calibrate": cmd_calibrate,
    "price": cmd_price,
    "figures": cmd_figures,
    "simulate": cmd_simulate,
    "hedge": cmd_hedge,
    "book": cmd_book,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args)
        return _COMMANDS[args.command](cfg)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

"""Least-squares fit of (alpha0, eta) to an observed quadratic-variation curve.

The model clock rho(t) = alpha0 * g_eta(t) with g_eta(t) = (exp(eta t) - 1)/(4 eta)
is linear in alpha0, so the fit profiles it out: for each eta the optimal
alpha0 is a one-line weighted regression through the origin, and eta is
found by a one-dimensional search (coarse scan plus golden-section
refinement) over the supplied bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .market_data import QuadraticVariationCurve
from .model import MmmParams, rho

__all__ = ["CalibrationResult", "fit_rho", "format_calibration", "write_fit_csv"]

DEFAULT_ETA_BOUNDS = (1e-4, 0.5)
ETA_TOL = 1e-7
MAX_GOLDEN_ITER = 200
_SCAN_POINTS = 64
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class CalibrationResult:
    """Fitted parameters plus fit diagnostics."""

    params: MmmParams
    sse: float
    evaluations: int
    converged: bool
    message: str = ""


def _profile(eta: float, t: np.ndarray, qv: np.ndarray, w: np.ndarray) -> tuple[float, float]:
    """Optimal alpha0 and sse at fixed eta."""
    g = np.expm1(eta * t) / (4.0 * eta)
    denom = float(np.sum(w * g * g))
    alpha0 = float(np.sum(w * qv * g)) / denom
    resid = qv - alpha0 * g
    return alpha0, float(np.sum(w * resid * resid))


def fit_rho(
    curve: QuadraticVariationCurve,
    eta_bounds: tuple[float, float] = DEFAULT_ETA_BOUNDS,
    n0: float = 1.0,
    terminal_weight: bool = False,
) -> CalibrationResult:
    """Fit alpha0 > 0 and eta within ``eta_bounds`` to the curve.

    ``n0`` is passed through into the returned parameters (the curve itself
    carries no level information); callers fitting a series pass its first
    discounted value.  ``terminal_weight`` switches from equal weights to
    weights proportional to t, emphasizing the late part of the curve.
    ``converged`` is False when the eta minimizer sits on a bound.
    """
    lo, hi = eta_bounds
    if not (0.0 < lo < hi):
        raise ValueError("eta bounds must satisfy 0 < lo < hi")
    t = np.asarray(curve.t, dtype=float)
    qv = np.asarray(curve.qv, dtype=float)
    if len(t) < 3:
        raise ValueError("calibration needs at least 3 curve points")
    if t[-1] - t[0] <= 1.0:
        raise ValueError("calibration needs a curve spanning more than one year")
    if not np.any(qv > 0.0):
        raise ValueError("degenerate curve: quadratic variation is identically zero")

    if terminal_weight:
        w = t / t[-1]
    else:
        w = np.ones_like(t)

    evaluations = 0

    def sse_at(eta: float) -> float:
        nonlocal evaluations
        evaluations += 1
        return _profile(eta, t, qv, w)[1]

    # Coarse log-spaced scan to bracket the minimum, then golden-section.
    grid = np.exp(np.linspace(math.log(lo), math.log(hi), _SCAN_POINTS))
    scan = [sse_at(e) for e in grid]
    best = int(np.argmin(scan))
    a = grid[max(best - 1, 0)]
    b = grid[min(best + 1, _SCAN_POINTS - 1)]

    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = sse_at(c), sse_at(d)
    for _ in range(MAX_GOLDEN_ITER):
        if b - a <= ETA_TOL:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = sse_at(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = sse_at(d)
    eta_hat, f_hat = (c, fc) if fc < fd else (d, fd)

    # Local refinement: one parabolic-vertex step through the final bracket
    # interior, which sharpens the golden-section result to well below the
    # bracket tolerance on this smooth objective.
    x1, x3 = (c, d) if c < d else (d, c)
    f1, f3 = (fc, fd) if c < d else (fd, fc)
    x2 = 0.5 * (x1 + x3)
    if x1 < x2 < x3:
        f2 = sse_at(x2)
        num = (x2 - x1) ** 2 * (f2 - f3) - (x2 - x3) ** 2 * (f2 - f1)
        den = (x2 - x1) * (f2 - f3) - (x2 - x3) * (f2 - f1)
        candidates = [(f1, x1), (f2, x2), (f3, x3), (f_hat, eta_hat)]
        if den != 0.0:
            vertex = min(max(x2 - 0.5 * num / den, lo), hi)
            candidates.append((sse_at(vertex), vertex))
        f_hat, eta_hat = min(candidates)

    eta_hat = float(eta_hat)
    alpha0_hat, sse = _profile(eta_hat, t, qv, w)

    if not alpha0_hat > 0.0:
        raise ValueError("degenerate curve: fitted alpha0 is not positive")

    message = ""
    converged = True
    if eta_hat - lo < 10.0 * ETA_TOL:
        converged = False
        message = f"eta minimizer sits on the lower bound {lo}"
    elif hi - eta_hat < 10.0 * ETA_TOL:
        converged = False
        message = f"eta minimizer sits on the upper bound {hi}"

    params = MmmParams(alpha0=alpha0_hat, eta=eta_hat, n0=n0)
    return CalibrationResult(params=params, sse=sse, evaluations=evaluations,
                             converged=converged, message=message)


def format_calibration(result: CalibrationResult) -> str:
    """Key=value text block for file output."""
    lines = [
        f"alpha0={result.params.alpha0!r}",
        f"eta={result.params.eta!r}",
        f"n0={result.params.n0!r}",
        f"sse={result.sse!r}",
        f"evaluations={result.evaluations}",
        f"converged={str(result.converged).lower()}",
    ]
    if result.message:
        lines.append(f"message={result.message}")
    return "\n".join(lines) + "\n"


def write_fit_csv(path, curve: QuadraticVariationCurve, params: MmmParams) -> None:
    """Dump ``t,qv,rho_fit`` for plotting the fit against the data."""
    fitted = rho(params, curve.t)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("t,qv,rho_fit\n")
        for ti, qi, ri in zip(curve.t, curve.qv, np.atleast_1d(fitted)):
            handle.write(f"{float(ti)!r},{float(qi)!r},{float(ri)!r}\n")

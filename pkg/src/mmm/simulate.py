"""Exact and Euler simulation of the discounted NP, catastrophe times and
loading-degree paths, with reproducible stream-split seeding.

The discounted NP has an exact transition law: over (t, T] it is a scaled
noncentral chi-squared draw with four degrees of freedom,

    nbar_T = drho * ((Z1 + sqrt(nbar_t / drho))^2 + Z2^2 + Z3^2 + Z4^2),

with drho = rho(T) - rho(t), so paths can be sampled on any grid without
discretization bias.  An Euler integrator of the level SDE
d nbar = alpha dt + sqrt(alpha nbar) dW exists as a cross-check only.

Randomness is split into substreams addressed by (master seed, purpose,
path index) via counter-based Philox generators, so every draw is fully
determined by those three values no matter how work is batched or
distributed across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import MmmParams, alpha, rho_increment

__all__ = [
    "PathGrid",
    "SampledPath",
    "CatastropheModel",
    "LoadingSpec",
    "PURPOSE_NP",
    "PURPOSE_CAT",
    "PURPOSE_LOADING",
    "PURPOSE_EULER",
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
    "write_path_csv",
]

PURPOSE_NP = 0
PURPOSE_CAT = 1
PURPOSE_LOADING = 2
PURPOSE_EULER = 3

EULER_FLOOR = 1e-12

# Cap on floats held per normal block when batching paths (about 64 MB).
_BLOCK_FLOAT_BUDGET = 2**23


@dataclass(frozen=True)
class PathGrid:
    """Strictly increasing sampling times starting at 0."""

    times: np.ndarray

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        object.__setattr__(self, "times", times)
        if times.ndim != 1 or len(times) < 1:
            raise ValueError("grid needs at least one time point")
        if times[0] != 0.0:
            raise ValueError("grid must start at 0")
        if np.any(np.diff(times) <= 0.0):
            raise ValueError("grid times must be strictly increasing")

    @classmethod
    def regular(cls, step: float, horizon: float) -> "PathGrid":
        """Evenly spaced grid from 0 to horizon with the given step."""
        if not (step > 0.0 and horizon > 0.0):
            raise ValueError("step and horizon must be positive")
        n = int(round(horizon / step))
        if n < 1:
            raise ValueError("horizon shorter than one step")
        return cls(np.linspace(0.0, horizon, n + 1))

    def __len__(self) -> int:
        return len(self.times)


@dataclass(frozen=True)
class SampledPath:
    """One discounted-NP path on a grid; fully determined by (seed, path_index)."""

    grid: PathGrid
    nbar: np.ndarray
    seed: int
    path_index: int = 0

    def __post_init__(self) -> None:
        if len(self.nbar) != len(self.grid):
            raise ValueError("path and grid lengths differ")
        if np.any(np.asarray(self.nbar) <= 0.0):
            raise ValueError("discounted NP path must stay positive")


@dataclass(frozen=True)
class CatastropheModel:
    """Constant-hazard first-catastrophe time: exponential with rate lam per year."""

    lam: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lam) and self.lam >= 0.0):
            raise ValueError("hazard rate must be a nonnegative finite real")


@dataclass(frozen=True)
class LoadingSpec:
    """Loading-degree process: constant, or a driftless exponential martingale.

    The martingale kind moves by L * exp(vol * sqrt(dt) * Z - vol^2 dt / 2)
    per step, driven by a stream independent of the NP and of the
    catastrophe time, so its expectation stays at l0.
    """

    kind: str
    l0: float
    vol: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("constant", "martingale"):
            raise ValueError(f"unknown loading kind {self.kind!r}")
        if self.kind == "constant":
            if self.l0 < 0.0:
                raise ValueError("constant loading degree must be nonnegative")
            if self.vol != 0.0:
                raise ValueError("constant loading degree has no volatility")
        else:
            if not self.l0 > 0.0:
                raise ValueError("martingale loading degree must start positive")
            if self.vol < 0.0:
                raise ValueError("loading volatility must be nonnegative")

    @classmethod
    def constant(cls, l0: float) -> "LoadingSpec":
        return cls("constant", l0)

    @classmethod
    def martingale(cls, l0: float, vol: float) -> "LoadingSpec":
        return cls("martingale", l0, vol)


def substream(seed: int, purpose: int, index: int = 0) -> np.random.Generator:
    """Counter-based generator for the (purpose, index) substream of a master seed."""
    if seed < 0 or index < 0:
        raise ValueError("seed and index must be nonnegative")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, purpose, index))))


def _besq4_step(nbar, drho, z):
    """One exact transition given standard normals z of shape (..., 4)."""
    nc = np.sqrt(nbar / drho)
    return drho * ((z[..., 0] + nc) ** 2 + z[..., 1] ** 2 + z[..., 2] ** 2 + z[..., 3] ** 2)


def besq4_transition(params: MmmParams, nbar_t, t: float, T: float, rng: np.random.Generator):
    """Draw nbar_T exactly given nbar_t; returns nbar_t unchanged when rho is flat."""
    nbar_t = np.asarray(nbar_t, dtype=float)
    if np.any(nbar_t <= 0.0):
        raise ValueError("discounted NP level must be positive")
    drho = rho_increment(params, t, T)
    if drho == 0.0:
        out = nbar_t.copy()
        return float(out) if out.ndim == 0 else out
    z = rng.standard_normal(nbar_t.shape + (4,))
    out = _besq4_step(nbar_t, drho, z)
    return float(out) if out.ndim == 0 else out


def _grid_drho(params: MmmParams, grid: PathGrid) -> np.ndarray:
    return np.asarray(rho_increment(params, grid.times[:-1], grid.times[1:]))


def simulate_path(params: MmmParams, grid: PathGrid, seed: int, path_index: int = 0) -> SampledPath:
    """Exact path of the discounted NP from params.n0 along the grid."""
    n_steps = len(grid) - 1
    nbar = np.empty(len(grid))
    nbar[0] = params.n0
    if n_steps:
        drho = _grid_drho(params, grid)
        z = substream(seed, PURPOSE_NP, path_index).standard_normal((n_steps, 4))
        x = params.n0
        for k in range(n_steps):
            x = _besq4_step(x, drho[k], z[k])
            nbar[k + 1] = x
    return SampledPath(grid=grid, nbar=nbar, seed=seed, path_index=path_index)


def simulate_paths(params: MmmParams, grid: PathGrid, seed: int, n_paths: int,
                   path_offset: int = 0) -> np.ndarray:
    """Exact paths for indices [path_offset, path_offset + n_paths).

    Returns an (n_paths, len(grid)) array whose row i reproduces
    simulate_path(..., path_index=path_offset + i) bitwise; batching is an
    internal detail only.
    """
    n_steps = len(grid) - 1
    out = np.empty((n_paths, len(grid)))
    out[:, 0] = params.n0
    if n_steps == 0 or n_paths == 0:
        return out
    drho = _grid_drho(params, grid)
    chunk = max(1, _BLOCK_FLOAT_BUDGET // (n_steps * 4))
    for start in range(0, n_paths, chunk):
        stop = min(start + chunk, n_paths)
        z = np.stack([
            substream(seed, PURPOSE_NP, path_offset + i).standard_normal((n_steps, 4))
            for i in range(start, stop)
        ])
        x = np.full(stop - start, params.n0)
        for k in range(n_steps):
            x = _besq4_step(x, drho[k], z[:, k, :])
            out[start:stop, k + 1] = x
    return out


def _euler_chain(times: np.ndarray, x0: float, alpha_left: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Euler recursion on the level SDE; negative excursions reflect to a floor."""
    dt = np.diff(times)
    out = np.empty(len(times))
    out[0] = x0
    x = x0
    for k in range(len(dt)):
        x = x + alpha_left[k] * dt[k] + math.sqrt(alpha_left[k] * x * dt[k]) * z[k]
        x = max(abs(x), EULER_FLOOR)
        out[k + 1] = x
    return out


def simulate_path_euler(params: MmmParams, grid: PathGrid, seed: int,
                        path_index: int = 0) -> SampledPath:
    """Euler-Maruyama path; cross-check integrator, best with steps <= 1/250 year."""
    n_steps = len(grid) - 1
    if n_steps == 0:
        return SampledPath(grid=grid, nbar=np.array([params.n0]), seed=seed, path_index=path_index)
    z = substream(seed, PURPOSE_EULER, path_index).standard_normal(n_steps)
    alpha_left = np.atleast_1d(alpha(params, grid.times[:-1]))
    nbar = _euler_chain(grid.times, params.n0, alpha_left, z)
    return SampledPath(grid=grid, nbar=nbar, seed=seed, path_index=path_index)


def simulate_paths_euler(params: MmmParams, grid: PathGrid, seed: int, n_paths: int,
                         path_offset: int = 0) -> np.ndarray:
    """Euler ensemble; row i matches simulate_path_euler(..., path_index=offset+i)."""
    n_steps = len(grid) - 1
    out = np.empty((n_paths, len(grid)))
    out[:, 0] = params.n0
    if n_steps == 0 or n_paths == 0:
        return out
    dt = np.diff(grid.times)
    alpha_left = np.atleast_1d(alpha(params, grid.times[:-1]))
    chunk = max(1, _BLOCK_FLOAT_BUDGET // n_steps)
    for start in range(0, n_paths, chunk):
        stop = min(start + chunk, n_paths)
        z = np.stack([
            substream(seed, PURPOSE_EULER, path_offset + i).standard_normal(n_steps)
            for i in range(start, stop)
        ])
        x = np.full(stop - start, params.n0)
        for k in range(n_steps):
            x = x + alpha_left[k] * dt[k] + np.sqrt(alpha_left[k] * x * dt[k]) * z[:, k]
            x = np.maximum(np.abs(x), EULER_FLOOR)
            out[start:stop, k + 1] = x
    return out


def sample_catastrophe(model: CatastropheModel, rng: np.random.Generator) -> float:
    """First catastrophe time; +inf when the hazard rate is zero."""
    if model.lam == 0.0:
        return math.inf
    return float(rng.exponential(1.0 / model.lam))


def sample_catastrophes(model: CatastropheModel, rng: np.random.Generator, n: int) -> np.ndarray:
    """Vector of n independent first-catastrophe times."""
    if model.lam == 0.0:
        return np.full(n, math.inf)
    return rng.exponential(1.0 / model.lam, size=n)


def claim_probability(model: CatastropheModel, t, T, xi):
    """Conditional probability that the catastrophe happens by T, seen at t.

    1 once xi <= t; otherwise 1 - exp(-lam (T - t)) by the memoryless
    property.  A martingale in t for fixed T.
    """
    t = np.asarray(t, dtype=float)
    if np.any(np.asarray(T) < t):
        raise ValueError("claim probability requires t <= T")
    out = np.where(np.asarray(xi) <= t, 1.0, -np.expm1(-model.lam * (np.asarray(T) - t)))
    return float(out) if out.ndim == 0 else out


def simulate_loading(spec: LoadingSpec, grid: PathGrid, seed: int,
                     path_index: int = 0) -> np.ndarray:
    """Loading-degree values along the grid, one per grid time."""
    n_steps = len(grid) - 1
    if spec.kind == "constant" or spec.vol == 0.0:
        return np.full(len(grid), spec.l0)
    dt = np.diff(grid.times)
    z = substream(seed, PURPOSE_LOADING, path_index).standard_normal(n_steps)
    log_increments = spec.vol * np.sqrt(dt) * z - 0.5 * spec.vol**2 * dt
    out = np.empty(len(grid))
    out[0] = spec.l0
    out[1:] = spec.l0 * np.exp(np.cumsum(log_increments))
    return out


def write_path_csv(path, sampled: SampledPath) -> None:
    """Dump one path as ``t,nbar``."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("t,nbar\n")
        for ti, ni in zip(sampled.grid.times, sampled.nbar):
            handle.write(f"{float(ti)!r},{float(ni)!r}\n")

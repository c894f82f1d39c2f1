"""Reconfiguration rates and the temperature-rescaling collapse fit.

The observable is the mean fraction of sites flipping per recorded sweep,

    R = (1 / n_steps) * sum_t (1 / 2N) * sum_i |s_i(t+1) - s_i(t)|,

assembled into R(T) curves at fixed transverse field. Curves taken at
different fields are compared by rescaling T -> h_x**n * T and measuring how
tightly they collapse onto one master curve: the objective is the mean
cross-curve variance on a common log-log grid, normalized by the variance of
the pooled data (0 = perfect collapse). The best exponent n is located by a
coarse scan followed by golden-section refinement.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    FitImpossibleError,
    NoOverlapError,
    RescalingUndefinedError,
    UndefinedRateError,
)
from .model import ModelParams, SpinConfig
from .qmc import Trajectory, run_relaxation

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class RateCurve:
    """R(T) samples at one transverse field, temperatures ascending."""

    h_x: float
    temperatures: np.ndarray = field(repr=False)
    rates: np.ndarray = field(repr=False)
    stderr: np.ndarray = field(repr=False)
    metadata: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "temperatures",
                           np.asarray(self.temperatures, dtype=np.float64))
        object.__setattr__(self, "rates", np.asarray(self.rates, dtype=np.float64))
        object.__setattr__(self, "stderr", np.asarray(self.stderr, dtype=np.float64))
        t, r = self.temperatures, self.rates
        if t.shape != r.shape or t.shape != self.stderr.shape:
            raise ValueError("temperatures, rates, stderr must have equal length")
        if np.any(t <= 0) or np.any(np.diff(t) <= 0):
            raise ValueError("temperatures must be positive and strictly increasing")
        if np.any((r < 0) | (r > 1)):
            raise ValueError("rates must lie in [0, 1]")


@dataclass(frozen=True)
class CollapseResult:
    """Fitted rescaling exponent with its search history."""

    n: float
    residual: float
    trace: tuple[tuple[float, float], ...]
    rescaled: tuple[RateCurve, ...] = field(repr=False)
    dropped_zero_rates: dict = field(default_factory=dict)


def reconfiguration_rate(traj: Trajectory) -> float:
    """Mean flipped-site fraction per sweep of a trajectory."""
    snaps = traj.snapshots
    if snaps.shape[0] < 2:
        raise UndefinedRateError("rate undefined for a single-snapshot trajectory")
    diffs = np.abs(snaps[1:].astype(np.int16) - snaps[:-1].astype(np.int16))
    return float(diffs.sum()) / (2 * snaps.shape[1] * (snaps.shape[0] - 1))


def chain_rate(init: SpinConfig, params: ModelParams, T: float,
               M: int | None, n_steps: int, seed: int) -> float:
    """Rate of one relaxation chain; the unit of work behind every curve."""
    return reconfiguration_rate(run_relaxation(init, params, T, M, n_steps, seed))


def curve_from_rates(h_x: float, temperatures, rates_per_temperature,
                     metadata: dict | None = None) -> RateCurve:
    """Aggregate per-seed rates (one row per temperature) into a curve."""
    temps = np.asarray(temperatures, dtype=np.float64)
    rows = [np.asarray(r, dtype=np.float64) for r in rates_per_temperature]
    means = np.array([row.mean() for row in rows])
    errs = np.array([
        row.std(ddof=1) / np.sqrt(row.size) if row.size > 1 else 0.0
        for row in rows
    ])
    return RateCurve(h_x=h_x, temperatures=temps, rates=means, stderr=errs,
                     metadata=dict(metadata or {}))


def rate_vs_temperature(init: SpinConfig, params: ModelParams, temperatures,
                        M: int | None, n_steps: int, seeds) -> RateCurve:
    """Seed-averaged R(T) curve at the field carried by ``params``.

    Deterministic for a fixed seed list; chains are independent, so any
    parallel execution of the same (T, seed) grid reproduces these numbers.
    """
    temps = sorted(float(t) for t in temperatures)
    seeds = list(seeds)
    if not temps or not seeds:
        raise ValueError("need at least one temperature and one seed")
    rows = [[chain_rate(init, params, T, M, n_steps, s) for s in seeds]
            for T in temps]
    metadata = {
        "width": init.geom.width,
        "height": init.geom.height,
        "seeds": [int(s) for s in seeds],
        "n_steps": int(n_steps),
    }
    return curve_from_rates(params.h_x, temps, rows, metadata)


def rescale_curves(curves, n: float) -> list[RateCurve]:
    """Map every point (T, R) to (h_x**n * T, R)."""
    out = []
    for c in curves:
        if c.h_x <= 0:
            raise RescalingUndefinedError(
                "temperature rescaling requires h_x > 0 on every curve"
            )
        out.append(RateCurve(h_x=c.h_x, temperatures=c.h_x ** n * c.temperatures,
                             rates=c.rates, stderr=c.stderr, metadata=c.metadata))
    return out


def _log_samples(curve: RateCurve) -> tuple[np.ndarray, np.ndarray, int]:
    """(log T, log R) with R = 0 points dropped; also the dropped count."""
    keep = curve.rates > 0
    return (np.log(curve.temperatures[keep]), np.log(curve.rates[keep]),
            int(np.count_nonzero(~keep)))


def collapse_residual(curves, n: float, grid_points: int = 64) -> float:
    """Normalized cross-curve variance of the rescaled curves.

    Interpolation is linear in (log T', log R) on a grid spanning the
    intersection of the rescaled supports; zero-rate points are dropped
    before taking logs.
    """
    curves = list(curves)
    if len(curves) < 2:
        raise ValueError("need at least two curves to measure a collapse")
    logs = []
    for c in rescale_curves(curves, n):
        lt, lr, _ = _log_samples(c)
        if lt.size < 2:
            raise NoOverlapError(
                f"curve at h_x = {c.h_x} has fewer than two nonzero rates"
            )
        logs.append((lt, lr))
    lo = max(lt.min() for lt, _ in logs)
    hi = min(lt.max() for lt, _ in logs)
    if not lo < hi:
        raise NoOverlapError("rescaled curves share no temperature support")
    grid = np.linspace(lo, hi, grid_points)
    values = np.stack([np.interp(grid, lt, lr) for lt, lr in logs])
    total_var = values.var()
    if total_var == 0.0:
        return 0.0
    return float(values.var(axis=0).mean() / total_var)


def _golden_minimize(f, a: float, b: float, tol: float):
    """Golden-section minimization; returns (x, f(x), list of visited pairs)."""
    trace = []

    def probe(x):
        y = f(x)
        trace.append((x, y))
        return y

    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = probe(c), probe(d)
    while abs(b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = probe(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = probe(d)
    x = c if fc < fd else d
    return x, min(fc, fd), trace


def fit_collapse_exponent(curves, interval: tuple[float, float] = (0.0, 3.0),
                          coarse_step: float = 0.01,
                          tol: float = 1e-3) -> CollapseResult:
    """Locate the exponent minimizing the collapse residual.

    A coarse scan of the interval (step ``coarse_step``) brackets the
    minimum, then golden-section search refines it to ``tol``. Candidates
    where the rescaled supports do not overlap are skipped; if none overlap
    the fit is impossible.
    """
    curves = list(curves)
    fields = {c.h_x for c in curves}
    if len(curves) < 3 or len(fields) < 3:
        raise ValueError("need at least three curves with distinct h_x")
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi:
        raise ValueError(f"invalid search interval {interval}")

    def objective(n):
        try:
            return collapse_residual(curves, n)
        except NoOverlapError:
            return np.inf

    grid = np.arange(lo, hi + 0.5 * coarse_step, coarse_step)
    coarse = [(float(n), objective(float(n))) for n in grid]
    finite = [(n, r) for n, r in coarse if np.isfinite(r)]
    if not finite:
        raise FitImpossibleError(
            "rescaled curves never overlap anywhere in the search interval"
        )
    n_best, _ = min(finite, key=lambda pair: pair[1])
    bracket_lo = max(lo, n_best - coarse_step)
    bracket_hi = min(hi, n_best + coarse_step)
    n_opt, res_opt, refine_trace = _golden_minimize(objective, bracket_lo,
                                                    bracket_hi, tol)
    if not np.isfinite(res_opt):
        raise FitImpossibleError("refinement left the overlapping region")

    rescaled = rescale_curves(curves, n_opt)
    dropped = {c.h_x: _log_samples(c)[2] for c in rescaled}
    return CollapseResult(
        n=float(n_opt),
        residual=float(res_opt),
        trace=tuple(coarse + refine_trace),
        rescaled=tuple(rescaled),
        dropped_zero_rates=dropped,
    )


# --- curve serialization ------------------------------------------------------

CSV_HEADER = "h_x,T,R,R_stderr,n_seeds,n_steps"


def curve_csv(curve: RateCurve) -> str:
    """CSV text for one curve (17 significant digits, round-trip exact)."""
    n_seeds = len(curve.metadata.get("seeds", []))
    n_steps = curve.metadata.get("n_steps", 0)
    lines = [CSV_HEADER]
    for T, R, err in zip(curve.temperatures, curve.rates, curve.stderr):
        lines.append(f"{curve.h_x:.17g},{T:.17g},{R:.17g},{err:.17g},"
                     f"{n_seeds},{n_steps}")
    return "\n".join(lines) + "\n"


def curve_from_csv(text: str) -> RateCurve:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"expected header {CSV_HEADER!r}")
    rows = [ln.split(",") for ln in lines[1:]]
    if not rows:
        raise ValueError("curve file has no data rows")
    h_x = float(rows[0][0])
    temps = [float(r[1]) for r in rows]
    rates = [float(r[2]) for r in rows]
    errs = [float(r[3]) for r in rows]
    metadata = {"n_seeds": int(rows[0][4]), "n_steps": int(rows[0][5])}
    return RateCurve(h_x=h_x, temperatures=temps, rates=rates, stderr=errs,
                     metadata=metadata)

"""Bracketing and bisection for characteristic determinants."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .charmat import CharFunction, char_function
from .model import BoundarySpec, DomainSpec, SpectralPoint, harmonic_multiplicity

__all__ = [
    "Bracket",
    "ConvergenceError",
    "ResolutionWarning",
    "DEFAULT_STEP",
    "DEFAULT_TOL",
    "T_CAP",
    "scan",
    "refine",
    "eigenvalues",
    "default_step",
]

DEFAULT_STEP = 0.05
DEFAULT_TOL = 1e-10
T_CAP = 200.0
_MIN_STEP = 1e-4
_T_START = 0.05
_T_WINDOW = 8.0


class ConvergenceError(RuntimeError):
    """Not enough roots found below the scan cap."""


class ResolutionWarning(UserWarning):
    """Bracket count never stabilised before the step fell below 1e-4."""


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")


def _evaluate(f, grid):
    vals = np.asarray(f(grid), dtype=float)
    bad = ~np.isfinite(vals)
    if np.any(bad):
        raise FloatingPointError(
            f"non-finite determinant at t = {float(grid[np.argmax(bad)])!r}"
        )
    return vals


def _brackets_on(f, t_lo, t_hi, step):
    n = max(int(np.ceil((t_hi - t_lo) / step)), 1)
    grid = np.linspace(t_lo, t_hi, n + 1)
    pos = _evaluate(f, grid) >= 0
    idx = np.nonzero(pos[:-1] != pos[1:])[0]
    return [Bracket(float(grid[i]), float(grid[i + 1])) for i in idx]


def scan(cf, t_lo: float, t_hi: float, step: float = DEFAULT_STEP) -> list:
    """Sign-change brackets of ``cf`` on [t_lo, t_hi].

    The grid is refined by 4 until two successive grids give the same number
    of brackets; the finer set is returned.
    """
    vmin = getattr(cf, "valid_t_min", 0.0)
    if not (vmin <= t_lo < t_hi) or step <= 0:
        raise ValueError(f"need valid_t_min <= t_lo < t_hi and step > 0 (got {t_lo}, {t_hi}, {step})")
    prev = _brackets_on(cf, t_lo, t_hi, step)
    while True:
        step /= 4
        cur = _brackets_on(cf, t_lo, t_hi, step)
        if len(cur) == len(prev):
            return cur
        if step < _MIN_STEP:
            warnings.warn(
                f"bracket count unstable down to step {step:.2e} on [{t_lo}, {t_hi}]",
                ResolutionWarning,
                stacklevel=2,
            )
            return cur
        prev = cur


def refine(cf, b: Bracket, tol_t: float = DEFAULT_TOL) -> float:
    """Bisection to a bracket width <= tol_t; returns the final midpoint."""
    lo, hi = b.lo, b.hi
    flo = float(cf(lo)) >= 0
    while hi - lo > tol_t:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if (float(cf(mid)) >= 0) == flo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def default_step(d: DomainSpec) -> float:
    # eigenbranches crowd for very thin holes
    if d.inner is not None and d.inner < 0.01:
        return 0.01
    return DEFAULT_STEP


def first_roots(cf: CharFunction, count: int, *, step: float = DEFAULT_STEP, tol_t: float = DEFAULT_TOL,
                t_start: float = _T_START, t_cap: float = T_CAP) -> list:
    """Smallest ``count`` roots of cf above t_start, widening the window by doubling."""
    lo = max(t_start, cf.valid_t_min)
    hi = lo + _T_WINDOW
    found = []
    while True:
        found = found + scan(cf, lo, hi, step)
        if len(found) >= count:
            break
        if hi >= t_cap:
            raise ConvergenceError(
                f"found {len(found)} of {count} roots of {cf.family} in scan window "
                f"[{max(t_start, cf.valid_t_min)}, {hi}]"
            )
        lo, hi = hi, min(2 * hi, t_cap)
    return [refine(cf, b, tol_t) for b in found[:count]]


def eigenvalues(d: DomainSpec, b: BoundarySpec, ell: int, count: int = 1, *,
                tol_t: float = DEFAULT_TOL, step: float | None = None) -> list:
    """First ``count`` eigenvalues with angular degree ``ell`` (lambda = t^4)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    cf = char_function(d, b, ell)
    ts = first_roots(cf, count, step=step or default_step(d), tol_t=tol_t)
    mult = harmonic_multiplicity(ell, d.dim)
    return [SpectralPoint(ell, t, mult) for t in ts]

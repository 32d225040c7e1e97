"""Fundamental tones, branch sweeps in the inner radius, and thresholds.

The reduced Rayleigh quotient depends on the angular degree only through

    A(ell, N) = 2 mu + (1 - sigma)(N - 1),    B(ell, N) = mu (mu + 2N - 8),

with mu = ell (ell + N - 2). Both increase with ell once ell >= 1, and for
N >= 3 degree 0 beats degree 1 outright, so the fundamental tone can only
sit at ell = 0 (N >= 3) or ell in {0, 1} (N = 2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import (
    BCKind,
    BoundarySpec,
    DomainSpec,
    ModeIndex,
    harmonic_multiplicity,
    punctured,
    shell,
)
from .rootfind import DEFAULT_TOL, eigenvalues

__all__ = [
    "FormCoefficients",
    "FundamentalTone",
    "BranchRow",
    "BranchTable",
    "InternalConsistencyError",
    "NoSignChangeError",
    "form_coefficients",
    "first_eigenvalue",
    "fundamental_tone",
    "branch_sweep",
    "threshold_find",
    "crossing_brackets",
    "euler_eigenvalues",
    "euler_threshold",
    "SWEEP_SIGMAS",
]

SWEEP_SIGMAS = (-0.7, -0.4, 0.0, 0.5, 0.85, 0.95)


class InternalConsistencyError(AssertionError):
    """The minimising degree contradicts the A/B monotonicity argument."""


class NoSignChangeError(ValueError):
    """The l = 0 and l = 1 branches do not cross on the given interval."""


@dataclass(frozen=True)
class FormCoefficients:
    A: float
    B: float


def form_coefficients(ell: int, N: int, sigma: float = 0.0) -> FormCoefficients:
    """Coefficients of the gradient and zero-order terms of the reduced form."""
    mu = ModeIndex(ell, N).mu
    return FormCoefficients(A=2 * mu + (1 - sigma) * (N - 1), B=mu * (mu + 2 * N - 8))


@dataclass(frozen=True)
class FundamentalTone:
    lam: float
    ell_star: frozenset
    multiplicity: int
    degenerate: bool
    branch_values: dict = field(default_factory=dict, compare=False)


def first_eigenvalue(d: DomainSpec, b: BoundarySpec, ell: int, tol_t: float = DEFAULT_TOL) -> float:
    return eigenvalues(d, b, ell, 1, tol_t=tol_t)[0].lam


def fundamental_tone(d: DomainSpec, b: BoundarySpec, ell_max: int = 4, tie_tol: float = 1e-8,
                     tol_t: float = DEFAULT_TOL) -> FundamentalTone:
    """Smallest eigenvalue over degrees 0..ell_max and the degrees attaining it."""
    lams = {ell: first_eigenvalue(d, b, ell, tol_t) for ell in range(ell_max + 1)}
    lam_min = min(lams.values())
    stars = frozenset(ell for ell, v in lams.items() if v <= lam_min * (1 + tie_tol))
    allowed = {0} if d.dim >= 3 else {0, 1}
    if not stars <= allowed:
        raise InternalConsistencyError(
            f"minimum attained at degrees {sorted(stars)}, outside {sorted(allowed)} (N = {d.dim})"
        )
    mult = sum(harmonic_multiplicity(ell, d.dim) for ell in stars)
    return FundamentalTone(lam_min, stars, mult, len(stars) > 1, lams)


@dataclass(frozen=True)
class BranchRow:
    a: float
    ell: int
    t1: float
    lambda1: float
    error: str | None = None


@dataclass
class BranchTable:
    rows: list
    metadata: dict

    def branch(self, ell: int):
        """(a values, lambda values) of one degree, in increasing a."""
        pts = [(r.a, r.lambda1) for r in self.rows if r.ell == ell]
        a, lam = zip(*pts) if pts else ((), ())
        return np.array(a), np.array(lam)

    def crossings(self, ell_a: int = 0, ell_b: int = 1) -> list:
        """Grid intervals (a_lo, a_hi) over which the two branches swap order."""
        a, la = self.branch(ell_a)
        a2, lb = self.branch(ell_b)
        if not np.array_equal(a, a2):
            raise ValueError("branches sampled on different grids")
        g = la - lb
        ok = np.isfinite(g)
        a, g = a[ok], g[ok]
        s = g >= 0
        return [(float(a[i]), float(a[i + 1])) for i in np.nonzero(s[:-1] != s[1:])[0]]


def _domain_at(N: int, a: float) -> DomainSpec:
    # a = 0 means the punctured ball; effective_domain maps it to the ball for N >= 4
    return punctured(N) if a == 0 else shell(N, a)


def branch_sweep(b: BoundarySpec, N: int, ells, a_grid, tol_t: float = DEFAULT_TOL) -> BranchTable:
    """Smallest eigenvalue for every (a, ell); per-point failures land in the row."""
    rows = []
    for a in sorted(float(x) for x in a_grid):
        if not 0.0 <= a < 1.0:
            raise ValueError(f"inner radius must lie in [0, 1), got {a}")
        for ell in sorted(ells):
            try:
                sp = eigenvalues(_domain_at(N, a), b, ell, 1, tol_t=tol_t)[0]
                rows.append(BranchRow(a, ell, sp.t, sp.lam))
            except (ArithmeticError, RuntimeError, ValueError) as exc:
                rows.append(BranchRow(a, ell, math.nan, math.nan, f"{type(exc).__name__}: {exc}"))
    meta = {
        "dim": N,
        "bc": b.encode(),
        "sigma": b.sigma,
        "tol_root": tol_t,
    }
    if any(r.a == 0 for r in rows):
        meta["note"] = "a=0 rows use the punctured-ball problem; no continuity as a->0+ is claimed"
    return BranchTable(rows, meta)


def threshold_find(b: BoundarySpec, N: int = 2, a_lo: float = 5e-4, a_hi: float = 5e-3,
                   tol_a: float = 1e-7, tol_t: float = DEFAULT_TOL) -> float:
    """Inner radius where the l = 0 and l = 1 first eigenvalues cross (bisection)."""

    def gap(a):
        d = shell(N, a)
        return first_eigenvalue(d, b, 0, tol_t) - first_eigenvalue(d, b, 1, tol_t)

    g_lo, g_hi = gap(a_lo), gap(a_hi)
    if (g_lo >= 0) == (g_hi >= 0):
        raise NoSignChangeError(
            f"l=0 and l=1 branches do not cross on [{a_lo}, {a_hi}] (gaps {g_lo:.6g}, {g_hi:.6g})"
        )
    lo, hi = a_lo, a_hi
    while hi - lo > tol_a:
        mid = 0.5 * (lo + hi)
        if (gap(mid) >= 0) == (g_lo >= 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def crossing_brackets(b: BoundarySpec, N: int = 2, a_min: float = 1e-4, a_max: float = 0.012,
                      points: int = 16, tol_t: float = DEFAULT_TOL) -> list:
    """Geometric-grid intervals on which lambda_{1,0} - lambda_{1,1} changes sign."""
    if not 0.0 < a_min < a_max < 1.0:
        raise ValueError(f"need 0 < a_min < a_max < 1, got {a_min}, {a_max}")
    if points < 2:
        raise ValueError("need at least 2 grid points")
    grid = np.geomspace(a_min, a_max, points)
    gaps = []
    for a in grid:
        d = shell(N, float(a))
        gaps.append(first_eigenvalue(d, b, 0, tol_t) - first_eigenvalue(d, b, 1, tol_t))
    s = np.asarray(gaps) >= 0
    return [(float(grid[i]), float(grid[i + 1])) for i in np.nonzero(s[:-1] != s[1:])[0]]


def euler_eigenvalues(a: float, h_max: int = 1) -> list:
    """Eigenvalues 1 + (h pi / ln a)^2, h = 1..h_max, of r^2 f'' - r f' + lam f = 0 on (a, 1)."""
    if not 0.0 < a < 1.0:
        raise ValueError(f"a must lie in (0, 1), got {a}")
    la = math.log(a)
    return [1.0 + (h * math.pi / la) ** 2 for h in range(1, h_max + 1)]


def euler_threshold() -> float:
    """exp(-pi sqrt 2): the inner radius above which the Euler bound gives simplicity (N = 2)."""
    return math.exp(-math.pi * math.sqrt(2.0))

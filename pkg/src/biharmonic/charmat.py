"""Characteristic determinants for balls, punctured balls and shells.

A radial profile is a combination of basis columns built from the four
ultraspherical kinds evaluated at ``t r``. Imposing the two boundary
functionals at each boundary sphere gives a square matrix whose
determinant vanishes exactly at ``t = lambda**(1/4)``.

Rows are the reduced forms obtained from the raw conditions by row
operations with strictly positive factors:

* value row:       f(x)
* clamped row:     f'(x) - (ell/x) f(x), i.e. -j_{l+1}, -y_{l+1}, +i_{l+1}, -k_{l+1}
* hinged row:      (N-1)(1-sigma) f_{l+1} for j, y;
                   -(N-1)(1-sigma) i_{l+1} + 2x i_l;  (N-1)(1-sigma) k_{l+1} + 2x k_l

Columns containing ``i`` are multiplied by ``exp(-t)`` and shell ``k``
columns by ``exp(t a)``. All scalings are positive, so the sign of the
determinant (hence every root) is unaffected.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import integrate

from .model import (
    BCKind,
    BoundarySpec,
    DomainKind,
    DomainSpec,
    SpecError,
    ball,
    check_specs,
    dirichlet,
    effective_domain,
    navier,
    punctured,
    shell,
)
from .specfun import DomainError, ultra, ultra_deriv, ultra_deriv2

__all__ = [
    "VALID_T_MIN",
    "KAPPA",
    "Descriptor",
    "CharFunction",
    "RadialProfile",
    "char_function",
    "dirichlet_ball_det",
    "navier_ball_det",
    "dirichlet_shell_det",
    "navier_shell_det",
    "dirichlet_punctured_det",
    "navier_punctured_det",
    "mode_coefficients",
    "profile_eval",
]

VALID_T_MIN = 1e-3

# c_4 = kappa c_2 removes the non-H^2 singularity of y_0 at the origin
KAPPA = {2: 2.0 / math.pi, 3: 2.0 / math.pi}

_OVERFLOW_LIMIT = 700.0


@dataclass(frozen=True)
class Descriptor:
    domain: DomainSpec
    bc: BoundarySpec
    ell: int

    @property
    def dim(self) -> int:
        return self.domain.dim


# one basis column: ((kind, weight), ...), plus how its scaling depends on t
@dataclass(frozen=True)
class _Column:
    terms: tuple
    scale: str  # "none" | "i" (exp(-t)) | "k" (exp(t a))


_J = _Column((("j", 1.0),), "none")
_Y = _Column((("y", 1.0),), "none")
_I = _Column((("i", 1.0),), "i")
_K = _Column((("k", 1.0),), "k")


def _punctured_columns(N: int):
    kap = KAPPA[N]
    first = _Column((("j", 1.0), ("i", -1.0)), "i")
    if N == 2:
        second = _Column((("y", 1.0), ("k", kap)), "none")
    else:
        # y_0 + (2/pi) k_0 -> -sqrt(2/pi) at 0 for N = 3; adding j_0 restores f(0) = 0
        second = _Column((("y", 1.0), ("k", kap), ("j", 1.0)), "none")
    return (first, second)


@dataclass(frozen=True)
class CharFunction:
    """Scaled characteristic determinant ``t -> D(t)`` for one mode family.

    ``extra_log_scales`` multiplies column ``c`` by ``exp(extra_log_scales[c])``
    on top of the built-in scaling; it exists to exercise scaling invariance.
    """

    descriptor: Descriptor
    family: str
    columns: tuple
    radii: tuple
    valid_t_min: float = VALID_T_MIN
    extra_log_scales: tuple = field(default=())

    @property
    def ell(self) -> int:
        return 0 if self.family.endswith("punctured") else self.descriptor.ell

    @property
    def dim(self) -> int:
        return self.descriptor.dim

    @property
    def a(self) -> float:
        return self.descriptor.domain.a

    @property
    def hinged(self) -> bool:
        return self.descriptor.bc.kind is BCKind.NAVIER

    def with_extra_scaling(self, factors) -> "CharFunction":
        """Same function with columns multiplied by further positive factors."""
        factors = tuple(float(f) for f in factors)
        if len(factors) != len(self.columns) or min(factors) <= 0:
            raise ValueError("need one strictly positive factor per column")
        return replace(self, extra_log_scales=tuple(math.log(f) for f in factors))

    def column_log_scales(self, t):
        t = np.asarray(t, dtype=float)
        out = []
        for c, col in enumerate(self.columns):
            if col.scale == "i":
                s = t.copy()
            elif col.scale == "k":
                s = -t * self.a
            else:
                s = np.zeros_like(t)
            if self.extra_log_scales:
                s = s - self.extra_log_scales[c]
            out.append(s)
        return out

    # the reduced boundary functionals, evaluated for one kind at x
    def _functional(self, which: str, kind: str, x):
        ell, N = self.ell, self.dim
        f1 = ultra(kind, ell + 1, N, x)
        if which == "clamped":
            sign = 1.0 if kind == "i" else -1.0
            return sign * f1.mantissa, f1.log_scale
        c = (N - 1) * (1.0 - self.descriptor.bc.sigma)
        if kind in ("j", "y"):
            return c * f1.mantissa, f1.log_scale
        f0 = ultra(kind, ell, N, x)
        if kind == "i":
            return -c * f1.mantissa + 2 * x * f0.mantissa, f0.log_scale
        return c * f1.mantissa + 2 * x * f0.mantissa, f0.log_scale

    def _entry(self, which: str, col: _Column, x, log_scale):
        total = 0.0
        for kind, w in col.terms:
            if which == "value":
                v = ultra(kind, self.ell, self.dim, x)
                m, ls = v.mantissa, v.log_scale
            else:
                m, ls = self._functional(which, kind, x)
            total = total + w * m * np.exp(ls - log_scale)
        return total

    def matrix(self, t):
        """Scaled reduced boundary matrix, shape ``t.shape + (n, n)``."""
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0):
            raise DomainError("t must be positive")
        if self.family.endswith("shell") and np.any(t * (1 - self.a) > _OVERFLOW_LIMIT):
            raise OverflowError(
                f"t (1 - a) exceeds {_OVERFLOW_LIMIT}; determinant not representable "
                f"(t max = {float(np.max(t))})"
            )
        cond = "clamped" if not self.hinged else "hinged"
        scales = self.column_log_scales(t)
        rows = []
        for rho in self.radii:
            x = t * rho
            for which in ("value", cond):
                rows.append(
                    [self._entry(which, col, x, s) for col, s in zip(self.columns, scales)]
                )
        m = np.array(rows, dtype=float)  # (n, n, *t.shape)
        return np.moveaxis(m, (0, 1), (-2, -1))

    def prefactor(self, t):
        if self.family.endswith("shell"):
            return t * t / self.a if self.hinged else t * t
        return t

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        d = self.prefactor(t_arr) * np.linalg.det(self.matrix(t_arr))
        return float(d) if np.ndim(t) == 0 else d


def _ball_cf(desc: Descriptor) -> CharFunction:
    fam = "navier_ball" if desc.bc.kind is BCKind.NAVIER else "dirichlet_ball"
    return CharFunction(desc, fam, (_J, _I), (1.0,))


def _shell_cf(desc: Descriptor) -> CharFunction:
    fam = "navier_shell" if desc.bc.kind is BCKind.NAVIER else "dirichlet_shell"
    return CharFunction(desc, fam, (_J, _Y, _I, _K), (1.0, desc.domain.a))


def _punctured_cf(desc: Descriptor) -> CharFunction:
    N = desc.dim
    if N not in KAPPA:
        raise SpecError("punctured-ball determinants exist only for N = 2, 3; use effective_domain")
    if desc.bc.kind is BCKind.NAVIER and desc.bc.sigma >= 1.0:
        raise SpecError("sigma = 1 is not admissible on the punctured ball")
    fam = "navier_punctured" if desc.bc.kind is BCKind.NAVIER else "dirichlet_punctured"
    return CharFunction(desc, fam, _punctured_columns(N), (1.0,))


def char_function(d: DomainSpec, b: BoundarySpec, ell: int) -> CharFunction:
    """Select the determinant family for (domain, bc, ell).

    Applies the capacity rule (N >= 4 punctured balls are balls) and the
    fact that punctured-ball modes with ell >= 1 coincide with ball modes.
    """
    check_specs(d, b)
    if int(ell) != ell or ell < 0:
        raise SpecError(f"degree must be a nonnegative integer, got {ell}")
    d_eff = effective_domain(d)
    if d_eff.kind is DomainKind.PUNCTURED and ell >= 1:
        d_eff = DomainSpec(d.dim, DomainKind.BALL)
    desc = Descriptor(d_eff, b, int(ell))
    if d_eff.kind is DomainKind.BALL:
        return _ball_cf(desc)
    if d_eff.kind is DomainKind.SHELL:
        return _shell_cf(desc)
    return _punctured_cf(desc)


def _domain(N, a=None):
    return ball(N) if a is None else shell(N, a)


def dirichlet_ball_det(ell: int, N: int, t):
    """``exp(-t) t (j_l i_{l+1} + j_{l+1} i_l)``."""
    return char_function(_domain(N), dirichlet(), ell)(t)


def navier_ball_det(ell: int, N: int, sigma: float, t):
    """``exp(-t) [2 t^2 j_l i_l - t (N-1)(1-sigma)(j_l i_{l+1} + j_{l+1} i_l)]``."""
    return char_function(_domain(N), navier(sigma), ell)(t)


def dirichlet_shell_det(ell: int, N: int, a: float, t):
    return char_function(_domain(N, a), dirichlet(), ell)(t)


def navier_shell_det(ell: int, N: int, sigma: float, a: float, t):
    return char_function(_domain(N, a), navier(sigma), ell)(t)


def _punct(N):
    if N not in KAPPA:
        raise SpecError(f"punctured-ball determinant needs N in (2, 3), got {N}")
    return punctured(N)


def dirichlet_punctured_det(N: int, t):
    """Radial (ell = 0) clamped determinant on the punctured ball, N = 2, 3."""
    return char_function(_punct(N), dirichlet(), 0)(t)


def navier_punctured_det(N: int, sigma: float, t):
    """Radial (ell = 0) hinged determinant on the punctured ball, N = 2, 3."""
    if sigma >= 1.0:
        raise SpecError("sigma = 1 is not admissible on the punctured ball")
    return char_function(_punct(N), navier(sigma), 0)(t)


@dataclass(frozen=True)
class RadialProfile:
    """Radial factor f(r) of an eigenfunction, L^2(r^(N-1) dr)-normalised.

    ``weights`` are the null-vector components for the scaled columns; the
    profile is evaluated in scaled arithmetic so no coefficient ever needs
    to hold ``exp(t)``-sized numbers.
    """

    cf: CharFunction
    t: float
    weights: np.ndarray
    norm: float = 1.0
    rank_deficient: bool = False

    @property
    def coefficients(self) -> np.ndarray:
        """Coefficients of the unscaled basis columns (c_1..c_4 or d_1, d_2)."""
        ls = np.array([float(s) for s in self.cf.column_log_scales(self.t)])
        return self.weights * np.exp(-ls) / self.norm

    @property
    def interval(self) -> tuple:
        return (self.cf.a, 1.0)

    def _check_r(self, r):
        r = np.asarray(r, dtype=float)
        lo = self.cf.a
        if np.any(r < lo - 1e-12) or np.any(r > 1 + 1e-12):
            raise DomainError(f"r outside the radial interval [{lo}, 1]")
        return np.clip(r, lo, 1.0)

    def _raw(self, r, order: int):
        evaluators = {0: ultra, 1: ultra_deriv, 2: ultra_deriv2}
        fn = evaluators[order]
        ell, N = self.cf.ell, self.cf.dim
        x = self.t * r
        scales = self.cf.column_log_scales(self.t)
        total = np.zeros_like(r)
        for wc, col, s in zip(self.weights, self.cf.columns, scales):
            for kind, w in col.terms:
                v = fn(kind, ell, N, x)
                total = total + wc * w * v.mantissa * np.exp(v.log_scale - float(s))
        return total * self.t**order

    def _eval(self, r, order=0):
        r = self._check_r(r)
        kind = self.cf.family
        at_origin = r == 0.0
        if np.any(at_origin):
            if order > 0:
                raise DomainError("derivatives are not evaluated at the origin")
            if kind.endswith("punctured"):
                # both basis combinations vanish at the origin
                out = np.zeros_like(r)
                inner = ~at_origin
                if np.any(inner):
                    out[inner] = self._raw(r[inner], 0)
                return out / self.norm
        return self._raw(r, order) / self.norm

    def __call__(self, r):
        out = self._eval(r)
        return float(out) if np.ndim(r) == 0 else out

    def derivative(self, r, order: int = 1):
        out = self._eval(r, order)
        return float(out) if np.ndim(r) == 0 else out

    def boundary_residuals(self) -> np.ndarray:
        """Raw boundary conditions evaluated on the normalised profile."""
        sigma = self.cf.descriptor.bc.sigma
        res = []
        for rho in self.cf.radii:
            r = np.array([rho])
            res.append(self._eval(r)[0])
            if self.cf.hinged:
                d1 = self._eval(r, 1)[0]
                d2 = self._eval(r, 2)[0]
                res.append(d2 + sigma * (self.cf.dim - 1) / rho * d1)
            else:
                res.append(self._eval(r, 1)[0])
        return np.array(res)


def mode_coefficients(cf: CharFunction, t_root: float, *, root_tol: float = 1e-6) -> RadialProfile:
    """Null vector of the boundary matrix at a root, as a normalised profile."""
    m = cf.matrix(float(t_root))
    # a whole column can vanish at the root (sigma = 1 hinged ball), so take
    # column magnitudes from a small neighbourhood of t instead of t alone
    col_norms = np.maximum(np.linalg.norm(m, axis=0), np.linalg.norm(cf.matrix(1.01 * float(t_root)), axis=0))
    col_norms[col_norms == 0] = 1.0
    _, s, vt = np.linalg.svd(m / col_norms)
    if s[-1] > root_tol * s[0]:
        raise ValueError(
            f"t = {t_root!r} is not a root of {cf.family} (smallest singular ratio {s[-1] / s[0]:.3e})"
        )
    v = vt[-1] / col_norms
    v = v / np.linalg.norm(v)
    rank_deficient = len(s) > 1 and s[-2] <= 1e-8 * s[0]
    prof = RadialProfile(cf, float(t_root), v, 1.0, bool(rank_deficient))
    N = cf.dim
    lo = cf.a
    val, _ = integrate.quad(lambda r: prof(r) ** 2 * r ** (N - 1), lo, 1.0, limit=200, epsabs=0, epsrel=1e-11)
    nrm = math.sqrt(val)
    # fix the sign so the profile is positive just inside the outer boundary
    sgn = 1.0 if prof(1.0 - 1e-3 * (1 - lo)) >= 0 else -1.0
    return replace(prof, weights=sgn * v, norm=nrm)


def profile_eval(p: RadialProfile, r):
    """Evaluate the normalised radial profile at r (scalar or array)."""
    return p(r)

"""Cylindrical and ultraspherical Bessel functions with exponential scaling.

The ultraspherical functions of degree ``ell`` in dimension ``N`` are

    j_ell(x) = x**(1 - N/2) * J_nu(x),    nu = ell + N/2 - 1

and likewise for y, i, k. Values of the modified kinds are returned as a
:class:`ScaledValue` so that ``i`` at large argument and ``k`` near the
origin of a shell never overflow; the true value is
``mantissa * exp(log_scale)``.

Evaluation is delegated to ``scipy.special`` (``jv``, ``yv``, ``ive``,
``kve``). Derivatives are always formed from the three-term recurrences,
never by differencing.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy import special

__all__ = [
    "DomainError",
    "ScaledValue",
    "EULER_GAMMA",
    "check_order",
    "cyl_j",
    "cyl_y",
    "cyl_i_scaled",
    "cyl_k_scaled",
    "cyl_deriv",
    "ultra",
    "ultra_deriv",
    "ultra_deriv2",
    "order_of",
    "KINDS",
]

EULER_GAMMA = 0.5772156649015329

KINDS = ("j", "y", "i", "k")


class DomainError(ValueError):
    """Argument or order outside the domain of a Bessel routine."""


class ScaledValue(NamedTuple):
    """A real number stored as ``mantissa * exp(log_scale)``.

    Both fields may be numpy arrays of the same shape.
    """

    mantissa: float | np.ndarray
    log_scale: float | np.ndarray

    @property
    def value(self):
        """Unscaled value (may overflow to inf for huge log_scale)."""
        with np.errstate(over="ignore"):
            return self.mantissa * np.exp(self.log_scale)

    def rescaled(self, log_scale):
        """Mantissa expressed against another log scale."""
        return self.mantissa * np.exp(self.log_scale - log_scale)

    def normalized(self) -> "ScaledValue":
        """Equivalent value with |mantissa| in [0.1, 10) (or mantissa 0)."""
        m = np.asarray(self.mantissa, dtype=float)
        ls = np.asarray(self.log_scale, dtype=float)
        with np.errstate(divide="ignore"):
            e = np.where(m == 0.0, 0.0, np.floor(np.log10(np.abs(m))))
        m = m / 10.0**e
        ls = ls + e * math.log(10.0)
        if m.ndim == 0:
            return ScaledValue(float(m), float(ls))
        return ScaledValue(m, ls)


def check_order(nu) -> float:
    """Validate a Bessel order: nonnegative and an integer multiple of 1/2."""
    nu = float(nu)
    if nu < 0 or not math.isclose(2 * nu, round(2 * nu), abs_tol=1e-12):
        raise DomainError(f"order must be a nonnegative multiple of 1/2, got {nu}")
    return round(2 * nu) / 2


def _as_x(x, *, allow_zero: bool):
    arr = np.asarray(x, dtype=float)
    bad = arr < 0 if allow_zero else arr <= 0
    if np.any(bad) or np.any(np.isnan(arr)):
        bound = "x >= 0" if allow_zero else "x > 0"
        raise DomainError(f"argument must satisfy {bound}, got {x!r}")
    return arr


def _out(v):
    return float(v) if np.ndim(v) == 0 else v


def cyl_j(nu, x):
    """J_nu(x) for x >= 0."""
    nu = check_order(nu)
    return _out(special.jv(nu, _as_x(x, allow_zero=True)))


def cyl_y(nu, x):
    """Y_nu(x) for x > 0."""
    nu = check_order(nu)
    return _out(special.yv(nu, _as_x(x, allow_zero=False)))


def cyl_i_scaled(nu, x) -> ScaledValue:
    """I_nu(x) as ``ScaledValue(exp(-x) I_nu(x), x)``."""
    nu = check_order(nu)
    x = _as_x(x, allow_zero=True)
    return ScaledValue(_out(special.ive(nu, x)), _out(x))


def cyl_k_scaled(nu, x) -> ScaledValue:
    """K_nu(x) as ``ScaledValue(exp(x) K_nu(x), -x)``."""
    nu = check_order(nu)
    x = _as_x(x, allow_zero=False)
    return ScaledValue(_out(special.kve(nu, x)), _out(-x))


def cyl_deriv(kind: str, nu, x):
    """First derivative of a cylindrical Bessel function.

    Returns a float/array for kinds ``j`` and ``y`` and a ScaledValue (same
    log scale as the function itself) for ``i`` and ``k``.
    """
    nu = check_order(nu)
    x = _as_x(x, allow_zero=False)
    if kind == "j":
        return _out(-special.jv(nu + 1, x) + nu / x * special.jv(nu, x))
    if kind == "y":
        return _out(-special.yv(nu + 1, x) + nu / x * special.yv(nu, x))
    if kind == "i":
        m = special.ive(nu + 1, x) + nu / x * special.ive(nu, x)
        return ScaledValue(_out(m), _out(x))
    if kind == "k":
        m = -special.kve(nu + 1, x) + nu / x * special.kve(nu, x)
        return ScaledValue(_out(m), _out(-x))
    raise ValueError(f"unknown kind {kind!r}")


def order_of(ell: int, N: int) -> float:
    """Cylindrical order nu = ell + N/2 - 1 housing degree ell in dimension N."""
    if ell < 0 or int(ell) != ell:
        raise DomainError(f"degree must be a nonnegative integer, got {ell}")
    if N < 2 or int(N) != N:
        raise DomainError(f"dimension must be an integer >= 2, got {N}")
    return ell + N / 2 - 1


def _origin_limit(ell: int, N: int) -> float:
    # x**(1-N/2) J_nu(x) -> 2**(1-N/2) / Gamma(N/2) for ell = 0, else 0
    if ell > 0:
        return 0.0
    return 2.0 ** (1 - N / 2) / math.gamma(N / 2)


def _ultra_mantissa(kind: str, ell: int, N: int, x: np.ndarray) -> np.ndarray:
    nu = order_of(ell, N)
    if kind in ("j", "i"):
        pos = x > 0
        xs = np.where(pos, x, 1.0)
        raw = special.jv(nu, xs) if kind == "j" else special.ive(nu, xs)
        return np.where(pos, xs ** (1 - N / 2) * raw, _origin_limit(ell, N))
    if kind == "y":
        return x ** (1 - N / 2) * special.yv(nu, x)
    if kind == "k":
        return x ** (1 - N / 2) * special.kve(nu, x)
    raise ValueError(f"unknown kind {kind!r}")


def _log_scale(kind: str, x):
    if kind == "i":
        return x
    if kind == "k":
        return -x
    return np.zeros_like(x)


def ultra(kind: str, ell: int, N: int, x) -> ScaledValue:
    """Ultraspherical Bessel function of the given kind, degree and dimension.

    ``x = 0`` is accepted for kinds ``j`` and ``i`` (exact origin limits);
    kinds ``y`` and ``k`` require ``x > 0``.
    """
    x = _as_x(x, allow_zero=kind in ("j", "i"))
    m = _ultra_mantissa(kind, ell, N, x)
    return ScaledValue(_out(m), _out(_log_scale(kind, x)))


def ultra_deriv(kind: str, ell: int, N: int, x) -> ScaledValue:
    """d/dx of :func:`ultra`, from ``f' = -+f_{ell+1} + (ell/x) f_ell``."""
    x = _as_x(x, allow_zero=False)
    f0 = _ultra_mantissa(kind, ell, N, x)
    f1 = _ultra_mantissa(kind, ell + 1, N, x)
    sign = 1.0 if kind == "i" else -1.0
    m = sign * f1 + ell / x * f0
    return ScaledValue(_out(m), _out(_log_scale(kind, x)))


def ultra_deriv2(kind: str, ell: int, N: int, x) -> ScaledValue:
    """Second derivative from the closed second-derivative identities.

    j, y:  (N-1)/x f_{ell+1} + (ell^2 - ell - x^2)/x^2 f_ell
    i:    -(N-1)/x i_{ell+1} + (ell^2 - ell + x^2)/x^2 i_ell
    k:     (N-1)/x k_{ell+1} + (ell^2 - ell + x^2)/x^2 k_ell
    """
    x = _as_x(x, allow_zero=False)
    f0 = _ultra_mantissa(kind, ell, N, x)
    f1 = _ultra_mantissa(kind, ell + 1, N, x)
    p2 = ell * ell - ell
    if kind in ("j", "y"):
        m = (N - 1) / x * f1 + (p2 - x * x) / (x * x) * f0
    elif kind == "i":
        m = -(N - 1) / x * f1 + (p2 + x * x) / (x * x) * f0
    else:
        m = (N - 1) / x * f1 + (p2 + x * x) / (x * x) * f0
    return ScaledValue(_out(m), _out(_log_scale(kind, x)))

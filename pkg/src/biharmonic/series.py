"""Ascending-series Bessel evaluation in extended precision.

Independent of :mod:`biharmonic.specfun`: every function here sums the
power series directly with mpmath arithmetic (no mpmath Bessel routines).
Intended for moderate arguments (x up to a few tens) where it serves as a
reference for the production kernel.
"""
from __future__ import annotations

import mpmath as mp

__all__ = [
    "series_j",
    "series_i",
    "series_y",
    "series_k",
    "odd_dim_y_singular",
    "odd_dim_k_singular",
]

_DPS = 40
_MAX_TERMS = 2000


def _power_sum(nu, x, sign):
    # (x/2)^nu * sum_k (sign x^2/4)^k / (k! Gamma(nu+k+1)); Gamma poles give 0 terms
    q = sign * x * x / 4
    total = mp.mpf(0)
    k = 0
    term_mag = None
    while k < _MAX_TERMS:
        g = nu + k + 1
        if g <= 0 and g == mp.floor(g):
            term = mp.mpf(0)
        else:
            term = q**k / (mp.factorial(k) * mp.gamma(g))
        total += term
        if term != 0:
            term_mag = abs(term)
            if k > abs(x) and term_mag < mp.mpf(10) ** (-_DPS) * max(abs(total), 1e-300):
                break
        k += 1
    return (x / 2) ** nu * total


def _digamma_sum(n, x, sign):
    # sum_k (psi(k+1) + psi(n+k+1)) (sign x^2/4)^k / (k! (n+k)!)
    q = sign * x * x / 4
    total = mp.mpf(0)
    for k in range(_MAX_TERMS):
        term = (mp.digamma(k + 1) + mp.digamma(n + k + 1)) * q**k / (
            mp.factorial(k) * mp.factorial(n + k)
        )
        total += term
        if k > abs(x) and abs(term) < mp.mpf(10) ** (-_DPS) * max(abs(total), 1e-300):
            break
    return total


def _is_int(nu):
    return mp.mpf(nu) == mp.floor(nu)


def series_j(nu, x) -> float:
    with mp.workdps(_DPS):
        return float(_power_sum(mp.mpf(nu), mp.mpf(x), -1))


def series_i(nu, x) -> float:
    with mp.workdps(_DPS):
        return float(_power_sum(mp.mpf(nu), mp.mpf(x), 1))


def series_y(nu, x) -> float:
    """Y_nu(x), x > 0, for integer or half-integer nu."""
    with mp.workdps(_DPS):
        nu = mp.mpf(nu)
        x = mp.mpf(x)
        if not _is_int(nu):
            # cos(nu pi) = 0 for half-integer nu
            return float(-_power_sum(-nu, x, -1) / mp.sin(nu * mp.pi))
        n = int(nu)
        half = x / 2
        finite = mp.fsum(
            mp.factorial(n - k - 1) / mp.factorial(k) * (x * x / 4) ** k for k in range(n)
        )
        val = -(half ** (-n)) / mp.pi * finite
        val += 2 / mp.pi * mp.log(half) * _power_sum(nu, x, -1)
        val -= half**n / mp.pi * _digamma_sum(n, x, -1)
        return float(val)


def series_k(nu, x) -> float:
    """K_nu(x), x > 0, for integer or half-integer nu."""
    with mp.workdps(_DPS):
        nu = mp.mpf(nu)
        x = mp.mpf(x)
        if not _is_int(nu):
            return float(
                mp.pi / 2 * (_power_sum(-nu, x, 1) - _power_sum(nu, x, 1)) / mp.sin(nu * mp.pi)
            )
        n = int(nu)
        half = x / 2
        finite = mp.fsum(
            mp.factorial(n - k - 1) / mp.factorial(k) * (-x * x / 4) ** k for k in range(n)
        )
        val = half ** (-n) / 2 * finite
        val += (-1) ** (n + 1) * mp.log(half) * _power_sum(nu, x, 1)
        val += (-1) ** n * half**n / 2 * _digamma_sum(n, x, 1)
        return float(val)


def odd_dim_y_singular(p: int, N: int, x) -> float:
    """Singular finite sum of y_p for odd N >= 3 (the smooth remainder omitted)."""
    with mp.workdps(_DPS):
        x = mp.mpf(x)
        top = (p + N - 3) // 2
        pref = (-1) ** (p + (N - 1) // 2) * mp.mpf(2) ** (p + mp.mpf(N) / 2 - 1)
        s = mp.fsum(
            x ** (2 * k - p - N + 2)
            / (mp.factorial(k) * mp.mpf(-4) ** k * mp.gamma(k - p - mp.mpf(N) / 2 + 2))
            for k in range(top + 1)
        )
        return float(pref * s)


def odd_dim_k_singular(p: int, N: int, x) -> float:
    """Singular finite sum of k_p for odd N >= 3 (the smooth remainder omitted)."""
    with mp.workdps(_DPS):
        x = mp.mpf(x)
        top = (p + N - 3) // 2
        pref = (-1) ** (p + (N + 1) // 2) * mp.pi * mp.mpf(2) ** (p + mp.mpf(N) / 2 - 2)
        s = mp.fsum(
            x ** (2 * k - p - N + 2)
            / (mp.factorial(k) * mp.mpf(4) ** k * mp.gamma(k - p - mp.mpf(N) / 2 + 2))
            for k in range(top + 1)
        )
        return float(pref * s)

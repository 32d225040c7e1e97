"""Independent check: Galerkin discretisation of the reduced Rayleigh quotient.

On a shell (a, 1) the degree-ell quotient is

    F(f) = int [(1-s) f''^2 + s (f'' + (N-1) f'/r)^2] r^(N-1)
           + A int f'^2 r^(N-3) + B int f^2 r^(N-5)
    over   int f^2 r^(N-1),

minimised over clamped (f = f' = 0 at both ends) or hinged (f = 0 at both
ends) profiles. Hinged natural conditions are left to the variational
form. C^1 Hermite cubics on a uniform mesh give a conforming space; no
Bessel function is evaluated anywhere in this module.

The second-order comparison problem int f'^2/r = lam int f^2/r^3,
f(a) = f(1) = 0, is discretised with piecewise linears and solved by
Sturm-count bisection on the tridiagonal pencil.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .model import BCKind, BoundarySpec
from .spectrum import form_coefficients

__all__ = [
    "AssemblyError",
    "DiscreteForm",
    "assemble",
    "smallest_eigenvalue",
    "euler_pencil",
    "euler_smallest",
    "euler_mode",
    "quotient_gap",
    "hermite_integrals",
]

_QUAD_POINTS = 8
_GL_X, _GL_W = np.polynomial.legendre.leggauss(_QUAD_POINTS)
_XI = 0.5 * (_GL_X + 1.0)
_WQ = 0.5 * _GL_W


class AssemblyError(np.linalg.LinAlgError):
    """Discrete form violates symmetry or definiteness."""


def _hermite_basis(xi, h):
    """Values, first and second r-derivatives of the 4 cubic Hermite shape functions."""
    xi = np.asarray(xi)
    phi = np.stack([
        1 - 3 * xi**2 + 2 * xi**3,
        h * (xi - 2 * xi**2 + xi**3),
        3 * xi**2 - 2 * xi**3,
        h * (-(xi**2) + xi**3),
    ])
    dphi = np.stack([
        (-6 * xi + 6 * xi**2) / h,
        1 - 4 * xi + 3 * xi**2,
        (6 * xi - 6 * xi**2) / h,
        -2 * xi + 3 * xi**2,
    ])
    d2phi = np.stack([
        (-6 + 12 * xi) / h**2,
        (-4 + 6 * xi) / h,
        (6 - 12 * xi) / h**2,
        (-2 + 6 * xi) / h,
    ])
    return phi, dphi, d2phi


@dataclass
class DiscreteForm:
    """Assembled Galerkin matrices on the free degrees of freedom.

    ``parts`` holds the separately assembled blocks
    ``hess`` (f''^2 r^(N-1)), ``lap`` ((Delta_r f)^2 r^(N-1)),
    ``grad`` (f'^2 r^(N-3)), ``low`` (f^2 r^(N-5)) so the stiffness is
    ``(1-s) hess + s lap + A grad + B low``.
    """

    K: np.ndarray
    M: np.ndarray
    n: int
    ell: int
    dim: int
    sigma: float
    a: float
    bc: BCKind
    parts: dict
    free: np.ndarray
    nodes: np.ndarray

    def full_vector(self, v):
        """Embed a free-DoF vector into (value, slope) pairs at every node."""
        out = np.zeros(2 * len(self.nodes))
        out[self.free] = v
        return out.reshape(-1, 2)


def _assemble_blocks(N: int, a: float, n: int):
    nodes = np.linspace(a, 1.0, n + 1)
    ndof = 2 * (n + 1)
    names = ("hess", "lap", "grad", "low", "mass")
    mats = {k: np.zeros((ndof, ndof)) for k in names}
    for e in range(n):
        r0, r1 = nodes[e], nodes[e + 1]
        h = r1 - r0
        r = r0 + h * _XI
        w = h * _WQ
        phi, dphi, d2phi = _hermite_basis(_XI, h)
        lap = d2phi + (N - 1) / r * dphi
        wN1 = w * r ** (N - 1)
        blocks = {
            "hess": (d2phi * wN1) @ d2phi.T,
            "lap": (lap * wN1) @ lap.T,
            "grad": (dphi * (w * r ** (N - 3))) @ dphi.T,
            "low": (phi * (w * r ** (N - 5))) @ phi.T,
            "mass": (phi * wN1) @ phi.T,
        }
        sl = slice(2 * e, 2 * e + 4)
        for k, blk in blocks.items():
            mats[k][sl, sl] += blk
    return nodes, mats


def assemble(ell: int, N: int, b: BoundarySpec, a: float, n: int = 64) -> DiscreteForm:
    """Hermite-cubic stiffness and mass matrices of the degree-ell quotient on (a, 1)."""
    if not 0.0 < a < 1.0:
        raise ValueError(f"oracle works on shells only: need 0 < a < 1, got {a}")
    if n < 8:
        raise ValueError(f"need at least 8 cells, got {n}")
    sigma = 0.0 if b.kind is BCKind.DIRICHLET else float(b.sigma)
    nodes, mats = _assemble_blocks(N, a, n)
    ndof = 2 * (n + 1)
    fixed = [0, ndof - 2]
    if b.kind is BCKind.DIRICHLET:
        fixed += [1, ndof - 1]
    free = np.setdiff1d(np.arange(ndof), fixed)
    parts = {k: m[np.ix_(free, free)] for k, m in mats.items()}
    fc = form_coefficients(ell, N, sigma)
    K = (1 - sigma) * parts["hess"] + sigma * parts["lap"] + fc.A * parts["grad"]
    if fc.B != 0:
        K = K + fc.B * parts["low"]
    return DiscreteForm(K, parts["mass"], n, ell, N, sigma, a, b.kind, parts, free, nodes)


def _check(df: DiscreteForm):
    for name, m in (("stiffness", df.K), ("mass", df.M)):
        scale = np.max(np.abs(m))
        if np.max(np.abs(m - m.T)) > 1e-12 * scale:
            raise AssemblyError(f"{name} matrix is not symmetric")


def smallest_eigenvalue(df: DiscreteForm) -> float:
    """Smallest eigenvalue of K x = lam M x via Cholesky reduction of M."""
    _check(df)
    try:
        L = linalg.cholesky(df.M, lower=True)
    except linalg.LinAlgError as exc:
        raise AssemblyError(f"mass matrix not positive definite: {exc}") from None
    X = linalg.solve_triangular(L, df.K, lower=True)
    C = linalg.solve_triangular(L, X.T, lower=True)
    C = 0.5 * (C + C.T)
    return float(linalg.eigh(C, eigvals_only=True, subset_by_index=[0, 0])[0])


def euler_pencil(a: float, n: int):
    """Tridiagonal P1 pencil (K, M) for int f'^2/r vs int f^2/r^3 on interior nodes.

    Returns ``(kd, ke, md, me, nodes)``: diagonals and off-diagonals.
    """
    if not 0.0 < a < 1.0:
        raise ValueError(f"a must lie in (0, 1), got {a}")
    nodes = np.linspace(a, 1.0, n + 1)
    h = np.diff(nodes)
    r = nodes[:-1, None] + h[:, None] * _XI[None, :]
    w = h[:, None] * _WQ[None, :]
    # per-element integrals of 1/r and of the P1 products against 1/r^3
    k_el = np.sum(w / r, axis=1) / h**2
    left = 1 - _XI[None, :]
    right = _XI[None, :]
    m3 = w / r**3
    m_ll = np.sum(m3 * left * left, axis=1)
    m_rr = np.sum(m3 * right * right, axis=1)
    m_lr = np.sum(m3 * left * right, axis=1)
    kd = k_el[:-1] + k_el[1:]
    ke = -k_el[1:-1]
    md = m_rr[:-1] + m_ll[1:]
    me = m_lr[1:-1]
    return kd, ke, md, me, nodes


def _sturm_count(mu, kd, ke, md, me) -> int:
    # negative pivots of K - mu M (Sylvester inertia)
    d = kd - mu * md
    e = ke - mu * me
    count = 0
    piv = d[0]
    tiny = 1e-300
    if piv < 0:
        count += 1
    for i in range(1, len(d)):
        p = piv if piv != 0 else tiny
        piv = d[i] - e[i - 1] * e[i - 1] / p
        if piv < 0:
            count += 1
    return count


def euler_smallest(a: float, n: int = 2048, rtol: float = 1e-13) -> float:
    """Smallest discrete eigenvalue of the Euler comparison problem on (a, 1)."""
    kd, ke, md, me, nodes = euler_pencil(a, n)
    # Rayleigh quotient of the exact first mode gives an upper bound
    interior = nodes[1:-1]
    v = interior * np.sin(math.pi * np.log(interior) / math.log(a))
    kv = kd * v
    kv[:-1] += ke * v[1:]
    kv[1:] += ke * v[:-1]
    mv = md * v
    mv[:-1] += me * v[1:]
    mv[1:] += me * v[:-1]
    hi = float(v @ kv / (v @ mv)) * (1 + 1e-9)
    lo = 0.0
    while _sturm_count(hi, kd, ke, md, me) < 1:
        hi *= 2
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if _sturm_count(mid, kd, ke, md, me) >= 1:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def euler_mode(a: float, n: int = 2048):
    """(nodes, values) of the discrete Euler minimiser, including zero end values."""
    lam = euler_smallest(a, n)
    kd, ke, md, me, nodes = euler_pencil(a, n)
    shift = lam * (1 - 1e-7)
    ab = np.zeros((3, len(kd)))
    ab[0, 1:] = ke - shift * me
    ab[1] = kd - shift * md
    ab[2, :-1] = ke - shift * me
    x = np.ones(len(kd))
    for _ in range(3):
        rhs = md * x
        rhs[:-1] += me * x[1:]
        rhs[1:] += me * x[:-1]
        x = linalg.solve_banded((1, 1), ab, rhs)
        x /= np.max(np.abs(x))
    return nodes, np.concatenate([[0.0], x, [0.0]])


def hermite_integrals(nodes, values, slopes, weight_powers=(-1, -3), quad_points=12):
    """int f'^2 r^p1 and int f^2 r^p2 for the Hermite interpolant on ``nodes``."""
    gx, gw = np.polynomial.legendre.leggauss(quad_points)
    xi, wq = 0.5 * (gx + 1), 0.5 * gw
    p1, p2 = weight_powers
    i1 = i2 = 0.0
    for e in range(len(nodes) - 1):
        h = nodes[e + 1] - nodes[e]
        r = nodes[e] + h * xi
        phi, dphi, _ = _hermite_basis(xi, h)
        c = np.array([values[e], slopes[e], values[e + 1], slopes[e + 1]])
        f = c @ phi
        df = c @ dphi
        i1 += np.sum(h * wq * df**2 * r**p1)
        i2 += np.sum(h * wq * f**2 * r**p2)
    return i1, i2


def quotient_gap(values, a: float, slopes=None, quad_points: int = 8) -> float:
    """2 int f'^2 / r - 3 int f^2 / r^3 on (a, 1) for a function sampled on a uniform grid.

    Without ``slopes`` the samples are joined piecewise linearly; with
    slopes the cubic Hermite interpolant is used.
    """
    values = np.asarray(values, dtype=float)
    nodes = np.linspace(a, 1.0, len(values))
    if slopes is not None:
        i1, i2 = hermite_integrals(nodes, values, np.asarray(slopes, dtype=float), (-1, -3), quad_points)
        return 2 * i1 - 3 * i2
    gx, gw = np.polynomial.legendre.leggauss(quad_points)
    xi, wq = 0.5 * (gx + 1), 0.5 * gw
    h = np.diff(nodes)
    r = nodes[:-1, None] + h[:, None] * xi[None, :]
    w = h[:, None] * wq[None, :]
    slope = np.diff(values) / h
    f = values[:-1, None] * (1 - xi[None, :]) + values[1:, None] * xi[None, :]
    i1 = np.sum(w * slope[:, None] ** 2 / r)
    i2 = np.sum(w * f**2 / r**3)
    return float(2 * i1 - 3 * i2)

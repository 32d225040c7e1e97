"""Eigenvalues of the bilaplacian on balls, punctured balls and spherical shells.

Radial reduction onto spherical harmonics of degree ``ell`` turns each
problem into a small Bessel determinant whose roots ``t`` give ``lambda = t**4``.
"""
__version__ = "0.1.0"

from .model import (  # noqa: E402
    BCKind,
    BoundarySpec,
    DomainKind,
    DomainSpec,
    SpecError,
    SpectralPoint,
    ball,
    dirichlet,
    navier,
    punctured,
    shell,
)
from .rootfind import eigenvalues  # noqa: E402
from .spectrum import branch_sweep, fundamental_tone, threshold_find  # noqa: E402

__all__ = [
    "BCKind",
    "BoundarySpec",
    "DomainKind",
    "DomainSpec",
    "SpecError",
    "SpectralPoint",
    "ball",
    "dirichlet",
    "navier",
    "punctured",
    "shell",
    "eigenvalues",
    "branch_sweep",
    "fundamental_tone",
    "threshold_find",
]

"""Domain, boundary-condition and mode types shared across the package.

All domains have outer radius 1. For outer radius R the eigenvalues scale
as ``R**-4 * lambda``; that scaling is left to the caller.
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field

__all__ = [
    "SpecError",
    "DomainKind",
    "BCKind",
    "DomainSpec",
    "BoundarySpec",
    "ModeIndex",
    "SpectralPoint",
    "harmonic_multiplicity",
    "effective_domain",
    "check_specs",
    "parse_domain",
    "parse_bc",
    "ball",
    "punctured",
    "shell",
    "dirichlet",
    "navier",
]


class SpecError(ValueError):
    """Invalid domain / boundary-condition combination."""


class DomainKind(enum.Enum):
    BALL = "ball"
    PUNCTURED = "punctured"
    SHELL = "shell"


class BCKind(enum.Enum):
    DIRICHLET = "dirichlet"
    NAVIER = "navier"


@dataclass(frozen=True)
class DomainSpec:
    dim: int
    kind: DomainKind
    inner: float | None = None

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 2:
            raise SpecError(f"dimension must be an integer >= 2, got {self.dim}")
        if self.kind is DomainKind.SHELL:
            if self.inner is None or not (0.0 < self.inner < 1.0):
                raise SpecError(f"shell inner radius must lie in (0, 1), got {self.inner}")
        elif self.inner is not None:
            raise SpecError(f"{self.kind.value} takes no inner radius")

    @property
    def a(self) -> float:
        """Inner radius; 0 for balls and punctured balls."""
        return self.inner if self.inner is not None else 0.0

    def encode(self) -> str:
        if self.kind is DomainKind.SHELL:
            return f"shell:a={self.inner!r}"
        return self.kind.value


@dataclass(frozen=True)
class BoundarySpec:
    kind: BCKind
    sigma: float | None = None

    def __post_init__(self):
        if self.kind is BCKind.NAVIER:
            if self.sigma is None or not math.isfinite(self.sigma):
                raise SpecError("navier conditions need a finite Poisson coefficient sigma")
            if self.sigma > 1.0:
                raise SpecError(f"sigma must be <= 1, got {self.sigma}")
        elif self.sigma is not None:
            raise SpecError("dirichlet conditions take no sigma")

    @property
    def coercive(self) -> bool:
        """False only for the sigma = 1 Navier reduction case."""
        return self.kind is BCKind.DIRICHLET or self.sigma < 1.0

    def encode(self) -> str:
        if self.kind is BCKind.NAVIER:
            return f"navier:sigma={self.sigma!r}"
        return "dirichlet"


@dataclass(frozen=True)
class ModeIndex:
    ell: int
    dim: int

    def __post_init__(self):
        if int(self.ell) != self.ell or self.ell < 0:
            raise SpecError(f"degree must be a nonnegative integer, got {self.ell}")

    @property
    def mu(self) -> int:
        """Laplace-Beltrami eigenvalue ell (ell + N - 2) on the unit sphere."""
        return self.ell * (self.ell + self.dim - 2)


@dataclass(frozen=True)
class SpectralPoint:
    ell: int
    t: float
    multiplicity: int
    lam: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "lam", self.t**4)

    def as_dict(self) -> dict:
        return {"ell": self.ell, "t": self.t, "lambda": self.lam, "multiplicity": self.multiplicity}


def harmonic_multiplicity(ell: int, N: int) -> int:
    """Dimension of the degree-ell spherical harmonics on the (N-1)-sphere."""
    if ell < 0 or N < 2:
        raise SpecError(f"invalid (ell, N) = ({ell}, {N})")
    if ell == 0:
        return 1
    if ell == 1:
        return N
    return math.comb(ell + N - 1, N - 1) - math.comb(ell + N - 3, N - 1)


def effective_domain(d: DomainSpec) -> DomainSpec:
    """A point has zero H^2-capacity for N >= 4, so the puncture is invisible there."""
    if d.kind is DomainKind.PUNCTURED and d.dim >= 4:
        return DomainSpec(d.dim, DomainKind.BALL)
    return d


def check_specs(d: DomainSpec, b: BoundarySpec) -> None:
    """Raise SpecError unless the pair describes a well-posed problem."""
    if b.kind is BCKind.NAVIER:
        lower = -1.0 / (d.dim - 1)
        if b.sigma <= lower:
            raise SpecError(
                f"sigma must exceed -1/(N-1) = {lower:.6g} in dimension {d.dim}, got {b.sigma}"
            )
        if b.sigma == 1.0 and effective_domain(d).kind is DomainKind.PUNCTURED:
            raise SpecError("sigma = 1 is not admissible on the punctured ball (non-coercive form)")


def ball(dim: int) -> DomainSpec:
    return DomainSpec(dim, DomainKind.BALL)


def punctured(dim: int) -> DomainSpec:
    return DomainSpec(dim, DomainKind.PUNCTURED)


def shell(dim: int, a: float) -> DomainSpec:
    return DomainSpec(dim, DomainKind.SHELL, float(a))


def dirichlet() -> BoundarySpec:
    return BoundarySpec(BCKind.DIRICHLET)


def navier(sigma: float) -> BoundarySpec:
    return BoundarySpec(BCKind.NAVIER, float(sigma))


_KV = re.compile(r"^(\w+):(\w+)=(.+)$")


def _float(text: str, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise SpecError(f"cannot parse {what} value {text!r}") from None


def parse_domain(text: str, dim: int) -> DomainSpec:
    """Decode ``ball``, ``punctured`` or ``shell:a=<float>``."""
    text = text.strip()
    if text in ("ball", "punctured"):
        return DomainSpec(dim, DomainKind(text))
    m = _KV.match(text)
    if m and m.group(1) == "shell" and m.group(2) == "a":
        return shell(dim, _float(m.group(3), "a"))
    raise SpecError(f"unrecognised domain {text!r}; expected ball, punctured or shell:a=<float>")


def parse_bc(text: str) -> BoundarySpec:
    """Decode ``dirichlet`` or ``navier:sigma=<float>``."""
    text = text.strip()
    if text == "dirichlet":
        return dirichlet()
    m = _KV.match(text)
    if m and m.group(1) == "navier" and m.group(2) == "sigma":
        return navier(_float(m.group(3), "sigma"))
    raise SpecError(f"unrecognised boundary condition {text!r}; expected dirichlet or navier:sigma=<float>")

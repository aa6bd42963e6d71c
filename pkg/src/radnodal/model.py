"""Problem data: domains, radial weights and nonlinearities.

All types are frozen dataclasses. Weights and nonlinearities are closed-form
presets carrying their own derivatives, so downstream checkers never have to
finite-difference anything.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DimensionError, ExponentError, ModelError


class SupercriticalWarning(UserWarning):
    """Exponent outside the subcritical range 1 < p < (N+2)/(N-2)."""


def subcritical_range(N: int) -> tuple[float, float]:
    """Open interval of subcritical exponents for dimension ``N``."""
    if N < 3:
        raise DimensionError(f"dimension N={N} must be at least 3")
    return 1.0, (N + 2) / (N - 2)


def sigma(N: int, p: float) -> float:
    """Growth exponent of the min-max levels, 2(p+1)/(N(p-1))."""
    if N < 3:
        raise DimensionError(f"dimension N={N} must be at least 3")
    if p <= 1:
        raise ExponentError(f"exponent p={p} must exceed 1")
    return 2 * (p + 1) / (N * (p - 1))


def delta(p: float) -> float:
    """(p-1)/(p+1), the exponent appearing in the growth bound g(s)/s <= C (s g)^delta."""
    if p <= 1:
        raise ExponentError(f"exponent p={p} must exceed 1")
    return (p - 1) / (p + 1)


def n_sigma(N: int, p: float) -> float:
    """N times :func:`sigma`; equals 2(p+1)/(p-1) whatever N is."""
    sigma(N, p)
    return 2 * (p + 1) / (p - 1)


# --------------------------------------------------------------------------
# domains

@dataclass(frozen=True)
class Ball:
    """Unit ball in R^N."""

    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 3:
            raise DimensionError(f"dimension N={self.N} must be an integer >= 3")

    @property
    def inner(self) -> float:
        return 0.0

    @property
    def outer(self) -> float:
        return 1.0

    kind = "ball"


@dataclass(frozen=True)
class Annulus:
    """Annulus a <= |x| <= b in R^N."""

    N: int
    a: float
    b: float

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 3:
            raise DimensionError(f"dimension N={self.N} must be an integer >= 3")
        if not (0 < self.a < self.b):
            raise ModelError(f"annulus radii must satisfy 0 < a < b, got a={self.a}, b={self.b}")

    @property
    def inner(self) -> float:
        return float(self.a)

    @property
    def outer(self) -> float:
        return float(self.b)

    kind = "annulus"


Domain = Union[Ball, Annulus]


# --------------------------------------------------------------------------
# weights K(r)

@dataclass(frozen=True)
class ConstantWeight:
    c: float = 1.0

    def __post_init__(self):
        if not self.c > 0:
            raise ModelError(f"weight constant c={self.c} must be positive")

    def K(self, r):
        return self.c * np.ones_like(np.asarray(r, dtype=float))

    def dK(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))

    def d2K(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))

    def V(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))

    def dV(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))

    def smooth_at_origin(self) -> bool:
        return True


@dataclass(frozen=True)
class PowerLawWeight:
    """K(r) = c r^alpha; only C^2 at the origin when alpha = 0."""

    c: float
    alpha: float

    def __post_init__(self):
        if not self.c > 0:
            raise ModelError(f"weight constant c={self.c} must be positive")

    def K(self, r):
        return self.c * np.asarray(r, dtype=float) ** self.alpha

    def dK(self, r):
        r = np.asarray(r, dtype=float)
        return self.c * self.alpha * r ** (self.alpha - 1)

    def d2K(self, r):
        r = np.asarray(r, dtype=float)
        return self.c * self.alpha * (self.alpha - 1) * r ** (self.alpha - 2)

    # r K'/K is exactly alpha; evaluating the quotient would leave rounding residue
    def V(self, r):
        return np.full_like(np.asarray(r, dtype=float), float(self.alpha))

    def dV(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))

    def smooth_at_origin(self) -> bool:
        return self.alpha == 0


@dataclass(frozen=True)
class ExponentialWeight:
    """K(r) = c exp(beta r)."""

    c: float
    beta: float

    def __post_init__(self):
        if not self.c > 0:
            raise ModelError(f"weight constant c={self.c} must be positive")

    def K(self, r):
        return self.c * np.exp(self.beta * np.asarray(r, dtype=float))

    def dK(self, r):
        return self.beta * self.K(r)

    def d2K(self, r):
        return self.beta ** 2 * self.K(r)

    def V(self, r):
        return self.beta * np.asarray(r, dtype=float)

    def dV(self, r):
        return np.full_like(np.asarray(r, dtype=float), float(self.beta))

    def smooth_at_origin(self) -> bool:
        return True


WeightSpec = Union[ConstantWeight, PowerLawWeight, ExponentialWeight]


# --------------------------------------------------------------------------
# nonlinearities g(s)

def _check_p(p):
    if not p > 1:
        raise ExponentError(f"exponent p={p} must exceed 1")


@dataclass(frozen=True)
class PurePower:
    """g(s) = |s|^(p-1) s."""

    p: float

    def __post_init__(self):
        _check_p(self.p)

    @property
    def delta(self) -> float:
        return delta(self.p)

    superlinear = True

    def g(self, s):
        s = np.asarray(s, dtype=float)
        return np.abs(s) ** (self.p - 1) * s

    def G(self, s):
        s = np.asarray(s, dtype=float)
        return np.abs(s) ** (self.p + 1) / (self.p + 1)

    def dg(self, s):
        s = np.asarray(s, dtype=float)
        return self.p * np.abs(s) ** (self.p - 1)

    def sg_over_G(self, s):
        """s g(s) / G(s), identically p + 1."""
        return np.full_like(np.asarray(s, dtype=float), self.p + 1.0)


@dataclass(frozen=True)
class PowerSum:
    """g(s) = |s|^(p-1) s + lam |s|^(q-1) s with 1 < q <= p."""

    p: float
    q: float
    lam: float = 1.0

    def __post_init__(self):
        _check_p(self.p)
        if not (1 < self.q <= self.p):
            raise ExponentError(f"need 1 < q <= p, got q={self.q}, p={self.p}")
        if self.lam < 0:
            raise ModelError(f"lam={self.lam} must be non-negative")

    @property
    def delta(self) -> float:
        return delta(self.p)

    superlinear = True

    def g(self, s):
        s = np.asarray(s, dtype=float)
        a = np.abs(s)
        return a ** (self.p - 1) * s + self.lam * a ** (self.q - 1) * s

    def G(self, s):
        a = np.abs(np.asarray(s, dtype=float))
        return a ** (self.p + 1) / (self.p + 1) + self.lam * a ** (self.q + 1) / (self.q + 1)

    def dg(self, s):
        a = np.abs(np.asarray(s, dtype=float))
        return self.p * a ** (self.p - 1) + self.lam * self.q * a ** (self.q - 1)

    def sg_over_G(self, s):
        """s g(s) / G(s) with the common power |s|^(q+1) divided out."""
        t = np.abs(np.asarray(s, dtype=float)) ** (self.p - self.q)
        return (t + self.lam) / (t / (self.p + 1) + self.lam / (self.q + 1))


@dataclass(frozen=True)
class Linear:
    """g(s) = s. Integrator validation only; rejected by theorem-mode solvers."""

    p = 1.0
    delta = None
    superlinear = False

    def g(self, s):
        return np.asarray(s, dtype=float) * 1.0

    def G(self, s):
        s = np.asarray(s, dtype=float)
        return 0.5 * s * s

    def dg(self, s):
        return np.ones_like(np.asarray(s, dtype=float))

    def sg_over_G(self, s):
        return np.full_like(np.asarray(s, dtype=float), 2.0)


NonlinearitySpec = Union[PurePower, PowerSum, Linear]


@dataclass(frozen=True)
class ProblemSpec:
    domain: Domain
    weight: WeightSpec
    nonlinearity: NonlinearitySpec

    def __post_init__(self):
        if isinstance(self.domain, Ball) and not self.weight.smooth_at_origin():
            raise ModelError("power-law weight with nonzero exponent is not C^2 at the origin of a ball")
        nl = self.nonlinearity
        if nl.superlinear and not self.is_subcritical:
            warnings.warn(
                f"p={nl.p} is outside the subcritical range for N={self.domain.N}",
                SupercriticalWarning,
                stacklevel=3,
            )

    @property
    def N(self) -> int:
        return int(self.domain.N)

    @property
    def is_ball(self) -> bool:
        return isinstance(self.domain, Ball)

    @property
    def is_subcritical(self) -> bool:
        lo, hi = subcritical_range(self.N)
        return lo < self.nonlinearity.p < hi

    @property
    def interval(self) -> tuple[float, float]:
        return self.domain.inner, self.domain.outer

    def rhs_scale(self, d: float) -> float:
        """Natural inverse length sqrt(K(r0) g(d)/d) at the starting radius."""
        if d == 0:
            return 1.0
        k0 = float(self.weight.K(self.domain.inner if not self.is_ball else 0.0))
        return math.sqrt(abs(k0 * float(self.nonlinearity.g(d)) / d))

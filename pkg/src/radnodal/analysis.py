"""Growth-exponent fits for radial critical levels and the level census.

The census is a conditional count: given min-max levels bounded above by
c2 k^sigma, at least floor((E/c2)^(1/sigma)) of them lie below an energy cap
E. Radial levels grow like (k-1)^(N sigma), so they are far sparser, and the
surplus below E must come from nonradial solutions. Distinct levels certify
distinct solutions; the count is over levels, which is the conservative
reading.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DataError
from .model import n_sigma


@dataclass(frozen=True)
class ScalingFit:
    exponent: float
    intercept: float
    r_squared: float
    k_range: tuple
    mode: str
    target: Optional[float] = None
    n_points: int = 0


@dataclass(frozen=True)
class LowerBoundEstimate:
    C_est: float
    k_min: int
    ratios: tuple  # ((k, J_k / (k-1)^(N sigma)), ...)
    exponent: float

    @property
    def spread(self) -> float:
        """(max - min) / max of the ratio sequence."""
        vals = [r for _, r in self.ratios]
        return (max(vals) - min(vals)) / max(vals)


@dataclass(frozen=True)
class CensusReport:
    energy_cap: float
    radial_count: int
    minmax_lower: int
    nonradial_lower: int
    c2: float
    sigma: float


def _levels(levels, need_shift=False, minimum=3):
    pts = sorted((int(k), float(J)) for k, J in levels)
    if len(pts) < minimum:
        raise DataError(f"need at least {minimum} levels, got {len(pts)}")
    ks = [k for k, _ in pts]
    if len(set(ks)) != len(ks):
        raise DataError("nodal classes k must be distinct")
    for k, J in pts:
        if not J > 0:
            raise DataError(f"level for k={k} is not positive (J={J})")
        if need_shift and k < 2:
            raise DataError(f"shifted mode needs k >= 2, got k={k}")
    return np.array(ks, dtype=float), np.array([J for _, J in pts])


def fit_exponent(levels, mode: str = "shifted", N: Optional[int] = None, p: Optional[float] = None) -> ScalingFit:
    """Least squares of log J_k on log(k-1) (``shifted``) or log k (``plain``)."""
    if mode not in ("shifted", "plain"):
        raise ValueError(f"unknown fit mode {mode!r}")
    k, J = _levels(levels, need_shift=(mode == "shifted"))
    x = np.log(k - 1 if mode == "shifted" else k)
    y = np.log(J)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return ScalingFit(
        exponent=float(slope),
        intercept=float(intercept),
        r_squared=r2,
        k_range=(int(k[0]), int(k[-1])),
        mode=mode,
        target=None if N is None or p is None else n_sigma(N, p),
        n_points=len(k),
    )


def lower_bound_constant(levels, N: int, p: float) -> LowerBoundEstimate:
    """Smallest J_k / (k-1)^(N sigma) over the supplied levels."""
    beta = n_sigma(N, p)
    k, J = _levels(levels, need_shift=True, minimum=1)
    ratios = J / (k - 1) ** beta
    i = int(np.argmin(ratios))
    return LowerBoundEstimate(
        C_est=float(ratios[i]),
        k_min=int(k[i]),
        ratios=tuple((int(a), float(b)) for a, b in zip(k, ratios)),
        exponent=beta,
    )


def minmax_count(E: float, c2: float, sigma: float) -> int:
    """Largest n with c2 n^sigma <= E."""
    n = int(math.floor((E / c2) ** (1.0 / sigma)))
    while n > 0 and c2 * n ** sigma > E:
        n -= 1
    while c2 * (n + 1) ** sigma <= E:
        n += 1
    return n


def census(levels, c2: float, sigma: float, E: float) -> CensusReport:
    if not (c2 > 0 and sigma > 0 and E > 0):
        raise ValueError(f"c2, sigma and E must be positive (got {c2}, {sigma}, {E})")
    radial = sum(1 for _, J in levels if J <= E)
    mm = minmax_count(E, c2, sigma)
    return CensusReport(
        energy_cap=float(E),
        radial_count=radial,
        minmax_lower=mm,
        nonradial_lower=max(0, mm - radial),
        c2=float(c2),
        sigma=float(sigma),
    )

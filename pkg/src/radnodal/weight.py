"""Logarithmic derivative of the weight and grid certification of the
weight hypotheses used by the uniqueness theorems.

The checkers are falsifiers: they evaluate the relevant expression on a
uniform grid and report the worst value together with a witness radius.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import RangeError
from .model import PowerLawWeight

DEFAULT_GRID = 1001


@dataclass(frozen=True)
class HypothesisReport:
    """Outcome of a grid check.

    ``worst_value`` is the maximum of the tested expression. ``witness_r`` is
    the onset of the first violation when the check fails (refined by root
    finding when the expression is continuous there) and the location of the
    tightest margin when it holds. For nonlinearity checks the witness is a
    sample value ``s`` rather than a radius.
    """

    name: str
    holds: bool
    worst_value: float
    witness_r: float
    grid_size: int
    worst_r: float = float("nan")
    certified: str = "grid"
    parts: dict = field(default_factory=dict)


def _validate_r(weight, r, interval=None):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(~np.isfinite(r)):
        raise RangeError(f"radius {r} outside [0, inf)")
    if isinstance(weight, PowerLawWeight) and weight.alpha != 0 and np.any(r == 0):
        raise RangeError("power-law weight is undefined at r = 0")
    if interval is not None:
        lo, hi = interval
        if np.any(r < lo) or np.any(r > hi):
            raise RangeError(f"radius {r} outside the interval [{lo}, {hi}]")
    return r


def eval_V(weight, r, interval=None):
    """Return ``(V, V')`` for V(r) = r K'(r)/K(r)."""
    r = _validate_r(weight, r, interval)
    return weight.V(r), weight.dV(r)


def V_from_derivatives(weight, r):
    """V and V' assembled from K, K', K'' (cross-check for the closed forms)."""
    r = np.asarray(r, dtype=float)
    K, dK, d2K = weight.K(r), weight.dK(r), weight.d2K(r)
    return r * dK / K, (dK + r * d2K) / K - r * dK ** 2 / K ** 2


def _grid(interval, grid_points):
    lo, hi = map(float, interval)
    if not hi > lo:
        raise RangeError(f"empty interval [{lo}, {hi}]")
    if grid_points < 2:
        raise RangeError("grid_points must be at least 2")
    return np.linspace(lo, hi, int(grid_points))


def main_condition_expr(weight, N, p, r):
    """Left-hand side of the uniqueness condition; must be < 0."""
    V, dV = weight.V(r), weight.dV(r)
    return (V - p * (N - 2) - N + 4) * (V - p * (N - 2) + N) - 2 * r * dV


def _onset(fn, r, bad):
    """First grid radius where ``bad`` holds, refined to the crossing if bracketed."""
    i = int(np.argmax(bad))
    if i == 0:
        return float(r[0])
    a, b = float(r[i - 1]), float(r[i])
    fa, fb = float(fn(a)), float(fn(b))
    if fa < 0 < fb or fa > 0 > fb:
        return brentq(fn, a, b, xtol=1e-14)
    return b


def check_condition_main(weight, N, p, interval=(0.0, 1.0), grid_points=DEFAULT_GRID):
    """Certify [V-p(N-2)-N+4][V-p(N-2)+N] - 2rV' < 0 on a closed interval."""
    r = _validate_r(weight, _grid(interval, grid_points))
    vals = main_condition_expr(weight, N, p, r)
    worst = float(np.max(vals))
    bad = vals >= 0
    holds = not bool(np.any(bad))
    imax = int(np.argmax(vals))
    if holds:
        witness = float(r[imax])
    else:
        witness = _onset(lambda x: float(main_condition_expr(weight, N, p, np.array(x))), r, bad)
    return HypothesisReport(
        name="uniqueness-condition",
        holds=holds,
        worst_value=worst,
        witness_r=witness,
        grid_size=len(r),
        worst_r=float(r[imax]),
    )


def h1_margin(weight, N, r):
    """max of the three (H1) violations; <= 0 means the hypothesis holds at r."""
    V, dV = weight.V(r), weight.dV(r)
    return np.maximum.reduce([-2 * (N - 1) - V, V + 2, -dV])


def check_H1(weight, N, interval, grid_points=DEFAULT_GRID):
    """Certify -2(N-1) <= V <= -2 and V' >= 0 on [a, b] (boundary equality allowed)."""
    a, b = map(float, interval)
    if a <= 0:
        raise RangeError(f"inner radius a={a} must be positive")
    r = _validate_r(weight, _grid((a, b), grid_points))
    vals = h1_margin(weight, N, r)
    bad = vals > 0
    holds = not bool(np.any(bad))
    imax = int(np.argmax(vals))
    witness = float(r[imax]) if holds else _onset(
        lambda x: float(h1_margin(weight, N, np.array(x))), r, bad)
    return HypothesisReport(
        name="H1",
        holds=holds,
        worst_value=float(np.max(vals)),
        witness_r=witness,
        grid_size=len(r),
        worst_r=float(r[imax]),
    )

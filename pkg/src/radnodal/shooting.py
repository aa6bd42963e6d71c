"""Shooting solver for the radial Dirichlet problems.

A datum (v(0) = d on the ball, v'(a) = m on the annulus) is ranked by the
score ``2 * zero_count + (0 if the trajectory is still on its last lobe at
the outer radius else 1)``. Solutions of nodal class k (k - 1 interior zeros
and a terminal zero) score exactly ``2k - 1``; data just below score
``2k - 2`` and data just above score ``2k``. A solve first bisects on the
score, then, once the bracket straddles a single zero entering through the
outer boundary, switches to safeguarded false position on the signed
terminal value, which is continuous there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    BracketNotFoundError,
    ConditioningError,
    IntegrationError,
    ModelError,
    RadnodalError,
)
from .model import ProblemSpec
from .radial_ode import IntegrationOptions, RadialProfile, Status, integrate, ode_residual

DEFAULT_RANGE = (1e-2, 1e4)
REL_WIDTH = 1e-12


class ArgumentError(RadnodalError, ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ShootResult:
    k: int
    datum: float
    profile: RadialProfile
    terminal_value: float
    bracket: tuple
    residual: float
    iterations: int = 0
    energy: Optional[object] = None

    @property
    def zeros(self) -> tuple:
        return self.profile.zeros

    @property
    def scale(self) -> float:
        return self.profile.scale

    @property
    def slope_at_start(self) -> float:
        """v'(a) on the annulus; ~0 on the ball."""
        return float(self.profile.dv[0])


def _lobe_sign(profile, z):
    return (-1) ** z * (1 if profile.datum > 0 else -1)


def classify_profile(profile: RadialProfile) -> tuple[int, int]:
    """(zero_count, terminal_sign) of an integrated trajectory.

    The terminal sign is normalized to the current lobe: +1 means the
    trajectory has not yet reached its next zero, 0 marks a terminal zero.
    An escape is counted as one more crossing, placing it above every
    trajectory that stays bounded on the same lobe.
    """
    if profile.status is Status.STEP_FAILURE:
        raise IntegrationError(f"integration failed at r={profile.stop_r:.6g}: {profile.message}",
                               at_r=profile.stop_r)
    z = len(profile.zeros)
    if profile.degenerate:
        return 0, 0
    if profile.status is Status.ESCAPED:
        e = int(np.sign(profile.v[-1])) * _lobe_sign(profile, z)
        return (z + 1, 1) if e > 0 else (z, -1)
    if profile.terminal_zero:
        return z, 0
    return z, int(np.sign(profile.v[-1])) * _lobe_sign(profile, z)


def score(zero_count: int, terminal_sign: int) -> int:
    return 2 * zero_count + (0 if terminal_sign > 0 else 1)


def classify(problem: ProblemSpec, datum: float, opts: IntegrationOptions = IntegrationOptions()):
    if not datum > 0:
        raise ArgumentError(f"datum must be positive, got {datum}")
    return classify_profile(integrate(problem, datum, opts))


class _Evaluator:
    """Memoized integrations keyed by datum."""

    def __init__(self, problem, opts):
        self.problem, self.opts = problem, opts
        self.cache = {}

    def __call__(self, d):
        d = float(d)
        if d not in self.cache:
            prof = integrate(self.problem, d, self.opts)
            try:
                cls = classify_profile(prof)
            except IntegrationError:
                cls = None
            self.cache[d] = (prof, cls)
        return self.cache[d]

    def score(self, d):
        cls = self(d)[1]
        return None if cls is None else score(*cls)


def _check_k(k):
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise ArgumentError(f"k must be >= 1, got {k}")
    return int(k)


def _check_range(datum_range, sweep_points, minimum=8):
    lo, hi = map(float, datum_range)
    if not (0 < lo < hi):
        raise ArgumentError(f"datum range must satisfy 0 < lo < hi, got {datum_range}")
    if sweep_points < minimum:
        raise ArgumentError(f"sweep_points must be at least {minimum}")
    return lo, hi


def sweep_data(datum_range, sweep_points):
    lo, hi = datum_range
    return np.logspace(math.log10(lo), math.log10(hi), int(sweep_points))


def sweep(problem, datum_range=DEFAULT_RANGE, sweep_points=64, opts=IntegrationOptions(), _ev=None):
    """Classify every datum of a log-spaced sweep.

    Returns a list of ``(datum, zero_count, terminal_sign, score)``; entries
    whose integration failed carry ``None`` in the last three slots.
    """
    lo, hi = _check_range(datum_range, sweep_points, minimum=2)
    ev = _ev or _Evaluator(problem, opts)
    out = []
    for d in sweep_data((lo, hi), sweep_points):
        cls = ev(d)[1]
        out.append((float(d),) + ((None, None, None) if cls is None else (cls[0], cls[1], score(*cls))))
    return out


def _transitions(points, k, both_ways=False):
    target_lo, target_hi = 2 * k - 2, 2 * k - 1
    valid = [(d, s) for d, _, _, s in points if s is not None]
    found = []
    for (d0, s0), (d1, s1) in zip(valid, valid[1:]):
        if s0 <= target_lo and s1 >= target_hi:
            found.append((d0, d1))
        elif both_ways and s0 >= target_hi and s1 <= target_lo:
            found.append((d1, d0))
    return found


def bracket_k(problem, k, datum_range=DEFAULT_RANGE, sweep_points=64, opts=IntegrationOptions(), _ev=None):
    """Adjacent sweep data ``(lo, hi)`` with score(lo) <= 2k-2 < score(hi)."""
    k = _check_k(k)
    lo, hi = _check_range(datum_range, sweep_points)
    found = _transitions(sweep(problem, (lo, hi), sweep_points, opts, _ev=_ev), k)
    if not found:
        raise BracketNotFoundError(
            f"no nodal-class {k} transition in datum range ({lo:.3g}, {hi:.3g}); try enlarging the range")
    return found[0]


def _refine(problem, k, a, b, ev, rel_width=REL_WIDTH, max_iter=300):
    """Shrink [a, b] (a low-score side, b high-score side) onto the class-k solution."""
    lo_target = 2 * k - 2
    sign_k = (-1) ** (k - 1)

    def signed(d):
        prof, cls = ev(d)
        if cls is None or prof.status is not Status.COMPLETED:
            return None
        z = cls[0]
        if z == k - 1 or (z == k and not prof.terminal_zero):
            return sign_k * prof.v[-1]
        return None

    ga, gb = signed(a), signed(b)  # Illinois-damped endpoint values
    side = 0
    it = 0
    for it in range(1, max_iter + 1):
        if abs(b - a) <= rel_width * max(abs(a), abs(b)):
            break
        continuous = ga is not None and gb is not None and ga > 0 > gb
        mid = None
        if continuous:
            mid = (a * gb - b * ga) / (gb - ga)
            if not min(a, b) < mid < max(a, b):
                mid = None
        if mid is None:
            mid = math.sqrt(a * b) if max(a, b) / min(a, b) > 2 else 0.5 * (a + b)
        if mid in (a, b):
            break
        fm = signed(mid)
        if continuous and fm is not None:
            if fm == 0:
                a = b = mid
                break
            go_low = fm > 0
        else:
            s = ev.score(mid)
            if s is None:
                raise IntegrationError(f"integration failed at datum {mid!r} while refining class {k}")
            go_low = s <= lo_target
        if go_low:
            a, ga = mid, fm
            if side == -1 and gb is not None:
                gb *= 0.5
            side = -1
        else:
            b, gb = mid, fm
            if side == 1 and ga is not None:
                ga *= 0.5
            side = 1
    return a, b, it


def _best(problem, k, a, b, ev, iterations):
    candidates = []
    for d in {a, b}:
        prof, cls = ev(d)
        if cls is not None and prof.completed and cls[0] == k - 1:
            candidates.append((abs(prof.v[-1]) / prof.scale, d, prof))
    if not candidates:
        raise ConditioningError(f"class {k}: bracket ({a!r}, {b!r}) holds no profile with {k - 1} interior zeros")
    rel, d, prof = min(candidates, key=lambda c: (c[0], c[1]))
    if abs(prof.v[-1]) > prof.boundary_tol:
        raise ConditioningError(
            f"class {k}: bracket at resolution ({a!r}, {b!r}) but |v(end)|/scale = {rel:.3g}")
    return ShootResult(
        k=k, datum=d, profile=prof, terminal_value=abs(float(prof.v[-1])),
        bracket=(min(a, b), max(a, b)), residual=ode_residual(problem, prof), iterations=iterations,
    )


def _require_theorem_mode(problem):
    if not problem.nonlinearity.superlinear:
        raise ModelError("shooting solver needs a superlinear nonlinearity (linear g is integrator-test only)")


def solve_k(problem: ProblemSpec, k: int, opts: IntegrationOptions = IntegrationOptions(),
            datum_range=None, sweep_points: int = 64, extensions: int = 3, _ev=None) -> ShootResult:
    """Radial solution with exactly k-1 interior zeros and positive datum."""
    k = _check_k(k)
    _require_theorem_mode(problem)
    ev = _ev or _Evaluator(problem, opts)
    lo, hi = _check_range(datum_range or DEFAULT_RANGE, sweep_points)
    for attempt in range(extensions + 1):
        try:
            a, b = bracket_k(problem, k, (lo, hi), sweep_points, opts, _ev=ev)
            break
        except BracketNotFoundError:
            if attempt == extensions:
                raise
            lo, hi = lo / 10, hi * 10
    a, b, it = _refine(problem, k, a, b, ev)
    return _best(problem, k, a, b, ev, it)


def solve_ladder(problem: ProblemSpec, ks, opts: IntegrationOptions = IntegrationOptions(),
                 datum_range=None, sweep_points: int = 64):
    """Solve several nodal classes sharing one memoized sweep.

    Returns ``{k: ShootResult or exception}``; a failure for one k does not
    stop the others.
    """
    ev = _Evaluator(problem, opts)
    out = {}
    for k in ks:
        try:
            out[k] = solve_k(problem, k, opts, datum_range, sweep_points, _ev=ev)
        except (RadnodalError, ValueError) as exc:
            out[k] = exc
    return out


def uniqueness_scan(problem: ProblemSpec, k: int, datum_range=DEFAULT_RANGE, sweep_points: int = 256,
                    opts: IntegrationOptions = IntegrationOptions()) -> list:
    """Solve at every class-k score transition of the sweep, in either direction."""
    k = _check_k(k)
    _require_theorem_mode(problem)
    lo, hi = _check_range(datum_range, sweep_points)
    ev = _Evaluator(problem, opts)
    results = []
    for a, b in _transitions(sweep(problem, (lo, hi), sweep_points, opts, _ev=ev), k, both_ways=True):
        a, b, it = _refine(problem, k, a, b, ev)
        res = _best(problem, k, a, b, ev, it)
        if all(abs(res.datum - r.datum) > 1e-6 * max(res.datum, r.datum) for r in results):
            results.append(res)
    return sorted(results, key=lambda r: r.datum)

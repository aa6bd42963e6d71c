"""Initial-value integration of the radial equation

    v'' + (N-1)/r v' + K(r) g(v) = 0

on the ball (v(0) = d, v'(0) = 0) or an annulus (v(a) = 0, v'(a) = m).

Steps are taken with scipy's DOP853 stepper driven one step at a time, which
leaves escape detection, step budgeting and zero refinement under our
control. Zeros are refined on the piecewise dense output, so zero counts do
not depend on where the step endpoints happen to fall.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import DOP853, OdeSolution
from scipy.optimize import brentq

from .errors import DomainError, InsufficientDataError, ModelError, StatusError
from .model import (
    Ball,
    ConstantWeight,
    ExponentialWeight,
    Linear,
    PowerLawWeight,
    PowerSum,
    ProblemSpec,
    PurePower,
)


class Status(enum.Enum):
    COMPLETED = "completed"
    ESCAPED = "escaped"
    STEP_FAILURE = "step_failure"


@dataclass(frozen=True)
class IntegrationOptions:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-10
    origin_offset: float = 1e-6
    escape_bound: Optional[float] = None  # default 1e8 * max(1, |datum|)
    max_steps: int = 200_000
    boundary_tol: float = 1e-8  # relative to the profile's sup-norm

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ModelError("tolerances must be positive")
        if not (0 < self.origin_offset < 1e-2):
            raise ModelError("origin_offset must lie in (0, 1e-2)")
        if self.escape_bound is not None and not self.escape_bound > 0:
            raise ModelError("escape_bound must be positive")
        if self.max_steps < 1:
            raise ModelError("max_steps must be positive")
        if not self.boundary_tol > 0:
            raise ModelError("boundary_tol must be positive")

    def escape_for(self, datum: float) -> float:
        if self.escape_bound is not None:
            return self.escape_bound
        return 1e8 * max(1.0, abs(datum))


REFERENCE_OPTIONS = IntegrationOptions(rel_tol=1e-12, abs_tol=1e-12)


class _ZeroDense:
    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return np.zeros((2,) + r.shape)


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Integrated trajectory with refined interior zeros.

    ``zeros`` excludes a terminal zero: when the profile completes with
    ``|v(end)|`` inside the boundary tolerance, a zero crossing that belongs to
    that boundary approach is recorded in ``terminal_zero`` instead.
    """

    r: np.ndarray
    v: np.ndarray
    dv: np.ndarray
    zeros: tuple
    status: Status
    stop_r: float
    datum: float
    kind: str
    N: int
    r_end: float
    origin_offset: float
    dense: Callable
    boundary_tol: float
    terminal_zero: bool = False
    steps: int = 0
    message: str = ""
    segments: np.ndarray = field(default=None, repr=False)

    def __call__(self, r):
        """Dense ``(v, v')`` at radius/radii ``r``."""
        return self.dense(r)

    @property
    def completed(self) -> bool:
        return self.status is Status.COMPLETED

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.v))) if self.v.size else 0.0

    @property
    def terminal_value(self) -> float:
        return float(self.v[-1])

    @property
    def degenerate(self) -> bool:
        return self.scale == 0.0

    @property
    def escape_sign(self) -> int:
        if self.status is not Status.ESCAPED:
            return 0
        return int(np.sign(self.v[-1]))


# --------------------------------------------------------------------------
# scalar fast paths for the right-hand side

def _scalar_weight(w):
    if isinstance(w, ConstantWeight):
        c = float(w.c)
        return lambda r: c
    if isinstance(w, PowerLawWeight):
        c, al = float(w.c), float(w.alpha)
        return lambda r: c * r ** al
    if isinstance(w, ExponentialWeight):
        c, be = float(w.c), float(w.beta)
        return lambda r: c * math.exp(be * r)
    return lambda r: float(w.K(r))


def _scalar_g(nl):
    if isinstance(nl, PurePower):
        p = float(nl.p)
        return lambda s: math.copysign(abs(s) ** p, s)
    if isinstance(nl, PowerSum):
        p, q, lam = float(nl.p), float(nl.q), float(nl.lam)
        return lambda s: math.copysign(abs(s) ** p + lam * abs(s) ** q, s)
    if isinstance(nl, Linear):
        return lambda s: s
    return lambda s: float(nl.g(s))


def make_rhs(problem: ProblemSpec):
    K = _scalar_weight(problem.weight)
    g = _scalar_g(problem.nonlinearity)
    c = float(problem.N - 1)

    def rhs(r, y):
        v, dv = y[0], y[1]
        return np.array([dv, -c / r * dv - K(r) * g(v)])

    return rhs


# --------------------------------------------------------------------------

def _trivial_profile(problem, r0, r_end, datum, kind, eps, opts):
    r = np.linspace(r0, r_end, 65)
    z = np.zeros_like(r)
    return RadialProfile(
        r=r, v=z, dv=z.copy(), zeros=(), status=Status.COMPLETED, stop_r=r_end, datum=datum,
        kind=kind, N=problem.N, r_end=r_end, origin_offset=eps, dense=_ZeroDense(),
        boundary_tol=0.0, segments=r,
    )


def _find_zeros(ts, vs, dvs, interps):
    zeros = []
    for i in range(len(ts) - 1):
        a, b = ts[i], ts[i + 1]
        va, vb = vs[i], vs[i + 1]
        f = (lambda it: lambda x: float(it(x)[0]))(interps[i])
        if va * vb < 0:
            zeros.append(brentq(f, a, b, xtol=1e-14, rtol=1e-15, maxiter=200))
        elif va * vb > 0 and dvs[i] * dvs[i + 1] < 0:
            # an extremum inside the step could hide a double crossing
            x = np.linspace(a, b, 17)
            s = interps[i](x)[0]
            for j in np.nonzero(s[:-1] * s[1:] < 0)[0]:
                zeros.append(brentq(f, x[j], x[j + 1], xtol=1e-14, rtol=1e-15, maxiter=200))
        elif vb == 0 and 0 < i + 1 < len(ts) - 1 and va * vs[i + 2] < 0:
            zeros.append(b)
    return zeros


def _integrate(problem, r0, y0, r_end, datum, kind, eps, opts):
    rhs = make_rhs(problem)
    U = opts.escape_for(datum)
    solver = DOP853(rhs, r0, np.asarray(y0, dtype=float), r_end,
                    rtol=opts.rel_tol, atol=opts.abs_tol)
    ts, ys, interps = [r0], [np.array(y0, dtype=float)], []
    status, message = Status.COMPLETED, ""
    steps = 0
    while solver.status == "running":
        t_old = solver.t
        solver.step()
        if solver.status == "failed":
            status, message = Status.STEP_FAILURE, str(solver.status)
            break
        steps += 1
        interp = solver.dense_output()
        y = solver.y.copy()
        if not np.all(np.isfinite(y)) or abs(y[0]) > U:
            # escape: locate |v| = U inside the step
            f = lambda x: abs(float(interp(x)[0])) - U
            fb = f(solver.t) if np.all(np.isfinite(interp(solver.t))) else np.inf
            r_esc = brentq(f, t_old, solver.t, xtol=1e-14) if f(t_old) < 0 < fb else solver.t
            ts.append(r_esc)
            ys.append(interp(r_esc))
            interps.append(interp)
            status, message = Status.ESCAPED, f"|v| exceeded {U:.3g}"
            break
        v_old = ys[-1][0]
        if v_old * y[0] < 0 and solver.t < r_end:
            # redo the step so it ends on the zero, then restart there: g may
            # be only C^1 at 0 (|v|v), and a step straddling the crossing
            # loses order irregularly, in its dense output too
            z = brentq(lambda x: float(interp(x)[0]), t_old, solver.t, xtol=1e-15, rtol=1e-15)
            if t_old < z < solver.t:
                h = solver.step_size
                sub = DOP853(rhs, t_old, ys[-1], z, rtol=opts.rel_tol, atol=opts.abs_tol,
                             first_step=z - t_old)
                while sub.status == "running":
                    sub.step()
                    ts.append(sub.t)
                    ys.append(sub.y.copy())
                    interps.append(sub.dense_output())
                if sub.status == "failed":
                    status, message = Status.STEP_FAILURE, "step size underflow"
                    break
                ys[-1][0] = 0.0
                solver = DOP853(rhs, z, ys[-1], r_end, rtol=opts.rel_tol, atol=opts.abs_tol,
                                first_step=min(h, r_end - z))
                continue
        ts.append(solver.t)
        ys.append(y)
        interps.append(interp)
        if steps >= opts.max_steps and solver.status == "running":
            status, message = Status.STEP_FAILURE, f"step budget {opts.max_steps} exhausted"
            break
    if status is Status.STEP_FAILURE and solver.status == "failed":
        message = "step size underflow"

    ts = np.asarray(ts)
    Y = np.asarray(ys)
    vs, dvs = Y[:, 0], Y[:, 1]
    dense = OdeSolution(ts, interps) if interps else _ZeroDense()
    zeros = _find_zeros(ts, vs, dvs, interps)
    scale = float(np.max(np.abs(vs)))
    btol = opts.boundary_tol * scale
    terminal = False
    if status is Status.COMPLETED and abs(vs[-1]) <= btol:
        terminal = True
        slope = max(abs(dvs[-1]), 1e-300)
        zeros = [z for z in zeros if slope * (r_end - z) > 2 * btol]
    return RadialProfile(
        r=ts, v=vs, dv=dvs, zeros=tuple(zeros), status=status, stop_r=float(ts[-1]), datum=datum,
        kind=kind, N=problem.N, r_end=r_end, origin_offset=eps, dense=dense, boundary_tol=btol,
        terminal_zero=terminal, steps=steps, message=message, segments=ts,
    )


def origin_offset_for(problem: ProblemSpec, d: float, opts: IntegrationOptions) -> float:
    """Starting radius, shrunk below the natural length 1/sqrt(K(0) g(d)/d) for large data."""
    return opts.origin_offset * min(1.0, 1.0 / problem.rhs_scale(d))


def integrate_ball(problem: ProblemSpec, d: float, opts: IntegrationOptions = IntegrationOptions(),
                   r_max: Optional[float] = None) -> RadialProfile:
    """Integrate from the origin with v(0) = d, v'(0) = 0 out to r = 1 (or ``r_max``)."""
    if not isinstance(problem.domain, Ball):
        raise DomainError("integrate_ball requires a ball domain")
    d = float(d)
    r_end = 1.0 if r_max is None else float(r_max)
    eps = origin_offset_for(problem, d, opts)
    if d == 0:
        return _trivial_profile(problem, eps, r_end, d, "ball", eps, opts)
    N = problem.N
    k0g = float(problem.weight.K(0.0)) * float(problem.nonlinearity.g(d))
    y0 = [d - k0g * eps ** 2 / (2 * N), -k0g * eps / N]
    return _integrate(problem, eps, y0, r_end, d, "ball", eps, opts)


def integrate_annulus(problem: ProblemSpec, m: float, opts: IntegrationOptions = IntegrationOptions(),
                      r_max: Optional[float] = None) -> RadialProfile:
    """Integrate from r = a with v(a) = 0, v'(a) = m out to r = b (or ``r_max``)."""
    if isinstance(problem.domain, Ball):
        raise DomainError("integrate_annulus requires an annulus domain")
    m = float(m)
    a = problem.domain.inner
    r_end = problem.domain.outer if r_max is None else float(r_max)
    if m == 0:
        return _trivial_profile(problem, a, r_end, m, "annulus", 0.0, opts)
    return _integrate(problem, a, [0.0, m], r_end, m, "annulus", 0.0, opts)


def integrate(problem: ProblemSpec, datum: float, opts: IntegrationOptions = IntegrationOptions()):
    if problem.is_ball:
        return integrate_ball(problem, datum, opts)
    return integrate_annulus(problem, datum, opts)


def count_interior_zeros(profile: RadialProfile) -> int:
    if not profile.completed:
        raise StatusError(f"profile did not complete ({profile.status.value} at r={profile.stop_r:.6g})")
    return len(profile.zeros)


# v'' at step ends from the dense v' of each step: the interpolant is a
# polynomial of degree 7 in the step variable, so a Chebyshev fit of that
# degree through 12 interior points reproduces it up to rounding
_FIT_DEG = 7
_FIT_T = np.cos(np.pi * (np.arange(12) + 0.5) / 12)[::-1]
_FIT_PINV = np.linalg.pinv(np.polynomial.chebyshev.chebvander(_FIT_T, _FIT_DEG))
_DT_LEFT = np.array([(-1.0) ** (j + 1) * j * j for j in range(_FIT_DEG + 1)])
_DT_RIGHT = np.array([float(j * j) for j in range(_FIT_DEG + 1)])


def _end_second_derivatives(profile):
    """d/dr of the dense v' at the start and end of every step."""
    a, b = profile.r[:-1], profile.r[1:]
    half = 0.5 * (b - a)
    x = (0.5 * (a + b))[:, None] + half[:, None] * _FIT_T[None, :]
    dv = profile.dense(x.ravel())[1].reshape(x.shape)
    coef = dv @ _FIT_PINV.T
    return coef @ _DT_LEFT / half, coef @ _DT_RIGHT / half


def ode_residual(problem: ProblemSpec, profile: RadialProfile) -> float:
    """Sup-norm of v'' + (N-1)/r v' + K g(v) over interior nodes.

    v and v' are the integrator's node values. v'' is the derivative of the
    dense v' on each side of the node, averaged; differencing across the node
    would straddle two interpolants and pick up the small kink between them.
    """
    if not profile.completed:
        raise StatusError("ode_residual needs a completed profile")
    r = profile.r
    if r.size < 5:
        raise InsufficientDataError(f"only {r.size} nodes")
    if profile.degenerate:
        return 0.0
    idx = np.arange(1, r.size - 1)
    if profile.kind == "ball":
        idx = idx[r[idx] > 2 * profile.origin_offset]
    if idx.size == 0:
        return 0.0
    start, end = _end_second_derivatives(profile)
    d2 = 0.5 * (start[idx] + end[idx - 1])
    ri, dv = r[idx], profile.dv[idx]
    res = d2 + (problem.N - 1) / ri * dv + problem.weight.K(ri) * problem.nonlinearity.g(profile.v[idx])
    return float(np.max(np.abs(res)))

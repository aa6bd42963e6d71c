"""Critical levels of radial profiles.

Integrals are taken over the integrator's own step segments with adaptive
Gauss-Legendre quadrature on the dense output, so quadrature error stays
slaved to integration error instead of to a resampling grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import DimensionError, StatusError
from .model import Ball, PurePower

_GL_N = 16
_X, _W = np.polynomial.legendre.leggauss(_GL_N)


@dataclass(frozen=True)
class EnergyBreakdown:
    J_radial: float
    J_direct: float
    kinetic: float
    potential: float
    nehari_residual: float
    J_radial_general: float
    paths_agree: Optional[bool] = None


def omega(N: int) -> float:
    """Surface measure of the unit sphere in R^N, 2 pi^(N/2) / Gamma(N/2)."""
    if N < 2:
        raise DimensionError(f"N={N} must be at least 2")
    return 2 * math.pi ** (N / 2) / math.gamma(N / 2)


def _gl(f, a, b):
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    x = mid[:, None] + half[:, None] * _X[None, :]
    vals = f(x.ravel()).reshape(x.shape + (-1,))
    return half[:, None] * np.einsum("j,ijk->ik", _W, vals)


def integrate_segments(f, edges, rtol=1e-12, max_depth=30):
    """Integrate a vector-valued ``f`` over consecutive segments of ``edges``.

    ``f`` maps a 1-D radius array to an ``(n, m)`` array. Each segment is
    accepted once its Gauss-Legendre value agrees with the sum over its two
    halves to ``rtol`` relative to the running total, otherwise it is split.
    """
    a, b = np.asarray(edges[:-1], float), np.asarray(edges[1:], float)
    whole = _gl(f, a, b)
    scale = np.sum(np.abs(whole), axis=0)
    total = np.zeros(whole.shape[1])
    for _ in range(max_depth):
        m = 0.5 * (a + b)
        halves = _gl(f, np.concatenate([a, m]), np.concatenate([m, b]))
        n = a.size
        split = halves[:n] + halves[n:]
        err = np.abs(split - whole)
        ok = np.all(err <= rtol * np.maximum(scale, 1e-300) / max(n, 1) + 1e-300, axis=1)
        total += split[ok].sum(axis=0)
        if ok.all():
            return total
        bad = ~ok
        a, b = np.concatenate([a[bad], m[bad]]), np.concatenate([m[bad], b[bad]])
        whole = np.concatenate([halves[:n][bad], halves[n:][bad]])
    total += whole.sum(axis=0)
    return total


def _require_completed(profile):
    if not profile.completed:
        raise StatusError(f"energy needs a completed profile ({profile.status.value})")


def radial_integrals(problem, profile) -> dict:
    """Reduced integrals (no sphere measure) of the energy densities.

    Keys: ``kinetic`` = int r^(N-1) v'^2/2, ``potential`` = int r^(N-1) K G(v),
    ``gv`` = int r^(N-1) K g(v) v, ``power`` = int r^(N-1) K |v|^(p+1) (pure
    powers only, else nan).
    """
    _require_completed(profile)
    if profile.degenerate:
        return {"kinetic": 0.0, "potential": 0.0, "gv": 0.0, "power": 0.0}
    N = problem.N
    K, nl = problem.weight.K, problem.nonlinearity
    pure = isinstance(nl, PurePower)

    def dens(r):
        v, dv = profile.dense(r)
        w = r ** (N - 1)
        Kr = K(r)
        cols = [w * dv * dv / 2, w * Kr * nl.G(v), w * Kr * nl.g(v) * v]
        cols.append(w * Kr * np.abs(v) ** (nl.p + 1) if pure else np.zeros_like(r))
        return np.stack(cols, axis=-1)

    kin, pot, gv, power = integrate_segments(dens, profile.segments)
    return {"kinetic": kin, "potential": pot, "gv": gv, "power": power if pure else float("nan")}


def _radial_pair(problem, I):
    nl = problem.nonlinearity
    general = I["gv"] / 2 - I["potential"]
    if isinstance(problem.domain, Ball) and isinstance(nl, PurePower):
        return (0.5 - 1 / (nl.p + 1)) * I["power"], general
    return general, general


def energy_radial(problem, profile) -> float:
    """Critical level from the solution-only formula.

    Ball with a pure power: (1/2 - 1/(p+1)) w_N int r^(N-1) K |v|^(p+1);
    otherwise w_N int r^(N-1) K (g(v) v/2 - G(v)).
    """
    I = radial_integrals(problem, profile)
    return omega(problem.N) * _radial_pair(problem, I)[0]


def energy_direct(problem, profile) -> EnergyBreakdown:
    I = radial_integrals(problem, profile)
    w = omega(problem.N)
    J7, J8 = _radial_pair(problem, I)
    kinetic, potential = w * I["kinetic"], w * I["potential"]
    J_direct = kinetic - potential
    J_radial = w * J7
    agree = None
    if isinstance(problem.nonlinearity, PurePower):
        agree = bool(abs(J7 - J8) <= 1e-9 * max(abs(J7), 1e-300))
    return EnergyBreakdown(
        J_radial=J_radial,
        J_direct=J_direct,
        kinetic=kinetic,
        potential=potential,
        nehari_residual=abs(w * 2 * I["kinetic"] - w * I["gv"]),
        J_radial_general=w * J8,
        paths_agree=agree,
    )


def attach_energy(problem, result):
    """Return ``result`` with its ``energy`` field filled."""
    return replace(result, energy=energy_direct(problem, result.profile))

"""Evaluation of g, G, g' and sample-grid certification of (H2)-(H5).

These checks gather evidence on a finite log-spaced grid. A report that
holds is grid-certified only, never a proof.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError, DegenerateNonlinearityError, PreconditionError
from . import model
from .weight import HypothesisReport


def default_grid(n=512, lo=1e-6, hi=1e6):
    return np.logspace(np.log10(lo), np.log10(hi), n)


@dataclass(frozen=True)
class GrowthReport:
    name: str
    holds: bool
    constant: float
    witness_s: float
    grid: str
    certified: str = "grid"


def eval_g(nl, s):
    """Return ``(g(s), G(s), g'(s))``."""
    return nl.g(s), nl.G(s), nl.dg(s)


def _describe(s):
    return f"{len(s)} points in [{s.min():.3g}, {s.max():.3g}]"


def _positive_grid(sample_grid):
    s = default_grid() if sample_grid is None else np.asarray(sample_grid, dtype=float)
    if s.size == 0:
        raise DataError("sample grid is empty")
    if np.any(s <= 0):
        raise DataError("sample grid must lie in (0, inf)")
    return np.sort(s)


def check_H2_H3(nl, sample_grid=None):
    """g > 0 and s g' - g > 0 on the grid, plus oddness spot checks."""
    s = _positive_grid(sample_grid)
    g, dg = nl.g(s), nl.dg(s)
    # (g/s)' > 0  <=>  s g' - g > 0
    margin = -np.minimum(g, s * dg - g)
    odd_err = np.max(np.abs(nl.g(-s) + g) / np.maximum(np.abs(g), 1e-300))
    odd = bool(odd_err <= 1e-14)
    bad = margin >= 0
    holds = bool(not np.any(bad)) and odd
    i = int(np.argmax(margin))
    witness = float(s[int(np.argmax(bad))]) if np.any(bad) else float(s[i])
    return HypothesisReport(
        name="H2-H3",
        holds=holds,
        worst_value=float(margin[i]),
        witness_r=witness,
        grid_size=len(s),
        worst_r=float(s[i]),
        parts={"positive": bool(np.all(g > 0)), "g_over_s_increasing": bool(np.all(s * dg - g > 0)),
               "odd": odd},
    )


def check_H4(nl, p, sample_grid=None):
    """sup g(s)/s^p over the grid; finite iff the ratio stops growing in the top decade."""
    s = _positive_grid(sample_grid)
    ratio = nl.g(s) / s ** p
    top = ratio[s >= s[-1] / 10]
    holds = bool(np.all(np.diff(top) <= 1e-12 * np.abs(top[:-1])))
    i = int(np.argmax(ratio))
    return GrowthReport(
        name="H4",
        holds=holds,
        constant=float(ratio[i]) if holds else float("inf"),
        witness_s=float(s[i]),
        grid=_describe(s),
    )


def check_H5(nl, sample_grid=None):
    """inf s g(s)/G(s) over the grid; the Ambrosetti-Rabinowitz constant."""
    s = _positive_grid(sample_grid)
    G = nl.G(s)
    if np.any(G == 0):
        raise DegenerateNonlinearityError(f"G vanishes at s={s[np.argmax(G == 0)]}")
    ratio = nl.sg_over_G(s) if hasattr(nl, "sg_over_G") else s * nl.g(s) / G
    i = int(np.argmin(ratio))
    theta = float(ratio[i])
    return GrowthReport(
        name="H5", holds=theta > 2, constant=theta, witness_s=float(s[i]), grid=_describe(s)
    )


def check_remark1(nl, p, sample_grid=None):
    """Derived properties (a), (b) and (f) of the standing hypotheses.

    (a) g(s)/s <= C (s g(s))^delta with C = C_H4^(2/(p+1));
    (b) g'(s) > g(s)/s;
    (f) g(s)/s strictly increasing across the top two decades of the grid.
    """
    s = _positive_grid(sample_grid)
    h23 = check_H2_H3(nl, s)
    h4 = check_H4(nl, p, s)
    h5 = check_H5(nl, s)
    if not (h23.holds and h4.holds and h5.holds):
        failed = [r.name for r in (h23, h4, h5) if not r.holds]
        raise PreconditionError(f"hypotheses {', '.join(failed)} fail; the derived growth properties are not implied")

    delta = model.delta(p)
    g = nl.g(s)
    q = g / s
    C_a = h4.constant ** (1 - delta)
    ratio_a = q / (C_a * (s * g) ** delta)
    a_ok = bool(np.all(ratio_a <= 1 + 1e-12))

    gap_b = q - nl.dg(s)
    b_ok = bool(np.all(gap_b < 0))

    top = q[s >= s[-1] / 100]
    f_ok = bool(np.all(np.diff(top) > 0))

    margins = {"a": float(np.max(ratio_a) - 1), "b": float(np.max(gap_b / q)), "f": float(-np.min(np.diff(top)))}
    worst_key = max(margins, key=margins.get)
    witness = {
        "a": float(s[int(np.argmax(ratio_a))]),
        "b": float(s[int(np.argmax(gap_b / q))]),
        "f": float(s[-1]),
    }[worst_key]
    return HypothesisReport(
        name="derived-growth",
        holds=a_ok and b_ok and f_ok,
        worst_value=margins[worst_key],
        witness_r=witness,
        grid_size=len(s),
        parts={"a": a_ok, "b": b_ok, "f": f_ok, "C_a": C_a, "delta": delta},
    )

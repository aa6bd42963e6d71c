import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from radnodal.analysis import census, fit_exponent, lower_bound_constant, minmax_count
from radnodal.errors import DataError


def test_exact_power_law_plain():
    fit = fit_exponent([(k, 5 * k ** 4) for k in range(1, 11)], mode="plain")
    assert fit.exponent == pytest.approx(4.0, abs=1e-12)
    assert fit.intercept == pytest.approx(math.log(5), abs=1e-12)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
    assert fit.k_range == (1, 10) and fit.n_points == 10


def test_perturbed_power_law_plain():
    ks = np.arange(4, 13)
    J = ks ** 4 * (1 + 1 / ks)
    fit = fit_exponent(list(zip(ks, J)), mode="plain")
    # local log-log slope is 4 - 1/(k+1), so the fit must sit between its extremes
    assert 4 - 1 / 5 < fit.exponent < 4 - 1 / 13
    A = np.vstack([np.log(ks), np.ones(len(ks))]).T
    slope = np.linalg.lstsq(A, np.log(J), rcond=None)[0][0]
    assert fit.exponent == pytest.approx(slope, abs=1e-12)


def test_shifted_mode_and_target():
    fit = fit_exponent([(k, 3 * (k - 1) ** 6) for k in range(2, 9)], N=3, p=2)
    assert fit.mode == "shifted" and fit.target == 6
    assert fit.exponent == pytest.approx(6.0, abs=1e-12)


@given(st.floats(0.1, 100), st.floats(0.5, 8), st.integers(1, 5), st.integers(3, 12))
def test_power_laws_recovered(A, beta, k0, n):
    levels = [(k, A * k ** beta) for k in range(k0, k0 + n)]
    fit = fit_exponent(levels, mode="plain")
    assert fit.exponent == pytest.approx(beta, abs=1e-12)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("levels,mode", [
    ([(1, 1.0), (2, 2.0)], "plain"),
    ([(1, 1.0), (2, 0.0), (3, 3.0)], "plain"),
    ([(1, 1.0), (2, -2.0), (3, 3.0)], "plain"),
    ([(2, 1.0), (2, 2.0), (3, 3.0)], "plain"),
    ([(1, 1.0), (2, 2.0), (3, 3.0)], "shifted"),
])
def test_fit_data_errors(levels, mode):
    with pytest.raises(DataError):
        fit_exponent(levels, mode=mode)


def test_unknown_mode():
    with pytest.raises(ValueError):
        fit_exponent([(2, 1.0), (3, 2.0), (4, 3.0)], mode="loglog")


def test_lower_bound_exact():
    est = lower_bound_constant([(k, 5 * (k - 1) ** 4) for k in range(2, 11)], 3, 3)
    assert est.C_est == pytest.approx(5.0, rel=1e-14)
    assert all(r == pytest.approx(5.0, rel=1e-14) for _, r in est.ratios)
    assert est.spread == pytest.approx(0.0, abs=1e-14)


def test_lower_bound_minimum_at_largest_k():
    est = lower_bound_constant([(k, (k - 1) ** 4 + (k - 1) ** 2) for k in range(2, 11)], 3, 3)
    assert est.k_min == 10
    assert est.C_est == pytest.approx(1 + 1 / 81, rel=1e-14)
    assert dict(est.ratios)[2] == pytest.approx(2.0)


def test_lower_bound_rejects_k1():
    with pytest.raises(DataError):
        lower_bound_constant([(1, 1.0), (2, 2.0)], 3, 3)


def test_census_example():
    rep = census([(1, 1), (2, 16), (3, 81), (4, 256)], 1.0, 4 / 3, 100)
    assert (rep.radial_count, rep.minmax_lower, rep.nonradial_lower) == (3, 31, 28)
    low = census([(1, 1), (2, 16), (3, 81), (4, 256)], 1.0, 4 / 3, 0.5)
    assert (low.radial_count, low.minmax_lower, low.nonradial_lower) == (0, 0, 0)


@pytest.mark.parametrize("bad", [(0, 1, 1), (1, 0, 1), (1, 1, 0), (-1, 1, 1)])
def test_census_argument_errors(bad):
    with pytest.raises(ValueError):
        census([(1, 1.0)], *bad)


def test_minmax_count_is_exact_at_boundaries():
    # 2^3 = 8 exactly: a floor of 8^(1/3) computed in floating point may land on 1.999...
    assert minmax_count(8.0, 1.0, 3.0) == 2
    assert minmax_count(1000.0, 1.0, 3.0) == 10
    assert minmax_count(999.999, 1.0, 3.0) == 9
    for n in range(1, 200):
        assert minmax_count(n ** 1.5, 1.0, 1.5) == n


@given(st.lists(st.floats(1, 1e6), min_size=1, max_size=30), st.floats(1, 1e7), st.floats(1, 1e7))
def test_census_monotone_in_cap(Js, E1, E2):
    levels = [(k, J) for k, J in enumerate(sorted(Js), start=1)]
    lo, hi = sorted((E1, E2))
    a, b = census(levels, 1.0, 4 / 3, lo), census(levels, 1.0, 4 / 3, hi)
    assert a.minmax_lower <= b.minmax_lower
    assert a.radial_count <= b.radial_count
    assert a.nonradial_lower >= 0


@given(st.lists(st.floats(1, 1e6), min_size=1, max_size=30), st.floats(1, 1e7), st.randoms())
def test_census_permutation_invariant(Js, E, rnd):
    levels = [(k, J) for k, J in enumerate(Js, start=1)]
    shuffled = levels[:]
    rnd.shuffle(shuffled)
    assert census(levels, 2.0, 1.5, E) == census(shuffled, 2.0, 1.5, E)


def test_nonradial_count_grows_without_bound():
    levels = [(k, float(k) ** 4) for k in range(1, 200)]
    counts = [census(levels, 1.0, 4 / 3, 10.0 ** e).nonradial_lower for e in range(1, 9)]
    assert counts == sorted(counts)
    assert counts[-1] > 100 * counts[1]


def test_census_nondecreasing_in_cap_for_power_levels():
    levels = [(k, float(k) ** 4) for k in range(1, 100)]
    prev = -1
    rng = random.Random(0)
    for E in sorted(rng.uniform(1, 1e6) for _ in range(200)):
        n = census(levels, 1.0, 4 / 3, E).nonradial_lower
        assert n >= prev
        prev = n


@pytest.mark.parametrize("ladder,target", [("cubic_ladder", 4.0), ("quadratic_ladder", 6.0)])
def test_level_growth_approaches_target_from_below(ladder, target, request):
    # the k = 4..12 window is pre-asymptotic: local slopes still climb toward N sigma
    levels = {k: r.energy.J_radial for k, r in request.getfixturevalue(ladder).items()}
    ks = sorted(k for k in levels if k >= 3)
    slopes = [math.log(levels[b] / levels[a]) / math.log((b - 1) / (a - 1)) for a, b in zip(ks, ks[1:])]
    assert all(s0 < s1 for s0, s1 in zip(slopes, slopes[1:]))
    assert slopes[-1] < target

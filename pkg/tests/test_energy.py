import math
from dataclasses import replace

import numpy as np
import pytest

from radnodal.energy import (
    energy_direct, energy_radial, integrate_segments, omega, radial_integrals,
)
from radnodal.errors import DimensionError, StatusError
from radnodal.model import Annulus, PowerLawWeight, PowerSum, ProblemSpec
from radnodal.radial_ode import IntegrationOptions, integrate_annulus, integrate_ball
from radnodal.shooting import solve_k
from reference_values import CUBIC, QUADRATIC


def test_omega_examples():
    assert omega(3) == pytest.approx(4 * math.pi, rel=1e-15)
    assert omega(4) == pytest.approx(2 * math.pi ** 2, rel=1e-15)
    assert omega(2) == pytest.approx(2 * math.pi, rel=1e-15)
    with pytest.raises(DimensionError):
        omega(1)


def test_integrate_segments_polynomial_and_oscillatory():
    f = lambda r: np.stack([r ** 5, np.sin(40 * r)], axis=-1)
    got = integrate_segments(f, np.array([0.0, 0.3, 1.0, 2.0]))
    assert got[0] == pytest.approx(2 ** 6 / 6, rel=1e-14)
    assert got[1] == pytest.approx((1 - math.cos(80)) / 40, rel=1e-12)


def test_trivial_profile_has_zero_energy(cubic_problem):
    prof = integrate_ball(cubic_problem, 0.0)
    assert energy_radial(cubic_problem, prof) == 0.0
    e = energy_direct(cubic_problem, prof)
    assert (e.J_radial, e.J_direct, e.kinetic, e.potential, e.nehari_residual) == (0, 0, 0, 0, 0)


def test_ground_state_level_anchor(cubic_ladder):
    e = cubic_ladder[1].energy
    assert e.J_radial == pytest.approx(CUBIC[1][1], rel=1e-9)
    # both solution formulas coincide for a pure power
    assert e.J_radial_general == pytest.approx(e.J_radial, rel=1e-9)
    assert e.paths_agree is True
    assert e.nehari_residual <= 1e-6 * e.kinetic


def test_direct_equals_kinetic_minus_potential(cubic_ladder):
    for res in cubic_ladder.values():
        e = res.energy
        assert e.J_direct == e.kinetic - e.potential
        assert abs(e.J_radial - e.J_direct) <= 1e-6 * max(1.0, abs(e.J_direct))
        assert e.J_radial > 0


def test_levels_match_reference(cubic_ladder, quadratic_ladder):
    for ladder, ref in ((cubic_ladder, CUBIC), (quadratic_ladder, QUADRATIC)):
        for k, res in ladder.items():
            assert res.energy.J_radial == pytest.approx(ref[k][1], rel=1e-8)


def test_measure_factors_out_exactly(cubic_problem, cubic_ladder):
    prof = cubic_ladder[3].profile
    reduced = radial_integrals(cubic_problem, prof)
    e = energy_direct(cubic_problem, prof)
    w = omega(3)
    assert e.kinetic == w * reduced["kinetic"]
    assert e.potential == w * reduced["potential"]
    assert energy_radial(cubic_problem, prof) == w * (0.5 - 1 / 4) * reduced["power"]


def test_pohozaev_identity(cubic_problem, cubic_ladder):
    # (N-2) int r^2 v'^2/2 - N int r^2 G(v) = -v'(1)^2/2 for a solution on the unit ball
    for res in cubic_ladder.values():
        I = radial_integrals(cubic_problem, res.profile)
        lhs = (3 - 2) * I["kinetic"] - 3 * I["potential"]
        rhs = -0.5 * res.profile.dv[-1] ** 2
        assert lhs == pytest.approx(rhs, rel=1e-8)


def test_nehari_negative_control(cubic_problem, cubic_ladder):
    prof = cubic_ladder[1].profile
    cut = 0.5

    def truncated(r):
        out = np.array(prof.dense(r))
        out[:, np.asarray(r) > cut] = 0.0
        return out

    segs = np.union1d(prof.segments, [cut])
    fake = replace(prof, dense=truncated, segments=segs)
    e = energy_direct(cubic_problem, fake)
    true = energy_direct(cubic_problem, prof)
    assert true.nehari_residual <= 1e-6 * true.kinetic
    assert e.nehari_residual > 1e-2 * e.kinetic


def test_incomplete_profile_rejected():
    problem = ProblemSpec(Annulus(3, 1, 2), PowerLawWeight(1.0, -2.0), PowerSum(3, 2, 1.0))
    prof = integrate_annulus(problem, 100.0, IntegrationOptions(escape_bound=1.0))
    with pytest.raises(StatusError):
        energy_direct(problem, prof)


def test_power_sum_annulus_uses_general_formula():
    problem = ProblemSpec(Annulus(3, 1, 2), PowerLawWeight(1.0, -2.0), PowerSum(3, 2, 1.0))
    res = solve_k(problem, 2, datum_range=(1e-1, 1e3))
    e = energy_direct(problem, res.profile)
    assert e.paths_agree is None
    assert e.J_radial == e.J_radial_general > 0
    assert abs(e.J_radial - e.J_direct) <= 1e-6 * max(1.0, e.J_direct)
    assert e.nehari_residual <= 1e-6 * e.kinetic

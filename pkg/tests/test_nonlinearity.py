import numpy as np
import pytest
from hypothesis import given, strategies as st

from radnodal.errors import DataError, DegenerateNonlinearityError, PreconditionError
from radnodal.model import Linear, PowerSum, PurePower
from radnodal.nonlinearity import check_H2_H3, check_H4, check_H5, check_remark1, eval_g

NONLINEARITIES = [PurePower(3), PurePower(1.7), PowerSum(5, 3, 1.0), PowerSum(3, 2, 0.5), Linear()]


def test_eval_g_examples():
    assert tuple(map(float, eval_g(PurePower(3), 2))) == (8, 4, 12)
    assert tuple(map(float, eval_g(PurePower(3), -2))) == (-8, 4, 12)
    g, G, dg = eval_g(PowerSum(5, 3, 1.0), 1)
    assert (g, dg) == (2, 8)
    assert G == pytest.approx(5 / 12, rel=1e-15)


@pytest.mark.parametrize("nl", NONLINEARITIES)
@given(s=st.floats(1e-6, 1e6))
def test_oddness_and_evenness(nl, s):
    assert nl.g(-s) == -nl.g(s)
    assert nl.G(-s) == nl.G(s)
    assert nl.dg(-s) == nl.dg(s)


@pytest.mark.parametrize("nl", NONLINEARITIES)
@given(s=st.floats(0.01, 100))
def test_closed_forms_consistent_with_finite_differences(nl, s):
    h = 1e-6 * s
    assert nl.g(s) == pytest.approx((nl.G(s + h) - nl.G(s - h)) / (2 * h), rel=1e-7)
    assert nl.dg(s) == pytest.approx((nl.g(s + h) - nl.g(s - h)) / (2 * h), rel=1e-7)


def test_H2_H3_examples():
    assert check_H2_H3(PurePower(3)).holds
    rep = check_H2_H3(Linear())
    assert not rep.holds and not rep.parts["g_over_s_increasing"] and rep.parts["positive"]
    assert check_H2_H3(PowerSum(3, 2, 1.0)).holds


def test_H2_H3_grid_errors():
    with pytest.raises(DataError):
        check_H2_H3(PurePower(3), [])
    with pytest.raises(DataError):
        check_H2_H3(PurePower(3), [-1.0, 2.0])


def test_H4_examples():
    rep = check_H4(PurePower(3), 3)
    assert rep.holds and rep.constant == pytest.approx(1.0, rel=1e-14)
    rep = check_H4(PowerSum(5, 3, 1.0), 3)
    assert not rep.holds and rep.constant == np.inf
    rep = check_H4(PowerSum(3, 3, 1.0), 3)
    assert rep.holds and rep.constant == pytest.approx(2.0, rel=1e-14)
    assert rep.certified == "grid"


def test_H5_examples():
    for p in (1.5, 2, 3, 4.5):
        rep = check_H5(PurePower(p))
        assert rep.holds and rep.constant == pytest.approx(p + 1, rel=1e-13)
    rep = check_H5(PowerSum(5, 3, 1.0))
    assert rep.holds and rep.constant == pytest.approx(4.0, abs=1e-3)
    assert rep.witness_s == pytest.approx(1e-6)
    rep = check_H5(Linear())
    assert not rep.holds and rep.constant == pytest.approx(2.0, rel=1e-14)


def test_H5_degenerate():
    with pytest.raises(DegenerateNonlinearityError):
        check_H5(PurePower(3), [1e-200, 1.0])


def test_derived_growth_properties():
    rep = check_remark1(PurePower(3), 3)
    assert rep.holds and rep.parts["delta"] == 0.5
    # (a) holds with equality for a pure power
    assert abs(rep.parts["C_a"] - 1.0) < 1e-14
    assert check_remark1(PowerSum(5, 3, 1.0), 5).holds
    with pytest.raises(PreconditionError):
        check_remark1(Linear(), 1.5)


@pytest.mark.parametrize("nl", NONLINEARITIES)
@given(s=st.floats(1e-3, 1e3))
def test_closed_form_growth_ratio(nl, s):
    assert nl.sg_over_G(s) == pytest.approx(s * nl.g(s) / nl.G(s), rel=1e-13)

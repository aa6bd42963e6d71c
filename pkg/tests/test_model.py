import math
import warnings

import pytest
from hypothesis import given, strategies as st

from radnodal import model
from radnodal.errors import DimensionError, ExponentError, ModelError


def test_subcritical_range():
    assert model.subcritical_range(3) == (1, 5)
    assert model.subcritical_range(4) == (1, 3)
    with pytest.raises(DimensionError):
        model.subcritical_range(2)


@pytest.mark.parametrize("N,p,sig,nsig", [(3, 3, 4 / 3, 4), (4, 2, 1.5, 6), (3, 2, 2, 6)])
def test_sigma_examples(N, p, sig, nsig):
    assert model.sigma(N, p) == pytest.approx(sig, rel=1e-15)
    assert model.n_sigma(N, p) == pytest.approx(nsig, rel=1e-15)


def test_sigma_rejects_bad_exponent():
    with pytest.raises(ExponentError):
        model.sigma(3, 1.0)


@given(st.integers(3, 50), st.floats(1.01, 20))
def test_n_sigma_independent_of_dimension(N, p):
    assert N * model.sigma(N, p) == pytest.approx(2 * (p + 1) / (p - 1), rel=1e-13)
    assert model.n_sigma(N, p) == model.n_sigma(3, p)


@given(st.floats(1.0001, 100))
def test_delta_in_unit_interval(p):
    d = model.PurePower(p).delta
    assert 0 < d < 1
    assert d == pytest.approx((p - 1) / (p + 1))


@pytest.mark.parametrize("build", [
    lambda: model.Ball(2),
    lambda: model.Annulus(3, 0.0, 1.0),
    lambda: model.Annulus(3, 2.0, 1.0),
    lambda: model.ConstantWeight(0.0),
    lambda: model.PowerLawWeight(-1.0, 2.0),
    lambda: model.ExponentialWeight(0.0, 1.0),
    lambda: model.PurePower(1.0),
    lambda: model.PowerSum(3, 4, 1.0),
    lambda: model.PowerSum(3, 2, -1.0),
])
def test_invalid_construction_rejected(build):
    with pytest.raises(ModelError):
        build()


def test_singular_weight_rejected_on_ball():
    with pytest.raises(ModelError):
        model.ProblemSpec(model.Ball(3), model.PowerLawWeight(1.0, -2.0), model.PurePower(3))
    # fine on an annulus, and alpha = 0 is fine on a ball
    model.ProblemSpec(model.Annulus(3, 1, 2), model.PowerLawWeight(1.0, -2.0), model.PurePower(3))
    model.ProblemSpec(model.Ball(3), model.PowerLawWeight(1.0, 0.0), model.PurePower(3))


def test_supercritical_is_a_warning():
    with pytest.warns(model.SupercriticalWarning):
        prob = model.ProblemSpec(model.Ball(3), model.ConstantWeight(), model.PurePower(5))
    assert not prob.is_subcritical
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert model.ProblemSpec(model.Ball(3), model.ConstantWeight(), model.PurePower(3)).is_subcritical


def test_domain_interval():
    assert model.ProblemSpec(model.Ball(3), model.ConstantWeight(), model.PurePower(3)).interval == (0.0, 1.0)
    prob = model.ProblemSpec(model.Annulus(4, 0.5, 2.0), model.ConstantWeight(), model.PurePower(2))
    assert prob.interval == (0.5, 2.0) and prob.N == 4


def test_types_are_immutable():
    w = model.ConstantWeight(2.0)
    with pytest.raises(Exception):
        w.c = 3.0


@given(st.floats(-3, 3), st.floats(0.1, 5))
def test_closed_form_derivatives_match_finite_differences(beta, r):
    w = model.ExponentialWeight(1.5, beta)
    h = 1e-5 * max(1, r)
    fd = (w.K(r + h) - w.K(r - h)) / (2 * h)
    assert w.dK(r) == pytest.approx(fd, rel=1e-7, abs=1e-9)
    fd2 = (w.dK(r + h) - w.dK(r - h)) / (2 * h)
    assert w.d2K(r) == pytest.approx(fd2, rel=1e-7, abs=1e-9)
    assert math.isclose(w.V(r), r * w.dK(r) / w.K(r), rel_tol=1e-12, abs_tol=1e-14)

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from globalcurve.errors import NonFinite, ValidationError
from globalcurve.ivp import SensitivityMode, integrate
from globalcurve.model import ProblemSpec, make_problem, poly_antiderivative, poly_eval

LAM1 = math.pi ** 2 / 4


def test_cosine_solution():
    spec = make_problem([0, 1], [1])
    tr = integrate(spec, 1.0, LAM1, 0.0, steps=2048)
    assert abs(tr.u1) < 1e-8
    assert tr.up1 == pytest.approx(-math.pi / 2, abs=1e-6)
    np.testing.assert_allclose(tr.u, np.cos(math.pi * tr.xs / 2), atol=1e-10)


def test_pure_forcing_is_exact():
    spec = make_problem([], [1])
    tr = integrate(spec, 1.0, 3.0, 2.0)
    assert tr.u1 == pytest.approx(2.0, abs=1e-13)
    np.testing.assert_allclose(tr.u, 1.0 + tr.xs ** 2, atol=1e-13)


def test_lambda_sensitivity_closed_form():
    spec = make_problem([0, 1], [1])
    tr = integrate(spec, 1.0, LAM1, 0.0, SensitivityMode.LAMBDA)
    assert tr.s1 == pytest.approx(-1 / math.pi, abs=1e-6)


def test_trajectory_layout():
    spec = make_problem([0, 1, -1], [1, 0, 1])
    tr = integrate(spec, 0.7, 5.0, 0.3, SensitivityMode.MU, steps=64)
    assert tr.xs[0] == 0.0 and tr.xs[-1] == 1.0
    assert np.all(np.diff(tr.xs) > 0)
    assert len(tr.xs) == len(tr.u) == len(tr.s) == 65
    assert tr.u[0] == 0.7 and tr.up[0] == 0.0 and tr.s[0] == 0.0 and tr.sp[0] == 0.0
    assert tr.min_u == tr.u.min()


def test_no_sensitivity_arrays_when_mode_none():
    tr = integrate(make_problem([0, 1], [1]), 1.0, 1.0, 0.0)
    assert tr.s.size == 0 and math.isnan(tr.s1)


def test_reflection_is_even():
    tr = integrate(make_problem([0, 1, -1], [1]), 0.5, 6.0, 0.1, steps=32)
    x, u, up = tr.reflected()
    assert x[0] == -1.0 and x[-1] == 1.0 and len(x) == 65
    np.testing.assert_array_equal(u, u[::-1])
    np.testing.assert_array_equal(up, -up[::-1])


def test_blow_up_raises_nonfinite():
    spec = make_problem([0, 0, 0, -1], [1])
    with pytest.raises(NonFinite):
        integrate(spec, 10.0, 100.0, 0.0)


def test_requires_validated_problem():
    with pytest.raises(ValidationError):
        integrate(ProblemSpec.from_coeffs([0, 1], [1]), 1.0, 1.0, 0.0)


def test_min_steps():
    with pytest.raises(ValueError):
        integrate(make_problem([0, 1], [1]), 1.0, 1.0, 0.0, steps=8)


def _fd(spec, a, lam, mu, which, h=1e-5):
    if which == "lambda":
        plus, minus = integrate(spec, a, lam + h, mu).u1, integrate(spec, a, lam - h, mu).u1
    else:
        plus, minus = integrate(spec, a, lam, mu + h).u1, integrate(spec, a, lam, mu - h).u1
    return (plus - minus) / (2 * h)


problems = st.tuples(
    st.lists(st.floats(-5, 5), min_size=1, max_size=4),   # f, degree <= 3
    st.floats(0.5, 5), st.floats(0, 5),                    # g = c0 + c2 x^2
    st.floats(0.1, 2), st.floats(0.1, 5), st.floats(-3, 3),
)


@settings(max_examples=60, deadline=None)
@given(problems)
def test_sensitivities_match_finite_differences(prob):
    f, c0, c2, a, lam, mu = prob
    spec = make_problem(f, [c0, 0, c2])
    try:
        sl = integrate(spec, a, lam, mu, SensitivityMode.LAMBDA).s1
        sm = integrate(spec, a, lam, mu, SensitivityMode.MU).s1
        fl, fm = _fd(spec, a, lam, mu, "lambda"), _fd(spec, a, lam, mu, "mu")
    except NonFinite:
        assume(False)
    # relative comparison is meaningless near a zero of the sensitivity
    # or once the solution has grown to round-off-dominated magnitudes
    assume(min(abs(sl), abs(sm)) > 1e-3 and max(abs(sl), abs(sm)) < 1e6)
    assert abs(sl - fl) / abs(fl) < 1e-5
    assert abs(sm - fm) / abs(fm) < 1e-5


def test_fourth_order_convergence():
    spec = make_problem([0, 1], [1])
    ref = integrate(spec, 1.0, LAM1, 0.0, steps=16 * 64).u1
    e32 = abs(integrate(spec, 1.0, LAM1, 0.0, steps=32).u1 - ref)
    e64 = abs(integrate(spec, 1.0, LAM1, 0.0, steps=64).u1 - ref)
    order = math.log2(e32 / e64)
    assert 3.5 <= order <= 4.5


@pytest.mark.parametrize("f, lam, mu, c, alpha", [
    ([0, 1, -1], 12.0, 0.5, 1.0, 0.6),
    ([0, 10, -2], 2.0, 1.5, 2.0, 3.0),
    ([1, 0, 0, 1], 0.5, -1.0, 0.5, 0.2),
])
def test_energy_is_conserved_for_constant_g(f, lam, mu, c, alpha):
    spec = make_problem(f, [c])
    tr = integrate(spec, alpha, lam, mu, steps=2048)
    F = poly_antiderivative(spec.f)
    energy = 0.5 * tr.up ** 2 + lam * poly_eval(F, tr.u) - mu * c * tr.u
    assert np.max(np.abs(energy - energy[0])) < 1e-8

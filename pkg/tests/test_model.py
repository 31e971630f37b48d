import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from globalcurve.errors import ValidationError
from globalcurve.model import (
    COND_EVEN, COND_MONOTONE, Polynomial, ProblemSpec, make_problem, poly_antiderivative,
    poly_derivative, poly_eval, validate_problem,
)

coeff = st.floats(-10, 10, allow_nan=False)
small_poly = st.lists(coeff, min_size=0, max_size=6).map(Polynomial)


@pytest.mark.parametrize("c, x, expected", [
    ([0, 10, -2], 1.0, 8.0),
    ([1, 0, 0.2], 0.5, 1.05),
    ([], 3.7, 0.0),
])
def test_poly_eval_examples(c, x, expected):
    assert poly_eval(Polynomial(c), x) == pytest.approx(expected, abs=1e-15)


def test_poly_eval_vectorized():
    p = Polynomial([1, 2, 3])
    xs = np.array([-1.0, 0.0, 2.0])
    np.testing.assert_allclose(p(xs), [2.0, 1.0, 17.0])


@pytest.mark.parametrize("c, expected", [
    ([0, 1, -1], [1, -2]),
    ([1, 0, 0.2], [0, 0.4]),
    ([5], []),
    ([], []),
])
def test_poly_derivative_examples(c, expected):
    assert poly_derivative(Polynomial(c)).coeffs == pytest.approx(tuple(expected))


@pytest.mark.parametrize("c, expected", [
    ([0, 1, -1], [0, 0, 1 / 2, -1 / 3]),
    ([], []),
    ([1], [0, 1]),
])
def test_poly_antiderivative_examples(c, expected):
    assert poly_antiderivative(Polynomial(c)).coeffs == pytest.approx(tuple(expected))


@given(st.lists(coeff, min_size=1, max_size=6), st.floats(-1, 1))
def test_trailing_zeros_do_not_matter(c, x):
    assert poly_eval(Polynomial(c + [0.0, 0.0]), x) == poly_eval(Polynomial(c), x)


@settings(max_examples=200)
@given(small_poly, st.floats(-1, 1))
def test_derivative_matches_central_difference(p, x):
    h = 1e-6
    fd = (poly_eval(p, x + h) - poly_eval(p, x - h)) / (2 * h)
    exact = poly_eval(poly_derivative(p), x)
    # round-off in the difference quotient is ~ eps * max|p| / h
    scale = sum(abs(c) for c in p.coeffs)
    assert abs(exact - fd) <= 1e-6 * abs(exact) + 1e-9 * scale


@given(small_poly, st.floats(-1, 1))
def test_antiderivative_then_derivative_roundtrip(p, x):
    back = poly_derivative(poly_antiderivative(p))
    assert poly_eval(back, x) == pytest.approx(poly_eval(p, x), rel=1e-12, abs=1e-12)


def test_degree():
    assert Polynomial([1, 2, 0, 0]).degree == 1
    assert Polynomial([]).degree == -1
    assert Polynomial([0.0]).degree == -1


def test_validate_accepts_one_plus_x2():
    spec = ProblemSpec.from_coeffs([0, 4, -1], [1, 0, 1])
    report = validate_problem(spec)
    assert report.ok and spec.validated
    assert all(c.passed for c in report.conditions)


def test_validate_rejects_odd_g():
    spec = ProblemSpec.from_coeffs([0, 1], [0, 1])
    report = validate_problem(spec)
    assert not report.ok and not spec.validated
    assert [c.name for c in report.failed][0] == COND_EVEN


def test_validate_rejects_decreasing_g():
    spec = ProblemSpec.from_coeffs([0, 1], [1, 0, -1])
    report = validate_problem(spec)
    assert [c.name for c in report.failed] == [COND_MONOTONE]


def test_validate_zero_g_fails_positivity():
    report = validate_problem(ProblemSpec.from_coeffs([0, 1], []))
    assert not report.ok


def test_validate_grid_size_precondition():
    with pytest.raises(ValueError):
        validate_problem(ProblemSpec.from_coeffs([0, 1], [1]), grid_size=1)


def test_make_problem_raises_with_report():
    with pytest.raises(ValidationError) as info:
        make_problem([0, 1], [0, 1])
    assert info.value.report is not None


@given(st.lists(coeff, min_size=1, max_size=4), st.floats(-1, 1))
def test_validated_g_is_even(even_coeffs, x):
    c = []
    for a in even_coeffs:
        c += [abs(a), 0.0]
    c[0] = abs(c[0]) + 0.1
    spec = ProblemSpec.from_coeffs([0, 1], c)
    if validate_problem(spec).ok:
        assert poly_eval(spec.g, x) == poly_eval(spec.g, -x)

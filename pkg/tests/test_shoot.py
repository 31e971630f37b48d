import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from globalcurve.errors import DerivativeVanished, NoConvergence, ValidationError
from globalcurve.ivp import integrate
from globalcurve.model import ProblemSpec, make_problem
from globalcurve.shoot import (
    POS_TOL, NewtonConfig, SolvePoint, classify_positive, find_positive_solution,
    scan_for_root, scan_roots, shooting_residual, solve_lambda, solve_mu,
)

LOGISTIC = ([0, 1, -1], [1])
FIG1 = ([0, 10, -2], [1, 0, 0.2])

# frozen from tests/oracles.py (time map, DOP853 + bisection)
LOGISTIC_LAM_AT_HALF = 4.31905673708336
FIG1_LAM_ALPHA4 = 0.9805731454671034
MU_ORACLE = 0.44986358346068367


def test_linear_eigenvalue():
    spec = make_problem([0, 1], [1])
    p = solve_lambda(spec, 0.3, 0.0, 2.0)
    assert p.lam == pytest.approx(math.pi ** 2 / 4, abs=1e-8)
    assert p.positive


def test_logistic_against_time_map():
    spec = make_problem(*LOGISTIC)
    p = solve_lambda(spec, 0.5, 0.0, 4.0)
    assert p.lam == pytest.approx(LOGISTIC_LAM_AT_HALF, abs=1e-8)


def test_fig1_lambda_against_bisection():
    spec = make_problem(*FIG1)
    p = find_positive_solution(spec, 4.0, "lambda", 1.5, 0.05, 20, 400)
    assert p.lam == pytest.approx(FIG1_LAM_ALPHA4, abs=1e-8)


def test_pure_forcing_mu():
    spec = make_problem([], [1])
    p = solve_mu(spec, 0.7, 1.0, 0.0)
    assert p.mu == pytest.approx(-1.4, abs=1e-12)
    assert p.iters <= 2


def test_mu_against_bisection():
    spec = make_problem([0, 4, -1], [1, 0, 1])
    p = find_positive_solution(spec, 1.0, "mu", 1.0, -5, 5, 200)
    assert p.mu == pytest.approx(MU_ORACLE, abs=1e-8)


def test_residual_contract():
    spec = make_problem(*LOGISTIC)
    cfg = NewtonConfig(tol_residual=1e-12)
    p = solve_lambda(spec, 0.4, 0.1, 5.0, cfg)
    assert p.residual <= 1e-12
    assert abs(integrate(spec, p.alpha, p.lam, p.mu).u1) == pytest.approx(p.residual, abs=1e-15)


def test_unique_positive_root_from_many_guesses():
    spec = make_problem(*LOGISTIC)
    found = set()
    for g in np.geomspace(0.5, 50, 20):
        try:
            p = solve_lambda(spec, 0.5, 0.1, g)
        except (NoConvergence, DerivativeVanished):
            continue
        if p.positive:
            found.add(round(p.lam, 8))
    assert len(found) == 1


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 3), st.floats(0.5, 3), st.floats(0, 3),
       st.floats(0.1, 2), st.floats(0.1, 2), st.floats(-5, 5))
def test_affine_in_free_parameter_converges_fast(c0, g0, g2, alpha, lam, guess):
    # f constant: u(1) is affine in mu, so Newton is exact after one step
    spec = make_problem([c0], [g0, 0, g2])
    p = solve_mu(spec, alpha, lam, guess)
    assert p.iters <= 2
    assert p.residual <= 1e-10


def test_no_convergence():
    spec = make_problem(*LOGISTIC)
    with pytest.raises(NoConvergence) as exc:
        solve_lambda(spec, 0.5, 0.0, 3.0, NewtonConfig(max_iters=1, tol_residual=1e-14))
    assert exc.value.residual > 0


def test_derivative_vanishes_at_resonance():
    # at lam = pi^2, u = cos(pi x) gives u(1) = -1 while the lambda sensitivity
    # -x sin(pi x) / (2 pi) vanishes at x = 1
    spec = make_problem([0, 1], [1])
    with pytest.raises(DerivativeVanished):
        solve_lambda(spec, 1.0, 0.0, math.pi ** 2, NewtonConfig(min_derivative=1e-6))


def test_rejects_unvalidated_and_bad_alpha():
    with pytest.raises(ValidationError):
        solve_lambda(ProblemSpec.from_coeffs([0, 1], [1]), 0.5, 0.0, 2.0)
    with pytest.raises(ValueError):
        solve_lambda(make_problem([0, 1], [1]), 0.0, 0.0, 2.0)


def test_classification():
    assert classify_positive(0.0, -1.0)
    assert not classify_positive(-1e-3, -1.0)
    assert not classify_positive(0.0, 0.0)
    pt = SolvePoint(1.0, 1.0, 0.0, up1=-POS_TOL / 2, min_u=0.0, residual=0.0, iters=0)
    assert pt.at_positivity_loss and not pt.positive
    assert pt.param("lambda") == 1.0 and pt.param("mu") == 0.0


def test_scanning_helpers():
    spec = make_problem([0, 1], [1])
    roots = scan_roots(spec, 1.0, "lambda", 0.0, 0.5, 30, 300)
    # the first two even eigenvalues, (pi/2)^2 and (3 pi/2)^2
    assert roots[0] == pytest.approx(math.pi ** 2 / 4, abs=0.1)
    assert roots[1] == pytest.approx(9 * math.pi ** 2 / 4, abs=0.1)
    assert scan_for_root(spec, 1.0, "lambda", 0.0, 0.5, 30, 300) == roots[0]
    with pytest.raises(ValueError):
        scan_for_root(spec, 1.0, "lambda", 0.0, 0.5, 1.0, 10)
    assert math.isnan(shooting_residual(make_problem([0, 0, 0, -1], [1]), 10.0, 100.0, 0.0))

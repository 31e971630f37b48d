"""Numerical checks of the structural properties of the solution curves.

Each check returns a ``CheckResult``; ``run_all`` executes the suite used by
the ``verify`` CLI command.  Problems and tolerances are fixed here so that a
run is reproducible.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .curve import ContinuationConfig, EventKind, trace_lambda_curve, trace_mu_curve
from .errors import SolverError
from .ivp import SensitivityMode, Trajectory, integrate
from .logistic import eigenvalue, lambda_bar, mu_bar
from .model import make_problem
from .shoot import find_positive_solution, solve_lambda, solve_mu


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def integral_form_u1(traj: Trajectory, f, g, lam: float, mu: float) -> float:
    """u(1) from the integral form of the IVP, trapezoid rule on the stored samples."""
    t = traj.xs
    w = 1.0 - t
    return (traj.alpha - lam * np.trapezoid(w * f(traj.u), t)
            + mu * np.trapezoid(w * g(t), t))


def check_eigenvalue_limit() -> tuple[bool, str]:
    lb0 = lambda_bar(1e-6)
    grid = np.linspace(0.0, 0.74, 102)[1:-1]
    worst = min(lambda_bar(a) for a in grid)
    ok = abs(lb0 - math.pi ** 2) < 1e-4 and worst > math.pi ** 2
    return ok, f"lambda_bar(1e-6) - pi^2 = {lb0 - math.pi**2:.3e}; min over grid = {worst:.6f}"


def check_linear_exactness() -> tuple[bool, str]:
    spec = make_problem([0, 1], [1])
    errs = [abs(solve_lambda(spec, a, 0.0, g).lam - eigenvalue(1))
            for a in (0.1, 0.5, 1.0) for g in (1.0, 5.0)]
    c = trace_lambda_curve(spec, 0.0, 2.0, ContinuationConfig(0.1, 1.0, 0.05))
    ok = max(errs) < 1e-8 and not c.turning_points
    return ok, f"max |lambda - pi^2/4| = {max(errs):.2e}; turning points = {len(c.turning_points)}"


def check_sensitivities(n: int = 10, seed: int = 7) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst, done = 0.0, 0
    while done < n:
        f = rng.uniform(-5, 5, rng.integers(1, 5))
        g = [rng.uniform(0.5, 2.0), 0.0, rng.uniform(0.0, 2.0)]
        spec = make_problem(f, g)
        a, lam, mu = rng.uniform(0.1, 1.0), rng.uniform(0.1, 3.0), rng.uniform(-2.0, 2.0)
        h = 1e-5
        try:
            sl = integrate(spec, a, lam, mu, SensitivityMode.LAMBDA).s1
            sm = integrate(spec, a, lam, mu, SensitivityMode.MU).s1
            fl = (integrate(spec, a, lam + h, mu).u1 - integrate(spec, a, lam - h, mu).u1) / (2 * h)
            fm = (integrate(spec, a, lam, mu + h).u1 - integrate(spec, a, lam, mu - h).u1) / (2 * h)
        except SolverError:
            continue
        if min(abs(sl), abs(sm)) < 1e-3 or max(abs(sl), abs(sm)) > 1e6:
            continue
        worst = max(worst, abs(sl - fl) / abs(fl), abs(sm - fm) / abs(fm))
        done += 1
    return worst < 1e-5, f"worst relative error {worst:.2e} over {n} problems"


def check_envelope_shooting() -> tuple[bool, str]:
    spec = make_problem([0, 1, -1], [1])
    worst_mu, worst_a = 0.0, 0.0
    for a in (0.2, 0.4, 0.6):
        lb = lambda_bar(a)
        mb = mu_bar(a, lb)
        start = find_positive_solution(spec, 0.95, "mu", lb, -20, 20, 400)
        c = trace_mu_curve(spec, lb, start.mu,
                           ContinuationConfig(0.95, 0.01, 0.01, stop_on_positivity_loss=True))
        ev = c.events_of(EventKind.POSITIVITY_LOSS)
        if not ev:
            return False, f"no positivity loss found at lambda = {lb}"
        worst_mu = max(worst_mu, abs(ev[0].param_value - mb) / mb)
        worst_a = max(worst_a, abs(ev[0].alpha - a))
    return worst_mu < 1e-4 and worst_a < 1e-4, f"rel mu error {worst_mu:.2e}, alpha error {worst_a:.2e}"


def check_uniqueness() -> tuple[bool, str]:
    spec = make_problem([0, 1, -1], [1])
    found = []
    for g in np.geomspace(0.5, 50, 20):
        try:
            p = solve_lambda(spec, 0.5, 0.1, g)
        except SolverError:
            continue
        if p.positive:
            found.append(p.lam)
    spread = max(found) - min(found) if found else float("nan")
    return bool(found) and spread < 1e-7, f"{len(found)} positive roots, spread {spread:.2e}"


def _fig1_curves():
    spec = make_problem([0, 10, -2], [1, 0, 0.2])
    curves = {}
    for mu in (0.9, 1.5, 2.2):
        start = find_positive_solution(spec, 4.8, "lambda", mu, 0.05, 20, 400)
        curves[mu] = trace_lambda_curve(
            spec, mu, start.lam, ContinuationConfig(4.8, 0.05, 0.02, stop_on_positivity_loss=True))
    return curves


def check_non_intersection() -> tuple[bool, str]:
    curves = _fig1_curves()
    turns = {mu: len(c.turning_points) for mu, c in curves.items()}
    ok = all(t == 1 for t in turns.values())
    mus = sorted(curves)
    for i in range(len(mus)):
        for j in range(i + 1, len(mus)):
            a, b = curves[mus[i]], curves[mus[j]]
            lo, hi = max(a.alphas[0], b.alphas[0]), min(a.alphas[-1], b.alphas[-1])
            grid = a.alphas[(a.alphas >= lo) & (a.alphas <= hi)]
            diff = np.interp(grid, a.alphas, a.params) - np.interp(grid, b.alphas, b.params)
            if not (np.all(diff > 0) or np.all(diff < 0)):
                ok = False
    return ok, f"turning points per curve {turns}"


def check_turn_direction() -> tuple[bool, str]:
    spec = make_problem([0, 1, -1], [1])
    notes = []
    ok = True
    for mu in (0.05, 0.2):
        start = find_positive_solution(spec, 0.9, "lambda", mu, 0.5, 100, 400)
        c = trace_lambda_curve(spec, mu, start.lam,
                               ContinuationConfig(0.9, 0.01, 0.01, stop_on_positivity_loss=True))
        tps = c.turning_points
        ok &= len(tps) == 1 and "minimum" in tps[0].detail
        notes.append(f"mu={mu}: {len(tps)} turn(s)")
    for lam in (4.0, 12.0):
        start = find_positive_solution(spec, 0.9, "mu", lam, -20, 20, 400)
        c = trace_mu_curve(spec, lam, start.mu,
                           ContinuationConfig(0.9, 0.01, 0.01, stop_on_positivity_loss=True))
        tps = c.turning_points
        ok &= len(tps) == 1 and "maximum" in tps[0].detail
        notes.append(f"lambda={lam}: {len(tps)} turn(s)")
    return ok, "; ".join(notes)


def check_shared_turning_points() -> tuple[bool, str]:
    spec = make_problem([0, 1, -1], [1])
    start = find_positive_solution(spec, 0.9, "lambda", 0.2, 0.5, 100, 400)
    c = trace_lambda_curve(spec, 0.2, start.lam,
                           ContinuationConfig(0.9, 0.05, 0.01, stop_on_positivity_loss=True))
    tp = c.turning_points[0]
    start = find_positive_solution(spec, 0.9, "mu", tp.param_value, -20, 20, 400)
    c2 = trace_mu_curve(spec, tp.param_value, start.mu,
                        ContinuationConfig(0.9, 0.05, 0.01, stop_on_positivity_loss=True))
    tp2 = c2.turning_points[0]
    dmu, da = abs(tp2.param_value - 0.2), abs(tp2.alpha - tp.alpha)
    return dmu < 1e-4 and da < 1e-4, f"|mu - 0.2| = {dmu:.2e}, |delta alpha| = {da:.2e}"


def check_stocking() -> tuple[bool, str]:
    spec = make_problem([0, 1, -1], [1])
    start = find_positive_solution(spec, 0.02, "mu", 6.0, -20, 20, 400)
    c = trace_mu_curve(spec, 6.0, start.mu, ContinuationConfig(0.02, 1.6, 0.01))
    # mu at which u(0) = 1; alpha is the curve parameter, so this is a direct solve
    mu0 = solve_mu(spec, 1.0, 6.0, float(np.interp(1.0, c.alphas, c.params))).mu
    negative = [p for p in c.points if p.mu < 0]
    no_turns = not [e for e in c.turning_points if e.param_value < 0]
    above = all(p.alpha > 1.0 for p in c.points if p.mu < mu0)
    ok = mu0 < 0 and no_turns and above and len(negative) > 10
    return ok, f"mu0 = {mu0:.6f}; {len(negative)} points with mu < 0"


def check_integral_form(n: int = 10, seed: int = 3) -> tuple[bool, str]:
    spec = make_problem([0, 10, -2], [1, 0, 0.2])
    start = find_positive_solution(spec, 4.8, "lambda", 1.5, 0.05, 20, 400)
    c = trace_lambda_curve(spec, 1.5, start.lam,
                           ContinuationConfig(4.8, 0.4, 0.05, keep_profiles=True))
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in rng.choice(len(c.points), size=min(n, len(c.points)), replace=False):
        p = c.points[k]
        u1 = integral_form_u1(p.profile, spec.f, spec.g, p.lam, p.mu)
        worst = max(worst, abs(u1 - p.profile.u1))
    return worst < 1e-6, f"max |u(1) - integral form| = {worst:.2e}"


CHECKS: dict[str, Callable[[], tuple[bool, str]]] = {
    "eigenvalue-limit": check_eigenvalue_limit,
    "linear-exactness": check_linear_exactness,
    "sensitivities": check_sensitivities,
    "global-parameter-uniqueness": check_uniqueness,
    "non-intersection": check_non_intersection,
    "turn-direction": check_turn_direction,
    "shared-turning-points": check_shared_turning_points,
    "envelope-vs-shooting": check_envelope_shooting,
    "stocking-no-turns": check_stocking,
    "integral-form": check_integral_form,
}


def run_all(names=None) -> list[CheckResult]:
    out = []
    for name in names or CHECKS:
        t0 = time.perf_counter()
        try:
            ok, detail = CHECKS[name]()
        except Exception as exc:  # a crashing check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, bool(ok), detail, time.perf_counter() - t0))
    return out

"""Newton shooting in the global parameter alpha = u(0).

For fixed alpha the boundary condition u(1) = 0 becomes a scalar equation in
the free parameter (lam with mu fixed, or mu with lam fixed).  The residual is
the terminal value u(1) of the shooting IVP and its derivative is the terminal
value of the matching sensitivity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DerivativeVanished, NoConvergence, NonFinite
from .ivp import DEFAULT_STEPS, SensitivityMode, Trajectory, integrate
from .model import ProblemSpec, require_validated

POS_TOL = 1e-9


@dataclass(frozen=True)
class NewtonConfig:
    tol_residual: float = 1e-10
    max_iters: int = 50
    steps: int = DEFAULT_STEPS
    min_derivative: float = 1e-14

    def __post_init__(self):
        if not self.tol_residual > 0:
            raise ValueError("tol_residual must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


@dataclass(frozen=True)
class SolvePoint:
    alpha: float
    lam: float
    mu: float
    up1: float
    min_u: float
    residual: float
    iters: int
    profile: Optional[Trajectory] = None

    @property
    def positive(self) -> bool:
        return classify_positive(self.min_u, self.up1)

    @property
    def at_positivity_loss(self) -> bool:
        """Endpoint slope inside the tolerance band around zero."""
        return abs(self.up1) <= POS_TOL

    def param(self, which: str) -> float:
        return self.lam if which == "lambda" else self.mu


def classify_positive(min_u: float, up1: float, pos_tol: float = POS_TOL) -> bool:
    """Positive solutions have u > 0 inside and a strictly negative slope at x = 1."""
    return min_u > -pos_tol and up1 < -pos_tol


def _newton(spec, alpha, fixed, guess, cfg, mode):
    require_validated(spec)
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha!r}")
    name = "lambda" if mode == SensitivityMode.LAMBDA else "mu"

    def run(p):
        lam, mu = (p, fixed) if mode == SensitivityMode.LAMBDA else (fixed, p)
        return integrate(spec, alpha, lam, mu, mode, cfg.steps)

    p = float(guess)
    traj = run(p)
    iters = 0
    while abs(traj.u1) > cfg.tol_residual:
        if iters >= cfg.max_iters:
            raise NoConvergence(
                f"Newton for {name} at alpha={alpha!r} did not converge in "
                f"{cfg.max_iters} iterations (|u(1)| = {abs(traj.u1):.3e})",
                last_value=p, residual=abs(traj.u1))
        deriv = traj.s1
        if abs(deriv) < cfg.min_derivative:
            raise DerivativeVanished(
                f"d u(1)/d {name} = {deriv:.3e} at alpha={alpha!r}, {name}={p!r}",
                value=p, derivative=deriv)
        p = p - traj.u1 / deriv
        if not math.isfinite(p):
            raise NonFinite(f"Newton iterate for {name} is not finite")
        traj = run(p)
        iters += 1
    return p, traj, iters


def _point(alpha, lam, mu, traj, iters, keep_profile):
    return SolvePoint(
        alpha=float(alpha), lam=float(lam), mu=float(mu),
        up1=traj.up1, min_u=traj.min_u, residual=abs(traj.u1), iters=iters,
        profile=traj if keep_profile else None,
    )


def solve_lambda(spec: ProblemSpec, alpha: float, mu: float, lam_guess: float,
                 cfg: NewtonConfig = NewtonConfig(), keep_profile: bool = False) -> SolvePoint:
    """Find lam with u(1) = 0 for the IVP started at u(0) = alpha, mu fixed."""
    lam, traj, iters = _newton(spec, alpha, mu, lam_guess, cfg, SensitivityMode.LAMBDA)
    return _point(alpha, lam, mu, traj, iters, keep_profile)


def solve_mu(spec: ProblemSpec, alpha: float, lam: float, mu_guess: float,
             cfg: NewtonConfig = NewtonConfig(), keep_profile: bool = False) -> SolvePoint:
    """Find mu with u(1) = 0 for the IVP started at u(0) = alpha, lam fixed."""
    mu, traj, iters = _newton(spec, alpha, lam, mu_guess, cfg, SensitivityMode.MU)
    return _point(alpha, lam, mu, traj, iters, keep_profile)


def shooting_residual(spec: ProblemSpec, alpha: float, lam: float, mu: float,
                      steps: int = DEFAULT_STEPS) -> float:
    """u(1) of the shooting IVP; NaN if the integration blows up."""
    try:
        return integrate(spec, alpha, lam, mu, SensitivityMode.NONE, steps).u1
    except NonFinite:
        return float("nan")


def scan_roots(spec: ProblemSpec, alpha: float, which: str, fixed: float,
               lo: float, hi: float, num: int = 200, steps: int = DEFAULT_STEPS) -> list[float]:
    """Midpoints of every grid cell where u(1) changes sign as the free parameter varies."""
    grid = np.linspace(lo, hi, num)
    vals = []
    for p in grid:
        lam, mu = (p, fixed) if which == "lambda" else (fixed, p)
        vals.append(shooting_residual(spec, alpha, lam, mu, steps))
    return [0.5 * (grid[i] + grid[i + 1]) for i in range(num - 1)
            if math.isfinite(vals[i]) and math.isfinite(vals[i + 1]) and vals[i] * vals[i + 1] <= 0.0]


def scan_for_root(spec: ProblemSpec, alpha: float, which: str, fixed: float,
                  lo: float, hi: float, num: int = 200, steps: int = DEFAULT_STEPS) -> float:
    """Guess from the first sign change of u(1) over a uniform parameter grid.

    Raises ValueError if there is none.
    """
    roots = scan_roots(spec, alpha, which, fixed, lo, hi, num, steps)
    if not roots:
        raise ValueError(f"no sign change of u(1) for {which} in [{lo}, {hi}] at alpha={alpha}")
    return roots[0]


def find_positive_solution(spec: ProblemSpec, alpha: float, which: str, fixed: float,
                           lo: float, hi: float, num: int = 200,
                           cfg: NewtonConfig = NewtonConfig()) -> SolvePoint:
    """Scan for sign changes of u(1), polish each with Newton, return the first positive one."""
    solve = solve_lambda if which == "lambda" else solve_mu
    for guess in scan_roots(spec, alpha, which, fixed, lo, hi, num, cfg.steps):
        try:
            pt = solve(spec, alpha, fixed, guess, cfg)
        except (NoConvergence, DerivativeVanished, NonFinite):
            continue
        if pt.positive:
            return pt
    raise ValueError(f"no positive solution with {which} in [{lo}, {hi}] at alpha={alpha}")

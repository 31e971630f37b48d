"""Problem definition: polynomial nonlinearity f(u) and weight g(x).

The boundary value problem is

    u'' + lam * f(u) - mu * g(x) = 0,   -1 < x < 1,   u(-1) = u(1) = 0,

with g even, g(0) > 0 and x g'(x) >= 0.  Both f and g are polynomials given
by coefficient lists in increasing powers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ValidationError

DEFAULT_GRID_SIZE = 1001


@dataclass(frozen=True)
class Polynomial:
    """Polynomial with ``coeffs[k]`` the coefficient of ``x**k``."""

    coeffs: tuple[float, ...] = ()

    def __init__(self, coeffs: Sequence[float] = ()):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in coeffs))

    def __call__(self, x):
        return poly_eval(self, x)

    def __len__(self):
        return len(self.coeffs)

    @property
    def degree(self) -> int:
        """Degree ignoring trailing zeros; -1 for the zero polynomial."""
        nz = [k for k, c in enumerate(self.coeffs) if c != 0.0]
        return nz[-1] if nz else -1

    def derivative(self) -> "Polynomial":
        return poly_derivative(self)

    def antiderivative(self) -> "Polynomial":
        return poly_antiderivative(self)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=np.float64)


def poly_eval(p: Polynomial, x):
    """Horner evaluation; works elementwise on numpy arrays."""
    acc = 0.0 * x if isinstance(x, np.ndarray) else 0.0
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def poly_derivative(p: Polynomial) -> Polynomial:
    return Polynomial([k * c for k, c in enumerate(p.coeffs)][1:])


def poly_antiderivative(p: Polynomial) -> Polynomial:
    """Antiderivative vanishing at zero."""
    if not p.coeffs:
        return Polynomial()
    return Polynomial([0.0] + [c / (k + 1) for k, c in enumerate(p.coeffs)])


@dataclass
class ProblemSpec:
    f: Polynomial
    g: Polynomial
    validated: bool = False

    @classmethod
    def from_coeffs(cls, f: Sequence[float], g: Sequence[float]) -> "ProblemSpec":
        return cls(Polynomial(f), Polynomial(g))


@dataclass(frozen=True)
class ConditionResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    conditions: tuple[ConditionResult, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.conditions)

    @property
    def failed(self) -> list[ConditionResult]:
        return [c for c in self.conditions if not c.passed]

    def __str__(self):
        lines = []
        for c in self.conditions:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"[{mark}] {c.name}" + (f": {c.detail}" if c.detail else ""))
        return "\n".join(lines)


# Condition names double as user-facing diagnostics.
COND_EVEN = "g even: g(-x) = g(x)"
COND_POSITIVE = "g(0) > 0"
COND_MONOTONE = "x*g'(x) >= 0 on (-1, 1)"


def validate_problem(spec: ProblemSpec, grid_size: int = DEFAULT_GRID_SIZE) -> ValidationReport:
    """Check the structural conditions on g and set ``spec.validated``.

    Evenness is structural (odd coefficients exactly zero), ``g(0) > 0`` is
    exact, and ``x g'(x) >= 0`` is sampled on ``grid_size`` uniform points of
    (0, 1); the negative half follows from evenness.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    g = spec.g
    odd = [k for k, c in enumerate(g.coeffs) if k % 2 == 1 and c != 0.0]
    even = ConditionResult(
        COND_EVEN, not odd,
        "" if not odd else "nonzero odd-power coefficients at powers " + ", ".join(map(str, odd)),
    )
    g0 = g.coeffs[0] if g.coeffs else 0.0
    positive = ConditionResult(COND_POSITIVE, g0 > 0.0, f"g(0) = {g0!r}")

    # interior points of (0, 1)
    xs = np.linspace(0.0, 1.0, grid_size + 2)[1:-1]
    xdg = xs * poly_eval(poly_derivative(g), xs)
    worst = int(np.argmin(xdg))
    mono = ConditionResult(
        COND_MONOTONE, bool(xdg[worst] >= 0.0),
        "" if xdg[worst] >= 0.0 else f"x*g'(x) = {xdg[worst]:.6g} at x = {xs[worst]:.6g}",
    )
    report = ValidationReport((even, positive, mono))
    spec.validated = report.ok
    return report


def make_problem(f: Sequence[float], g: Sequence[float], grid_size: int = DEFAULT_GRID_SIZE) -> ProblemSpec:
    """Build and validate a problem, raising ValidationError on failure."""
    spec = ProblemSpec.from_coeffs(f, g)
    report = validate_problem(spec, grid_size)
    if not report.ok:
        names = "; ".join(c.name for c in report.failed)
        raise ValidationError(f"problem fails: {names}", report)
    return spec


def require_validated(spec: ProblemSpec) -> None:
    if not spec.validated:
        raise ValidationError("problem has not been validated (call validate_problem first)")

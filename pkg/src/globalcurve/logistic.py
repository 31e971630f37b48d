"""Closed forms for the logistic harvesting model u'' + lam u(1-u) - mu = 0.

Along the family of solutions with zero endpoint slope, u'(+-1) = 0, both
parameters are explicit functions of alpha = u(0) in (0, 3/4):

    lam_bar(alpha) = ( int_0^1 dv / sqrt(v (1-v) (1 - 2/3 alpha (1+v))) )^2
    mu_bar(alpha)  = lam_bar * (alpha/2 - alpha^2/3)

With v = sin(theta)^2 the integrand becomes 2 / sqrt(1 - 2/3 alpha (1 + sin^2))
on [0, pi/2], which is smooth, so composite Gauss-Legendre converges fast.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .errors import DomainError

GAUSS_ORDER = 16
DEFAULT_PANELS = 8
ALPHA_MAX = 0.75
# below this distance from 3/4 the integrand peaks sharply near theta = pi/2
NEAR_LIMIT_WARN = 0.02

LOGISTIC_F = (0.0, 1.0, -1.0)


def eigenvalue(n: int) -> float:
    """n-th Dirichlet eigenvalue of -u'' on (-1, 1)."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    return n * n * math.pi ** 2 / 4.0


@lru_cache(maxsize=None)
def _panel_rule(panels: int):
    nodes, weights = np.polynomial.legendre.leggauss(GAUSS_ORDER)
    edges = np.linspace(0.0, math.pi / 2, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    theta = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    return theta, w


def _check_alpha(alpha):
    if not (0.0 < alpha < ALPHA_MAX):
        raise DomainError(f"alpha must lie in (0, 3/4), got {alpha!r}")


def lambda_bar(alpha: float, panels: int = DEFAULT_PANELS) -> float:
    """lam at which the solution with u(0) = alpha has zero endpoint slope."""
    _check_alpha(alpha)
    if panels < 1:
        raise ValueError("panels must be positive")
    theta, w = _panel_rule(int(panels))
    s2 = np.sin(theta) ** 2
    integrand = 2.0 / np.sqrt(1.0 - (2.0 / 3.0) * alpha * (1.0 + s2))
    return float(np.dot(w, integrand)) ** 2


def mu_bar(alpha: float, lam_bar: float) -> float:
    return lam_bar * (alpha / 2.0 - alpha * alpha / 3.0)


@dataclass(frozen=True)
class EnvelopePoint:
    alpha: float
    lambda_bar: float
    mu_bar: float


def envelope(alpha_grid: Iterable[float], panels: int = DEFAULT_PANELS) -> list[EnvelopePoint]:
    grid = [float(a) for a in alpha_grid]
    for a in grid:
        _check_alpha(a)
    out = []
    for a in grid:
        lb = lambda_bar(a, panels)
        out.append(EnvelopePoint(a, lb, mu_bar(a, lb)))
    return out

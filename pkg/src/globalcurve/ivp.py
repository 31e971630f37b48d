"""Shooting IVP on [0, 1] with an optional parameter sensitivity.

State layout: (u, u', s, s') where s is du/dlam or du/dmu at fixed u(0).
All components are advanced with the same RK4 stages.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numba
import numpy as np

from .errors import NonFinite
from .model import ProblemSpec, require_validated

DEFAULT_STEPS = 2048
MIN_STEPS = 16


class SensitivityMode(enum.IntEnum):
    NONE = 0
    LAMBDA = 1
    MU = 2


@numba.njit(cache=True, inline="always")
def _horner(c, x):
    acc = 0.0
    for k in range(c.shape[0] - 1, -1, -1):
        acc = acc * x + c[k]
    return acc


@numba.njit(cache=True, inline="always")
def _rhs(fc, dfc, gc, lam, mu, mode, x, y0, y1, y2, y3):
    fu = _horner(fc, y0)
    gx = _horner(gc, x)
    d1 = -lam * fu + mu * gx
    if mode == 0:
        return y1, d1, 0.0, 0.0
    lin = -lam * _horner(dfc, y0) * y2
    if mode == 1:
        return y1, d1, y3, lin - fu
    return y1, d1, y3, lin + gx


@numba.njit(cache=True, nogil=True)
def _rk4(fc, dfc, gc, alpha, lam, mu, mode, steps):
    """Classical RK4; returns (states, index of first non-finite row or -1)."""
    h = 1.0 / steps
    out = np.zeros((steps + 1, 4))
    out[0, 0] = alpha
    y0, y1, y2, y3 = alpha, 0.0, 0.0, 0.0
    for i in range(steps):
        x = i * h
        a0, a1, a2, a3 = _rhs(fc, dfc, gc, lam, mu, mode, x, y0, y1, y2, y3)
        b0, b1, b2, b3 = _rhs(fc, dfc, gc, lam, mu, mode, x + 0.5 * h,
                              y0 + 0.5 * h * a0, y1 + 0.5 * h * a1,
                              y2 + 0.5 * h * a2, y3 + 0.5 * h * a3)
        c0, c1, c2, c3 = _rhs(fc, dfc, gc, lam, mu, mode, x + 0.5 * h,
                              y0 + 0.5 * h * b0, y1 + 0.5 * h * b1,
                              y2 + 0.5 * h * b2, y3 + 0.5 * h * b3)
        d0, d1, d2, d3 = _rhs(fc, dfc, gc, lam, mu, mode, x + h,
                              y0 + h * c0, y1 + h * c1, y2 + h * c2, y3 + h * c3)
        y0 += h / 6.0 * (a0 + 2.0 * b0 + 2.0 * c0 + d0)
        y1 += h / 6.0 * (a1 + 2.0 * b1 + 2.0 * c1 + d1)
        y2 += h / 6.0 * (a2 + 2.0 * b2 + 2.0 * c2 + d2)
        y3 += h / 6.0 * (a3 + 2.0 * b3 + 2.0 * c3 + d3)
        out[i + 1, 0] = y0
        out[i + 1, 1] = y1
        out[i + 1, 2] = y2
        out[i + 1, 3] = y3
        if not (np.isfinite(y0) and np.isfinite(y1) and np.isfinite(y2) and np.isfinite(y3)):
            return out, i + 1
    return out, -1


@dataclass(frozen=True)
class Trajectory:
    xs: np.ndarray
    u: np.ndarray
    up: np.ndarray
    s: np.ndarray
    sp: np.ndarray
    mode: SensitivityMode

    @property
    def u1(self) -> float:
        return float(self.u[-1])

    @property
    def up1(self) -> float:
        return float(self.up[-1])

    @property
    def s1(self) -> float:
        return float(self.s[-1]) if self.s.size else float("nan")

    @property
    def min_u(self) -> float:
        return float(self.u.min())

    @property
    def alpha(self) -> float:
        return float(self.u[0])

    def reflected(self):
        """Profile on [-1, 1] by even reflection: returns (x, u, u')."""
        x = np.concatenate([-self.xs[:0:-1], self.xs])
        u = np.concatenate([self.u[:0:-1], self.u])
        up = np.concatenate([-self.up[:0:-1], self.up])
        return x, u, up


def _coeff_arrays(spec: ProblemSpec):
    fc = spec.f.as_array()
    dfc = spec.f.derivative().as_array()
    gc = spec.g.as_array()
    return fc, dfc, gc


def integrate(spec: ProblemSpec, alpha: float, lam: float, mu: float,
              mode: SensitivityMode = SensitivityMode.NONE,
              steps: int = DEFAULT_STEPS) -> Trajectory:
    """Integrate u'' = -lam f(u) + mu g(x), u(0) = alpha, u'(0) = 0 on [0, 1].

    With ``mode`` LAMBDA or MU the variational equation for the derivative of
    u with respect to that parameter is carried along, started from zero data.

    Raises NonFinite if the state blows up before x = 1.
    """
    require_validated(spec)
    if steps < MIN_STEPS:
        raise ValueError(f"steps must be >= {MIN_STEPS}, got {steps}")
    mode = SensitivityMode(mode)
    fc, dfc, gc = _coeff_arrays(spec)
    out, bad = _rk4(fc, dfc, gc, float(alpha), float(lam), float(mu), int(mode), int(steps))
    if bad >= 0:
        raise NonFinite(
            f"solution blew up at x = {bad / steps:.4g} "
            f"(alpha={alpha!r}, lambda={lam!r}, mu={mu!r})", x=bad / steps)
    xs = np.linspace(0.0, 1.0, steps + 1)
    if mode == SensitivityMode.NONE:
        empty = np.empty(0)
        return Trajectory(xs, out[:, 0], out[:, 1], empty, empty, mode)
    return Trajectory(xs, out[:, 0], out[:, 1], out[:, 2], out[:, 3], mode)

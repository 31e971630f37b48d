"""Continuation of solution curves in the global parameter alpha = u(0).

A lambda-curve holds mu fixed and records lam(alpha); a mu-curve holds lam
fixed and records mu(alpha).  Since alpha determines the solution uniquely,
turning points in lam or mu are ordinary smooth extrema of a single-valued
function and need no arclength machinery.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import BadBracket, InitialSolveFailed, SolverError
from .model import ProblemSpec, require_validated
from .shoot import POS_TOL, NewtonConfig, SolvePoint, solve_lambda, solve_mu

log = logging.getLogger(__name__)

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
TURN_TOL = 1e-8
LOSS_TOL = 1e-10


class CurveKind(str, enum.Enum):
    LAMBDA = "lambda"
    MU = "mu"


class EventKind(str, enum.Enum):
    TURNING_POINT = "TurningPoint"
    POSITIVITY_LOSS = "PositivityLoss"
    CONTINUITY_BREAK = "ContinuityBreak"
    SOLVE_FAILURE = "SolveFailure"


@dataclass(frozen=True)
class CurveEvent:
    kind: EventKind
    alpha: float
    param_value: float
    detail: str = ""
    bracket: Optional[tuple[float, float]] = None


@dataclass(frozen=True)
class ContinuationConfig:
    alpha_start: float
    alpha_end: float
    alpha_step: float = 0.01
    newton: NewtonConfig = field(default_factory=NewtonConfig)
    max_step_halvings: int = 8
    keep_profiles: bool = False
    stop_on_positivity_loss: bool = False
    jump_guard: float = 1.0

    def __post_init__(self):
        if self.alpha_start == self.alpha_end:
            raise ValueError("alpha_start and alpha_end must differ")
        if self.alpha_step == 0:
            raise ValueError("alpha_step must be nonzero")
        if min(self.alpha_start, self.alpha_end) <= 0:
            raise ValueError("alpha range must lie in (0, inf)")

    @property
    def signed_step(self) -> float:
        return math.copysign(abs(self.alpha_step), self.alpha_end - self.alpha_start)


@dataclass
class Curve:
    kind: CurveKind
    fixed_value: float
    points: list[SolvePoint] = field(default_factory=list)
    events: list[CurveEvent] = field(default_factory=list)
    spec: Optional[ProblemSpec] = None
    newton: NewtonConfig = field(default_factory=NewtonConfig)

    @property
    def alphas(self) -> np.ndarray:
        return np.array([p.alpha for p in self.points])

    @property
    def params(self) -> np.ndarray:
        return np.array([self.param_of(p) for p in self.points])

    def param_of(self, p: SolvePoint) -> float:
        return p.lam if self.kind == CurveKind.LAMBDA else p.mu

    def events_of(self, kind: EventKind) -> list[CurveEvent]:
        return [e for e in self.events if e.kind == kind]

    @property
    def turning_points(self) -> list[CurveEvent]:
        return self.events_of(EventKind.TURNING_POINT)


def _solve(spec, kind, alpha, fixed, guess, newton, keep_profile=False):
    if kind == CurveKind.LAMBDA:
        return solve_lambda(spec, alpha, fixed, guess, newton, keep_profile)
    return solve_mu(spec, alpha, fixed, guess, newton, keep_profile)


def _param(kind, p):
    return p.lam if kind == CurveKind.LAMBDA else p.mu


class _Jump(Exception):
    pass


def _trace(spec, kind, fixed, init, cfg):
    require_validated(spec)
    newton = cfg.newton
    base = cfg.signed_step
    end = cfg.alpha_end
    forward = base > 0

    try:
        first = _solve(spec, kind, cfg.alpha_start, fixed, init, newton, cfg.keep_profiles)
    except SolverError as exc:
        raise InitialSolveFailed(
            f"no solution at alpha={cfg.alpha_start!r} from {kind.value} guess {init!r}: {exc}") from exc

    pts = [first]
    events: list[CurveEvent] = []
    # halving depth persists across points and relaxes by one level per clean step
    level = 0

    # absorbs round-off accumulated by repeated alpha increments
    slack = 1e-9 * abs(base)

    def past_end(a):
        return a >= end - slack if forward else a <= end + slack

    while not past_end(pts[-1].alpha):
        prev = pts[-1]
        failed = False
        while True:
            step = base / 2.0 ** level
            a_new = prev.alpha + step
            if past_end(a_new):
                a_new = end
            if len(pts) >= 2:
                p0, p1 = pts[-2], pts[-1]
                slope = (_param(kind, p1) - _param(kind, p0)) / (p1.alpha - p0.alpha)
                guess = _param(kind, p1) + slope * (a_new - p1.alpha)
            else:
                guess = _param(kind, prev)
            try:
                pt = _solve(spec, kind, a_new, fixed, guess, newton, cfg.keep_profiles)
                jump = abs(_param(kind, pt) - _param(kind, prev))
                if jump > cfg.jump_guard and level < cfg.max_step_halvings:
                    raise _Jump()
                break
            except (SolverError, _Jump) as exc:
                if level >= cfg.max_step_halvings:
                    reason = "parameter jump" if isinstance(exc, _Jump) else str(exc)
                    events.append(CurveEvent(
                        EventKind.SOLVE_FAILURE, a_new, guess,
                        f"stopped at step {abs(step):.3g} after {level} halvings: {reason}"))
                    log.info("trace stopped at alpha=%g: %s", a_new, reason)
                    return _finish(spec, kind, fixed, pts, events, newton, forward)
                level += 1
                failed = True

        if jump > cfg.jump_guard:
            events.append(CurveEvent(
                EventKind.CONTINUITY_BREAK, pt.alpha, _param(kind, pt),
                f"|delta {kind.value}| = {jump:.6g} exceeds guard {cfg.jump_guard:g}",
                (prev.alpha, pt.alpha)))

        crossed = (prev.up1 + POS_TOL < 0.0) != (pt.up1 + POS_TOL < 0.0)
        if crossed:
            try:
                ev = find_positivity_loss(spec, kind, fixed, (prev.alpha, pt.alpha), newton,
                                          param_guess=_param(kind, prev))
                events.append(ev)
            except SolverError as exc:
                log.warning("positivity-loss refinement failed near alpha=%g: %s", pt.alpha, exc)
            if cfg.stop_on_positivity_loss and prev.positive and not pt.positive:
                break
        pts.append(pt)
        if not failed and level > 0:
            level -= 1

    return _finish(spec, kind, fixed, pts, events, newton, forward)


def _finish(spec, kind, fixed, pts, events, newton, forward):
    if not forward:
        pts = pts[::-1]
    curve = Curve(kind, float(fixed), pts, events, spec, newton)
    if len(pts) >= 3:
        curve.events.extend(detect_turning_points(curve))
    curve.events.sort(key=lambda e: e.alpha)
    return curve


def trace_lambda_curve(spec: ProblemSpec, mu: float, lam_init: float,
                       cfg: ContinuationConfig) -> Curve:
    """Trace lam(alpha) at fixed mu from ``cfg.alpha_start`` to ``cfg.alpha_end``.

    ``lam_init`` is the Newton guess for the first point.  Points come back
    sorted by increasing alpha whatever the marching direction.
    """
    return _trace(spec, CurveKind.LAMBDA, mu, lam_init, cfg)


def trace_mu_curve(spec: ProblemSpec, lam: float, mu_init: float,
                   cfg: ContinuationConfig) -> Curve:
    """Trace mu(alpha) at fixed lam; see trace_lambda_curve."""
    return _trace(spec, CurveKind.MU, lam, mu_init, cfg)


def _noise_floor(values):
    return 1e-9 * max(1.0, float(np.max(np.abs(values))))


def detect_turning_points(curve: Curve, tol: float = TURN_TOL) -> list[CurveEvent]:
    """Locate extrema of the continued parameter along the curve.

    Sign changes of consecutive difference quotients give brackets; each is
    refined by golden-section search on the re-solved parameter.  Differences
    below a round-off floor count as zero and never start a turn.
    """
    if len(curve.points) < 3:
        return []
    alphas, params = curve.alphas, curve.params
    dp = np.diff(params)
    floor = _noise_floor(params)
    signs = np.where(np.abs(dp) <= floor, 0, np.sign(dp * np.sign(np.diff(alphas))))

    events = []
    last_i, last_s = None, 0
    for i, s in enumerate(signs):
        if s == 0:
            continue
        if last_s != 0 and s != last_s:
            lo, hi = alphas[last_i], alphas[i + 1]
            events.append(_refine_turn(curve, lo, hi, maximum=last_s > 0))
        last_i, last_s = i, s
    return events


def _refine_turn(curve, lo, hi, maximum, tol=TURN_TOL):
    """Golden-section search for the extremum of param(alpha) on [lo, hi]."""
    kind, spec, newton = curve.kind, curve.spec, curve.newton
    sgn = -1.0 if maximum else 1.0
    alphas, params = curve.alphas, curve.params
    label = ("maximum" if maximum else "minimum") + f" of {kind.value}"
    # a parameter maximum means the curve opens toward smaller parameter values
    opening = "left" if maximum else "right"

    def stored_best():
        mask = (alphas >= min(lo, hi)) & (alphas <= max(lo, hi))
        j = np.flatnonzero(mask)[np.argmin(sgn * params[mask])]
        return float(alphas[j]), float(params[j])

    if spec is None:
        a, p = stored_best()
        return CurveEvent(EventKind.TURNING_POINT, a, p,
                          f"{label}, turn opening {opening} (unrefined)", (lo, hi))

    guess = [stored_best()[1]]

    def value(a):
        pt = _solve(spec, kind, a, curve.fixed_value, guess[0], newton)
        guess[0] = _param(kind, pt)
        return sgn * guess[0]

    a, b = float(min(lo, hi)), float(max(lo, hi))
    try:
        c = b - GOLDEN * (b - a)
        d = a + GOLDEN * (b - a)
        fc, fd = value(c), value(d)
        while b - a > tol:
            if fc < fd:
                b, d, fd = d, c, fc
                c = b - GOLDEN * (b - a)
                fc = value(c)
            else:
                a, c, fc = c, d, fd
                d = a + GOLDEN * (b - a)
                fd = value(d)
        am = 0.5 * (a + b)
        pm = sgn * value(am)
    except SolverError as exc:
        am, pm = stored_best()
        return CurveEvent(EventKind.TURNING_POINT, am, pm,
                          f"{label}, turn opening {opening} (refinement failed: {exc})", (lo, hi))
    return CurveEvent(EventKind.TURNING_POINT, am, pm,
                      f"{label}, turn opening {opening}", (float(lo), float(hi)))


def find_positivity_loss(spec: ProblemSpec, kind: CurveKind, fixed_value: float,
                         alpha_bracket: tuple[float, float], cfg: NewtonConfig = NewtonConfig(),
                         param_guess: Optional[float] = None, tol: float = LOSS_TOL,
                         max_bisections: int = 200) -> CurveEvent:
    """Bisect on alpha for u'(1) = 0 along a curve.

    The bracket ends must lie on opposite sides of the band: u'(1) < -POS_TOL
    at one end and u'(1) >= -POS_TOL at the other.  ``param_guess`` seeds
    Newton at the first bracket end (required for a cold start).
    """
    kind = CurveKind(kind)
    if param_guess is None:
        raise ValueError("param_guess is required to start Newton")
    a, b = map(float, alpha_bracket)
    pa = _solve(spec, kind, a, fixed_value, param_guess, cfg)
    pb = _solve(spec, kind, b, fixed_value, _param(kind, pa), cfg)
    if (pa.up1 + POS_TOL < 0.0) == (pb.up1 + POS_TOL < 0.0):
        raise BadBracket(
            f"u'(1) does not change sign on [{a}, {b}]: {pa.up1:.3e}, {pb.up1:.3e}")

    def event(p, note=""):
        kind_name = "lambda" if kind == CurveKind.LAMBDA else "mu"
        return CurveEvent(EventKind.POSITIVITY_LOSS, p.alpha, _param(kind, p),
                          f"u'(1) = {p.up1:.3e} at critical {kind_name}{note}",
                          (float(alpha_bracket[0]), float(alpha_bracket[1])))

    for p in (pa, pb):
        if abs(p.up1) <= tol:
            return event(p)
    if (pa.up1 < 0.0) == (pb.up1 < 0.0):
        # one end sits inside the band on the negative side
        return event(min((pa, pb), key=lambda p: abs(p.up1)), " (inside tolerance band)")

    for _ in range(max_bisections):
        m = 0.5 * (pa.alpha + pb.alpha)
        w = (m - pa.alpha) / (pb.alpha - pa.alpha)
        guess = (1 - w) * _param(kind, pa) + w * _param(kind, pb)
        pm = _solve(spec, kind, m, fixed_value, guess, cfg)
        if abs(pm.up1) <= tol:
            return event(pm)
        if (pm.up1 < 0.0) == (pa.up1 < 0.0):
            pa = pm
        else:
            pb = pm
        if abs(pb.alpha - pa.alpha) <= 4e-16 * abs(m):
            break
    best = min((pa, pb), key=lambda p: abs(p.up1))
    return event(best, " (alpha resolution exhausted)")

"""CSV/JSON serialization of curves, events, profiles and envelopes."""
from __future__ import annotations

import csv
import json
from pathlib import Path

from .curve import Curve, CurveEvent, CurveKind
from .logistic import EnvelopePoint
from .shoot import SolvePoint

CURVE_HEADER = ["alpha", "lambda", "mu", "uprime1", "min_u", "positive", "residual", "iters"]


def _num(x: float) -> str:
    # 17 significant digits round-trip any double exactly
    return format(float(x), ".17g")


def write_curve_csv(curve: Curve, path) -> Path:
    """Write one row per point plus ``<path>.events.json`` beside it."""
    if not curve.points:
        raise ValueError("cannot write an empty curve")
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CURVE_HEADER)
        for p in sorted(curve.points, key=lambda p: p.alpha):
            w.writerow([_num(p.alpha), _num(p.lam), _num(p.mu), _num(p.up1), _num(p.min_u),
                        int(p.positive), _num(p.residual), p.iters])
    write_events_json(curve.events, events_path(path))
    return path


def events_path(csv_path) -> Path:
    csv_path = Path(csv_path)
    return csv_path.with_name(csv_path.name + ".events.json")


def write_events_json(events: list[CurveEvent], path) -> None:
    payload = [{"kind": e.kind.value, "alpha": e.alpha, "param_value": e.param_value,
                "detail": e.detail} for e in events]
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def read_curve_csv(path, kind: CurveKind, fixed_value: float) -> Curve:
    """Parse a curve CSV back into SolvePoints (profiles and events not restored)."""
    points = []
    with open(path, newline="") as fh:
        r = csv.DictReader(fh)
        if r.fieldnames != CURVE_HEADER:
            raise ValueError(f"unexpected header {r.fieldnames}")
        for row in r:
            points.append(SolvePoint(
                alpha=float(row["alpha"]), lam=float(row["lambda"]), mu=float(row["mu"]),
                up1=float(row["uprime1"]), min_u=float(row["min_u"]),
                residual=float(row["residual"]), iters=int(row["iters"])))
    return Curve(CurveKind(kind), float(fixed_value), points)


def read_events_json(path) -> list[dict]:
    with open(path) as fh:
        return json.load(fh)


def write_profiles_csv(curve: Curve, path) -> Path:
    """Full-interval profiles (even reflection) of every point that kept one."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["alpha", "x", "u", "uprime"])
        for p in sorted(curve.points, key=lambda p: p.alpha):
            if p.profile is None:
                continue
            xs, u, up = p.profile.reflected()
            for x, ui, upi in zip(xs, u, up):
                w.writerow([_num(p.alpha), _num(x), _num(ui), _num(upi)])
    return path


def write_envelope_csv(points: list[EnvelopePoint], path) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["alpha", "lambda_bar", "mu_bar"])
        for p in points:
            w.writerow([_num(p.alpha), _num(p.lambda_bar), _num(p.mu_bar)])
    return path

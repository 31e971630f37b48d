"""Command-line front end.

    globalcurve <command> --config FILE [--out DIR] [--alpha-step X] [--steps N] [--quiet]

Commands: validate, lambda-curve, mu-curve, envelope, verify.
Exit codes: 0 success, 2 config error, 3 solver failure, 4 validation failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from . import io, logistic, verify
from .curve import ContinuationConfig, EventKind, trace_lambda_curve, trace_mu_curve
from .errors import ConfigError, DomainError, SolverError, ValidationError
from .model import ProblemSpec, validate_problem
from .shoot import NewtonConfig, find_positive_solution

log = logging.getLogger("globalcurve")

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_VALIDATION = 0, 2, 3, 4
COMMANDS = ("validate", "lambda-curve", "mu-curve", "envelope", "verify")

NEWTON_KEYS = ("tol_residual", "max_iters", "steps", "min_derivative")
CONT_KEYS = ("alpha_start", "alpha_end", "alpha_step", "max_step_halvings",
             "keep_profiles", "stop_on_positivity_loss", "jump_guard")

# per command: (config section, fixed parameter key, initial guess key, free parameter)
CURVE_COMMANDS = {
    "lambda-curve": ("lambda_curve", "mu", "lambda_init", "lambda"),
    "mu-curve": ("mu_curve", "lambda", "mu_init", "mu"),
}


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}")
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{where} must be a finite number, got {value!r}")
    return float(value)


def _coeffs(value, where):
    if not isinstance(value, list):
        raise ConfigError(f"{where} must be an array of numbers")
    return [_number(c, f"{where}[{k}]") for k, c in enumerate(value)]


def parse_problem(cfg: dict) -> ProblemSpec:
    prob = cfg.get("problem")
    if not isinstance(prob, dict) or "f" not in prob or "g" not in prob:
        raise ConfigError("config needs a 'problem' object with 'f' and 'g' coefficient arrays")
    return ProblemSpec.from_coeffs(_coeffs(prob["f"], "problem.f"), _coeffs(prob["g"], "problem.g"))


def parse_newton(cfg: dict, steps_override=None) -> NewtonConfig:
    section = cfg.get("newton", {})
    if not isinstance(section, dict):
        raise ConfigError("'newton' must be an object")
    unknown = set(section) - set(NEWTON_KEYS)
    if unknown:
        raise ConfigError(f"unknown newton settings: {sorted(unknown)}")
    kw = {k: _number(v, f"newton.{k}") for k, v in section.items()}
    for k in ("max_iters", "steps"):
        if k in kw:
            kw[k] = int(kw[k])
    if steps_override is not None:
        kw["steps"] = steps_override
    try:
        return NewtonConfig(**kw)
    except ValueError as exc:
        raise ConfigError(f"newton: {exc}")


def _continuation(settings: dict, newton: NewtonConfig, where: str, step_override=None) -> ContinuationConfig:
    kw = {}
    for k in CONT_KEYS:
        if k not in settings:
            continue
        v = settings[k]
        if k in ("keep_profiles", "stop_on_positivity_loss"):
            if not isinstance(v, bool):
                raise ConfigError(f"{where}.{k} must be true or false")
            kw[k] = v
        elif k == "max_step_halvings":
            kw[k] = int(_number(v, f"{where}.{k}"))
        else:
            kw[k] = _number(v, f"{where}.{k}")
    for k in ("alpha_start", "alpha_end"):
        if k not in kw:
            raise ConfigError(f"{where} is missing '{k}'")
    if step_override is not None:
        kw["alpha_step"] = step_override
    try:
        return ContinuationConfig(newton=newton, **kw)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}")


def _require_valid(spec: ProblemSpec, quiet: bool):
    report = validate_problem(spec)
    if not report.ok:
        names = "; ".join(c.name for c in report.failed)
        raise ValidationError(f"problem fails condition(s): {names}\n{report}", report)
    if not quiet:
        print(report)


def cmd_validate(cfg, args):
    spec = parse_problem(cfg)
    report = validate_problem(spec)
    if not args.quiet or not report.ok:
        print(report)
    if not report.ok:
        names = "; ".join(c.name for c in report.failed)
        print(f"validation failed: {names}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def cmd_curve(cfg, args):
    section_name, fixed_key, init_key, free = CURVE_COMMANDS[args.command]
    spec = parse_problem(cfg)
    _require_valid(spec, args.quiet)
    newton = parse_newton(cfg, args.steps)
    section = cfg.get(section_name)
    if not isinstance(section, dict) or not isinstance(section.get("runs"), list) or not section["runs"]:
        raise ConfigError(f"'{section_name}' must be an object with a non-empty 'runs' array")
    shared = dict(cfg.get("continuation", {}))
    shared.update({k: v for k, v in section.items() if k != "runs"})

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    names = set()
    for i, run in enumerate(section["runs"]):
        where = f"{section_name}.runs[{i}]"
        if not isinstance(run, dict):
            raise ConfigError(f"{where} must be an object")
        if fixed_key not in run:
            raise ConfigError(f"{where} is missing '{fixed_key}'")
        fixed = _number(run[fixed_key], f"{where}.{fixed_key}")
        settings = {**shared, **run}
        ccfg = _continuation(settings, newton, where, args.alpha_step)
        name = str(run.get("name", f"{section_name}_{i}"))
        if name in names:
            raise ConfigError(f"duplicate run name {name!r}")
        names.add(name)

        if init_key in run:
            init = _number(run[init_key], f"{where}.{init_key}")
        elif "init_search" in run:
            lo, hi = (_number(v, f"{where}.init_search") for v in run["init_search"])
            try:
                init = find_positive_solution(spec, ccfg.alpha_start, free, fixed, lo, hi,
                                              cfg=newton).param(free)
            except ValueError as exc:
                raise SolverError(str(exc))
        else:
            raise ConfigError(f"{where} needs '{init_key}' (or 'init_search': [lo, hi])")

        tracer = trace_lambda_curve if free == "lambda" else trace_mu_curve
        curve = tracer(spec, fixed, init, ccfg)
        path = io.write_curve_csv(curve, out / f"{name}.csv")
        if ccfg.keep_profiles:
            io.write_profiles_csv(curve, out / f"{name}.profiles.csv")
        if not args.quiet:
            counts = {k.value: len(curve.events_of(k)) for k in EventKind}
            print(f"{name}: {len(curve.points)} points -> {path}; events {counts}")
            for e in curve.events:
                print(f"  {e.kind.value:16s} alpha={e.alpha:.10g} {free}={e.param_value:.10g}  {e.detail}")
    return EXIT_OK


def cmd_envelope(cfg, args):
    section = cfg.get("envelope")
    if not isinstance(section, dict):
        raise ConfigError("config needs an 'envelope' object")
    if "alphas" in section:
        grid = _coeffs(section["alphas"], "envelope.alphas")
    else:
        try:
            a0, a1, da = (_number(section[k], f"envelope.{k}") for k in ("alpha_start", "alpha_end", "alpha_step"))
        except KeyError as exc:
            raise ConfigError(f"envelope is missing {exc}")
        if da <= 0 or a1 < a0:
            raise ConfigError("envelope grid needs alpha_step > 0 and alpha_end >= alpha_start")
        n = int(round((a1 - a0) / da)) + 1
        grid = [a0 + k * da for k in range(n)]
    panels = int(_number(section.get("panels", logistic.DEFAULT_PANELS), "envelope.panels"))
    near = [a for a in grid if logistic.ALPHA_MAX - a < logistic.NEAR_LIMIT_WARN]
    if near:
        log.warning("alpha within %.2g of 3/4 (%d grid points): quadrature accuracy degrades",
                    logistic.NEAR_LIMIT_WARN, len(near))
    points = logistic.envelope(grid, panels)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = io.write_envelope_csv(points, out / section.get("output", "envelope.csv"))
    if not args.quiet:
        print(f"envelope: {len(points)} points -> {path}")
    return EXIT_OK


def cmd_verify(cfg, args):
    names = cfg.get("verify", {}).get("checks") if cfg else None
    if names is not None:
        unknown = set(names) - set(verify.CHECKS)
        if unknown:
            raise ConfigError(f"unknown checks: {sorted(unknown)}")
    results = verify.run_all(names)
    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}: {r.detail} ({r.seconds:.2f}s)")
    return EXIT_OK if all(r.passed for r in results) else EXIT_SOLVER


HANDLERS = {
    "validate": cmd_validate,
    "lambda-curve": cmd_curve,
    "mu-curve": cmd_curve,
    "envelope": cmd_envelope,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="globalcurve",
                                description="Solution curves of u'' + lam f(u) - mu g(x) = 0 by continuation in u(0).")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON problem/run configuration (optional for verify)")
    p.add_argument("--out", default=".", help="output directory (default: current directory)")
    p.add_argument("--alpha-step", type=float, help="override alpha_step for every curve run")
    p.add_argument("--steps", type=int, help="override the integrator step count")
    p.add_argument("--quiet", action="store_true", help="print only errors")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        if args.config is None:
            if args.command != "verify":
                raise ConfigError("--config is required")
            cfg = {}
        else:
            cfg = load_config(args.config)
        if args.alpha_step is not None and (args.alpha_step == 0 or not math.isfinite(args.alpha_step)):
            raise ConfigError("--alpha-step must be finite and nonzero")
        return HANDLERS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (SolverError, DomainError) as exc:
        print(f"solver error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: four workflows over JSON configs.

    melan <mode> --config PATH [--grid N] [--tol X] [--max-iter K]
                 [--force] [--out DIR]

Modes: solve-linear, check, iterate, bridge-report.  Configs are JSON with
four blocks — problem, load, numerics, output — documented in the README;
the six bundled example configs double as usage documentation.  All
quantities are in kN and m.  Curves are emitted as CSV (columns x, y,
y_second_derivative, 17 significant digits, byte-identical across runs),
reports as JSON.

Exit codes: 0 success; 1 configuration error; 2 a certification condition
refused the run (and force was not given); 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from importlib import resources
from pathlib import Path
from typing import List, Optional

import numpy as np

from .bridge import BridgeParams, applicability, solve_bridge
from .criteria import ConditionReport
from .errors import ConfigError, EnvelopeViolation, MelanError, NotApplicable
from .linear import GridSolution, LinearProblem, residual, solve_linear
from .loads import Affine, Constant, Cubic, LoadSpec, Sampled, SineHalfWave, SinhTerm
from .monotone import MelanProblem, MonotoneVerdict, iterate_melan

__all__ = ["main"]

_MODES = ("solve-linear", "check", "iterate", "bridge-report")


# ---------------------------------------------------------------------------
# Config ingestion


def _fail(field: str, message: str) -> ConfigError:
    return ConfigError(f"config field '{field}': {message}")


def _number(block: dict, field: str, path: str, required: bool = True,
            default: Optional[float] = None) -> Optional[float]:
    if field not in block:
        if required:
            raise _fail(f"{path}.{field}", "missing required number")
        return default
    value = block[field]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _fail(f"{path}.{field}", f"expected a number, got {value!r}")
    return float(value)


def _integer(block: dict, field: str, path: str, default: int) -> int:
    if field not in block:
        return default
    value = block[field]
    if isinstance(value, bool) or not isinstance(value, int):
        raise _fail(f"{path}.{field}", f"expected an integer, got {value!r}")
    return value


def _load_term(entry: dict, index: int):
    path = f"load[{index}]"
    if not isinstance(entry, dict) or "type" not in entry:
        raise _fail(path, "each load term must be an object with a 'type' tag")
    tag = entry["type"]
    if tag == "constant":
        return Constant(_number(entry, "value", path))
    if tag == "affine":
        return Affine(_number(entry, "c0", path), _number(entry, "c1", path))
    if tag == "sine":
        return SineHalfWave(_number(entry, "amplitude", path))
    if tag == "cubic":
        return Cubic(_number(entry, "c3", path))
    if tag == "sinh":
        return SinhTerm(_number(entry, "coef", path), _number(entry, "rate", path))
    if tag == "sampled":
        values = entry.get("values")
        if not isinstance(values, list) or not values:
            raise _fail(f"{path}.values", "expected a non-empty list of numbers")
        try:
            return Sampled(tuple(float(v) for v in values))
        except (TypeError, ValueError) as exc:
            raise _fail(f"{path}.values", str(exc)) from exc
    raise _fail(f"{path}.type", f"unknown load term type {tag!r}")


def _parse_load(config: dict) -> LoadSpec:
    entries = config.get("load", [])
    if not isinstance(entries, list):
        raise _fail("load", "expected a list of term objects")
    if not entries:
        return LoadSpec((Constant(0.0),))
    try:
        return LoadSpec(tuple(_load_term(e, i) for i, e in enumerate(entries)))
    except ValueError as exc:
        raise _fail("load", str(exc)) from exc


def _problem_block(config: dict) -> dict:
    block = config.get("problem")
    if not isinstance(block, dict):
        raise _fail("problem", "missing required object")
    return block


def _bridge_params(config: dict) -> BridgeParams:
    block = _problem_block(config)
    try:
        return BridgeParams(
            L=_number(block, "L", "problem"),
            EI=_number(block, "EI", "problem"),
            EcAc=_number(block, "EcAc", "problem"),
            n=_number(block, "n", "problem", required=False),
            H=_number(block, "H", "problem", required=False),
            q=_number(block, "q", "problem", required=False),
            Lc=_number(block, "Lc", "problem", required=False),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise _fail("problem", str(exc)) from exc


def _resolve_config_path(name: str) -> str:
    """A real path wins; otherwise fall back to the bundled example configs."""
    candidate = Path(name)
    if candidate.is_file():
        return str(candidate)
    bundle = resources.files("melan") / "configs" / name
    if bundle.is_file():
        return str(bundle)
    if not name.endswith(".json"):
        bundle = resources.files("melan") / "configs" / f"{name}.json"
        if bundle.is_file():
            return str(bundle)
    raise ConfigError(f"config file not found: {name}")


def _read_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        config = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config parse error in {path} at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}"
        ) from exc
    if not isinstance(config, dict):
        raise ConfigError(f"config root must be an object, got {type(config).__name__}")
    return config


# ---------------------------------------------------------------------------
# Emission


def _write_curve(path: Path, grid: np.ndarray, y: np.ndarray, ypp: np.ndarray) -> None:
    lines = ["x,y,y_second_derivative"]
    for xv, yv, pv in zip(grid, y, ypp):
        lines.append(f"{xv:.17g},{yv:.17g},{pv:.17g}")
    path.write_text("\n".join(lines) + "\n")


def _write_csv(path: Path, sol: GridSolution) -> None:
    _write_curve(path, sol.grid, sol.y, sol.ypp)


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _report_dict(report: ConditionReport) -> dict:
    return asdict(report)


def _print_reports(reports: List[ConditionReport], stream) -> None:
    width = max(len(r.name) for r in reports)
    for r in reports:
        mark = "ok " if r.satisfied else "FAIL"
        rel = "<" if r.strict else "<="
        print(
            f"  {r.name:<{width}}  {mark}  {r.lhs:.6g} {rel} {r.rhs:.6g}"
            f"  (margin {r.margin:+.3g})",
            file=stream,
        )


def _out_dir(config: dict, args) -> Path:
    if args.out is not None:
        out = Path(args.out)
    else:
        block = config.get("output", {})
        if not isinstance(block, dict):
            raise _fail("output", "expected an object")
        out = Path(block.get("dir", "."))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _numerics(config: dict, args) -> dict:
    block = config.get("numerics", {})
    if not isinstance(block, dict):
        raise _fail("numerics", "expected an object")
    grid = args.grid if args.grid is not None else _integer(block, "grid_points", "numerics", 1001)
    max_iter = (
        args.max_iter if args.max_iter is not None
        else _integer(block, "max_iter", "numerics", 100)
    )
    tol = args.tol if args.tol is not None else _number(block, "tol", "numerics", required=False)
    force = bool(args.force or block.get("force", False))
    return {"grid_points": grid, "max_iter": max_iter, "tol": tol, "force": force}


# ---------------------------------------------------------------------------
# Modes


def _run_solve_linear(config: dict, args) -> int:
    block = _problem_block(config)
    load = _parse_load(config)
    try:
        problem = LinearProblem(
            M=_number(block, "M", "problem"),
            N=_number(block, "N", "problem"),
            L=_number(block, "L", "problem"),
            load=load,
        )
    except ValueError as exc:
        raise _fail("problem", str(exc)) from exc
    num = _numerics(config, args)
    out = _out_dir(config, args)

    sol = solve_linear(problem, grid_points=num["grid_points"])
    res = residual(sol, problem)
    _write_csv(out / "solution.csv", sol)
    summary = {
        "M": problem.M,
        "N": problem.N,
        "L": problem.L,
        "grid_points": num["grid_points"],
        "regime": sol.meta.regime,
        "max_abs_y": float(np.max(np.abs(sol.y))),
        "midspan_y": float(sol.y[len(sol.y) // 2]),
        "integral_y": sol.integral_y,
        "residual": res,
    }
    _write_json(out / "summary.json", summary)
    print(f"solve-linear: wrote {out / 'solution.csv'}")
    print(
        f"  max |y| = {summary['max_abs_y']:.8g}, integral = "
        f"{summary['integral_y']:.8g}, residual = {res:.3g}"
    )
    return 0


def _run_check(config: dict, args) -> int:
    bp = _bridge_params(config)
    num = _numerics(config, args)
    out = _out_dir(config, args)
    report = applicability(bp)

    payload = {
        "coefficients": {"a": report.a, "b": report.b, "c": report.c},
        "physical": {
            "n": report.n, "q_over_H": report.qh, "H": report.H,
            "q": report.q, "Lc": report.Lc,
        },
        "lambda": report.lam,
        "M": report.M,
        "N": report.N,
        "envelope": {"sine": report.envelope_sine, "const": report.envelope_const},
        "conditions": [_report_dict(r) for r in report.reports],
        "verdict": report.verdict,
    }
    _write_json(out / "report.json", payload)

    print(f"check: verdict {report.verdict}")
    print(
        f"  a = {report.a:.6g}, b = {report.b:.6g}, c = {report.c:.6g}"
        f"  (M = {report.M:.6g}, N = {report.N:.6g})"
    )
    print(
        f"  envelope: p(x) <= {report.envelope_sine:.6g}*sin(pi*x/L)"
        f" + {report.envelope_const:.6g} kN/m"
    )
    _print_reports(report.reports, sys.stdout)
    if report.verdict == "not-applicable" and not num["force"]:
        return 2
    return 0


def _trace_payload(verdict: MonotoneVerdict) -> dict:
    def maxima(trace):
        return [float(np.max(np.abs(it.y))) for it in trace.iterates]

    gaps = [
        float(np.max(np.abs(u.y - l.y)))
        for l, u in zip(verdict.lower.iterates, verdict.upper.iterates)
    ]
    return {
        "M": verdict.M,
        "N": verdict.N,
        "lambda": verdict.lam,
        "rho": verdict.rho,
        "status": verdict.status,
        "iterations": verdict.iterations,
        "certified": verdict.certified,
        "final_gap": verdict.final_gap,
        "gap_bounds": list(verdict.gap_bounds),
        "gaps": gaps,
        "lower_maxima": maxima(verdict.lower),
        "upper_maxima": maxima(verdict.upper),
        "positivity": _report_dict(verdict.positivity),
        "uniqueness": _report_dict(verdict.uniqueness),
        "warnings": list(verdict.warnings),
    }


def _write_trace_curves(out: Path, verdict: MonotoneVerdict) -> None:
    for trace in (verdict.lower, verdict.upper):
        for k, it in enumerate(trace.iterates):
            _write_curve(out / f"{trace.side}_{k}.csv", verdict.grid, it.y, it.ypp)


def _run_iterate(config: dict, args) -> int:
    block = _problem_block(config)
    load = _parse_load(config)
    try:
        problem = MelanProblem(
            a=_number(block, "a", "problem"),
            b=_number(block, "b", "problem"),
            c=_number(block, "c", "problem"),
            L=_number(block, "L", "problem"),
            load=load,
        )
    except ValueError as exc:
        raise _fail("problem", str(exc)) from exc
    lam = _number(block, "lambda", "problem", required=False)
    num = _numerics(config, args)
    out = _out_dir(config, args)

    verdict = iterate_melan(
        problem,
        lam=lam,
        grid_points=num["grid_points"],
        max_iter=num["max_iter"],
        tol=num["tol"],
        strict=not num["force"],
    )
    _write_trace_curves(out, verdict)
    _write_json(out / "trace.json", _trace_payload(verdict))
    print(
        f"iterate: {verdict.status} after {verdict.iterations} sweeps"
        f" (gap {verdict.final_gap:.6g}, rho {verdict.rho:.4g},"
        f" certified {verdict.certified})"
    )
    return 0


def _run_bridge_report(config: dict, args) -> int:
    bp = _bridge_params(config)
    load = _parse_load(config)
    num = _numerics(config, args)
    out = _out_dir(config, args)

    result = solve_bridge(
        bp,
        load,
        grid_points=num["grid_points"],
        max_iter=num["max_iter"],
        tol=num["tol"],
        force=num["force"],
    )
    report = result.report
    payload = {
        "coefficients": {"a": report.a, "b": report.b, "c": report.c},
        "physical": {
            "n": report.n, "q_over_H": report.qh, "H": report.H,
            "q": report.q, "Lc": report.Lc,
        },
        "lambda": report.lam,
        "envelope": {"sine": report.envelope_sine, "const": report.envelope_const},
        "conditions": [_report_dict(r) for r in report.reports],
        "verdict": report.verdict,
        "additional_tension_kN": result.h_w,
        "max_deflection_m": float(np.max(np.abs(result.deflection.y))),
        "iteration": _trace_payload(result.monotone),
    }
    _write_json(out / "report.json", payload)
    _write_csv(out / "deflection.csv", result.deflection)
    _write_trace_curves(out, result.monotone)

    print(f"bridge-report: verdict {report.verdict}")
    _print_reports(report.reports, sys.stdout)
    print(
        f"  iteration {result.monotone.status} after"
        f" {result.monotone.iterations} sweeps; max deflection"
        f" {payload['max_deflection_m']:.6g} m; additional tension"
        f" {result.h_w:.6g} kN"
    )
    return 0


# ---------------------------------------------------------------------------
# Entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="melan",
        description="Deflection solvers and certification checks for "
        "cable-coupled beam models (units: kN, m).",
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in _MODES:
        p = sub.add_parser(mode)
        p.add_argument("--config", required=True, help="JSON config path or bundled name")
        p.add_argument("--grid", type=int, default=None, help="override numerics.grid_points")
        p.add_argument("--tol", type=float, default=None, help="override numerics.tol")
        p.add_argument("--max-iter", type=int, default=None, help="override numerics.max_iter")
        p.add_argument("--force", action="store_true", help="downgrade refusals to warnings")
        p.add_argument("--out", default=None, help="output directory (default: config or cwd)")
    return parser


_RUNNERS = {
    "solve-linear": _run_solve_linear,
    "check": _run_check,
    "iterate": _run_iterate,
    "bridge-report": _run_bridge_report,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        path = _resolve_config_path(args.config)
        config = _read_config(path)
        declared = config.get("mode")
        if declared is not None and declared != args.mode:
            raise ConfigError(
                f"config declares mode {declared!r} but was invoked as {args.mode!r}"
            )
        return _RUNNERS[args.mode](config, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (NotApplicable, EnvelopeViolation) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    except MelanError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

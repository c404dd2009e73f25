"""Command-line front end.

Subcommands::

    spintracer evolve   single time evolution -> CSV time series
    spintracer sweep    parameter sweep -> records CSV + scaling-fit JSON
    spintracer berry    geometric-phase extraction -> JSON report
    spintracer verify   built-in verification suite -> pass/fail report

Option values resolve with precedence CLI > environment > config file >
defaults.  Environment overrides use the prefix ``SPINTRACER_`` plus the
upper-cased option name (``SPINTRACER_RATIO=0.01``); config files are flat
``key = value`` text with ``#`` comments.  Unknown config keys and
out-of-domain values are rejected before any computation starts.

Exit codes: 0 success, 1 usage/configuration error, 2 computation failure,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .closedform import adiabatic_trajectory, exact_trajectory
from .integrate import (
    IntegrationError,
    integrate_coefficients,
    integrate_lab_frame,
    project_to_instantaneous,
)
from .model import CoefficientPair, FieldParams, TracerFlags, eigensystem_at
from .phases import BERRY_ROUTES, berry_phase, wrap_angle
from .serialize import (
    fits_payload,
    fmt,
    phase_report_entry,
    phase_reports_payload,
    records_csv,
    trajectory_csv,
)
from .sweep import METRICS, SweepSpec, run_sweep

ENV_PREFIX = "SPINTRACER_"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_COMPUTATION = 2
EXIT_VERIFICATION = 3

_SOLVERS = ("exact", "adiabatic", "numeric", "numeric-lab")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors; the CLI contract wants 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit_(EXIT_USAGE, f"{self.prog}: error: {message}")


class SystemExit_(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code
        self.message = message


# ---------------------------------------------------------------------------
# value parsers
# ---------------------------------------------------------------------------

def _parse_float(text: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise UsageError(f"expected a number, got {text!r}") from exc


def _parse_positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise UsageError(f"expected an integer, got {text!r}") from exc
    if value < 1:
        raise UsageError(f"expected a positive integer, got {value}")
    return value


def _parse_bool(text) -> bool:
    if isinstance(text, bool):
        return text
    lowered = str(text).strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"expected a boolean, got {text!r}")


def _parse_float_list(text: str) -> tuple[float, ...]:
    items = [s for s in (part.strip() for part in str(text).split(",")) if s]
    if not items:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}")
    return tuple(_parse_float(s) for s in items)


def _parse_flags(text: str) -> TracerFlags:
    values = _parse_float_list(text)
    if len(values) != 3:
        raise UsageError(f"flags must be three numbers 'a11,a22,a', got {text!r}")
    return TracerFlags(*values)


def _parse_flags_variants(text: str) -> tuple[TracerFlags, ...]:
    groups = [g for g in (part.strip() for part in str(text).split(";")) if g]
    if not groups:
        raise UsageError(f"expected ';'-separated flag triples, got {text!r}")
    return tuple(_parse_flags(g) for g in groups)


def _parse_c0(text: str) -> CoefficientPair:
    values = _parse_float_list(text)
    if len(values) != 4:
        raise UsageError(
            f"initial condition must be four numbers 're_c1,im_c1,re_c2,im_c2', got {text!r}"
        )
    return CoefficientPair(complex(values[0], values[1]), complex(values[2], values[3]))


def _parse_states(text: str) -> tuple[int, ...]:
    states = tuple(int(v) for v in _parse_float_list(text))
    if not states or any(s not in (1, 2) for s in states):
        raise UsageError(f"states must be a comma list drawn from 1,2; got {text!r}")
    return states


def _parse_routes(text: str) -> tuple[str, ...]:
    routes = tuple(s for s in (part.strip() for part in str(text).split(",")) if s)
    bad = [r for r in routes if r not in BERRY_ROUTES]
    if bad or not routes:
        raise UsageError(f"routes must be drawn from {BERRY_ROUTES}, got {text!r}")
    return routes


def _parse_solver(text: str) -> str:
    if text not in _SOLVERS:
        raise UsageError(f"solver must be one of {_SOLVERS}, got {text!r}")
    return text


def _parse_metrics(text: str) -> tuple[str, ...]:
    metrics = tuple(s for s in (part.strip() for part in str(text).split(",")) if s)
    bad = [m for m in metrics if m not in METRICS]
    if bad or not metrics:
        raise UsageError(f"metrics must be drawn from {METRICS}, got {text!r}")
    return metrics


def _parse_str(text: str) -> str:
    return str(text)


# ---------------------------------------------------------------------------
# option resolution: CLI > env > config file > defaults
# ---------------------------------------------------------------------------

_COMMAND_OPTIONS = {
    "evolve": {
        "theta": (_parse_float, math.pi / 3, "field tilt angle (radians unless --degrees)"),
        "ratio": (_parse_float, 0.1, "drive ratio omega0/omega1"),
        "omega1": (_parse_float, 1.0, "half level splitting"),
        "flags": (_parse_flags, TracerFlags(1.0, 1.0, 1.0), "tracer flags 'a11,a22,a'"),
        "solver": (_parse_solver, "exact", f"one of {_SOLVERS}"),
        "periods": (_parse_positive_int, 1, "number of drive periods"),
        "samples": (_parse_positive_int, None, "sample count (default: auto-dense)"),
        "c0": (_parse_c0, CoefficientPair(1.0, 0.0), "initial 're_c1,im_c1,re_c2,im_c2'"),
        "out": (_parse_str, None, "output CSV path (default: stdout)"),
        "degrees": (_parse_bool, False, "interpret angles in degrees"),
    },
    "sweep": {
        "theta": (_parse_float_list, (math.pi / 4,), "comma list of tilt angles"),
        "ratio": (
            _parse_float_list,
            (1e-1, 10**-1.5, 1e-2, 10**-2.5, 1e-3),
            "comma list of drive ratios",
        ),
        "omega1": (_parse_float, 1.0, "half level splitting"),
        "flags": (
            _parse_flags_variants,
            (TracerFlags(1.0, 1.0, 1.0),),
            "';'-separated flag triples",
        ),
        "c0": (_parse_c0, CoefficientPair(1.0, 0.0), "initial 're_c1,im_c1,re_c2,im_c2'"),
        "periods": (_parse_positive_int, 1, "number of drive periods"),
        "metrics": (_parse_metrics, ("sup-error",), f"comma list from {METRICS}"),
        "out": (_parse_str, None, "records CSV path (required)"),
        "workers": (_parse_positive_int, 1, "parallel worker processes"),
        "degrees": (_parse_bool, False, "interpret angles in degrees"),
    },
    "berry": {
        "theta": (_parse_float_list, (math.pi / 3,), "comma list of tilt angles"),
        "ratio": (_parse_float, 1e-3, "drive ratio omega0/omega1"),
        "omega1": (_parse_float, 1.0, "half level splitting"),
        "state": (_parse_states, (1, 2), "comma list of eigenstates (1 and/or 2)"),
        "route": (_parse_routes, ("adiabatic", "exact"), f"comma list from {BERRY_ROUTES}"),
        "out": (_parse_str, None, "output JSON path (default: stdout)"),
        "degrees": (_parse_bool, False, "interpret angles in degrees"),
    },
    "verify": {},
}


def _read_config_file(path: str, valid_keys) -> dict[str, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file {path!r}: {exc}") from exc
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower().replace("-", "_")
        if key not in valid_keys:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = value.strip()
    return values


def _resolve_options(command: str, args: argparse.Namespace) -> dict:
    spec = _COMMAND_OPTIONS[command]
    config_values: dict[str, str] = {}
    if getattr(args, "config", None):
        config_values = _read_config_file(args.config, set(spec))
    resolved = {}
    for name, (parse, default, _help) in spec.items():
        cli_value = getattr(args, name, None)
        env_value = os.environ.get(ENV_PREFIX + name.upper())
        if cli_value is not None:
            raw = cli_value
        elif env_value is not None:
            raw = env_value
        elif name in config_values:
            raw = config_values[name]
        else:
            resolved[name] = default
            continue
        try:
            resolved[name] = parse(raw)
        except UsageError as exc:
            raise UsageError(f"option --{name}: {exc}") from exc
    if resolved.get("degrees"):
        theta = resolved["theta"]
        if isinstance(theta, tuple):
            resolved["theta"] = tuple(math.radians(v) for v in theta)
        else:
            resolved["theta"] = math.radians(theta)
    return resolved


_COMMAND_HELP = {
    "evolve": "single time evolution -> CSV time series",
    "sweep": "parameter sweep -> records CSV + scaling-fit JSON",
    "berry": "geometric-phase extraction -> JSON report",
    "verify": "built-in verification suite -> pass/fail report",
}


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="spintracer",
        description="Spin-1/2 in a rotating magnetic field: exact, adiabatic, "
        "and numerical evolutions that check each other.  Option precedence: "
        "CLI > SPINTRACER_* environment > --config file > defaults.",
        add_help=True,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for command, options in _COMMAND_OPTIONS.items():
        p = sub.add_parser(command, help=_COMMAND_HELP[command])
        for name, (_parse, default, help_text) in options.items():
            if name == "degrees":
                p.add_argument("--degrees", action="store_const", const="true", help=help_text)
            else:
                p.add_argument(f"--{name}", type=str, default=None, help=f"{help_text} (default {default})")
        if command != "verify":
            p.add_argument("--config", type=str, default=None, help="flat key=value config file")
        if command == "verify":
            p.add_argument(
                "--inject-fault",
                action="store_true",
                help="test-only mutation canary: flips a sign inside the closed form "
                "so a healthy suite must fail",
            )
    return parser


def _write_or_print(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_evolve(opts: dict) -> int:
    params = FieldParams.from_ratio(opts["theta"], opts["ratio"], opts["omega1"])
    flags: TracerFlags = opts["flags"]
    c0: CoefficientPair = opts["c0"]
    if not c0.is_normalized(tol=1e-6):
        raise UsageError(f"initial condition must be normalized, |c|^2 = {c0.norm_sq:.6g}")
    t_end = opts["periods"] * params.drive_period
    solver = opts["solver"]
    n_samples = opts["samples"]
    if solver in ("exact", "adiabatic"):
        if n_samples is None:
            from .integrate import _auto_samples

            n_samples = _auto_samples(params, flags, t_end)
        times = np.linspace(0.0, t_end, n_samples)
        if solver == "exact":
            traj = exact_trajectory(params, flags, c0, times)
        else:
            traj = adiabatic_trajectory(params, flags, c0, times)
    elif solver == "numeric":
        traj = integrate_coefficients(params, flags, c0, t_end, n_samples=n_samples)
    else:  # numeric-lab
        eig = eigensystem_at(params, 0.0)
        psi0 = c0.c1 * eig.state1 + c0.c2 * eig.state2
        lab = integrate_lab_frame(params, psi0, t_end, n_samples=n_samples)
        traj = project_to_instantaneous(params, lab)
    _write_or_print(trajectory_csv(traj), opts["out"])
    return EXIT_OK


def _cmd_sweep(opts: dict) -> int:
    if opts["out"] is None:
        raise UsageError("sweep requires --out (records CSV path)")
    spec = SweepSpec(
        theta_values=opts["theta"],
        ratio_values=opts["ratio"],
        flags_variants=opts["flags"],
        initial_condition=opts["c0"],
        periods=opts["periods"],
        metrics=opts["metrics"],
        omega1=opts["omega1"],
    )
    result = run_sweep(spec, workers=opts["workers"])
    out = str(opts["out"])
    base = out[: -len(".csv")] if out.endswith(".csv") else out
    Path(out).write_text(records_csv(result.records), encoding="utf-8")
    Path(base + ".fits.json").write_text(
        json.dumps(fits_payload(result), indent=2) + "\n", encoding="utf-8"
    )
    meta = {
        "spec_hash": result.spec.spec_hash,
        "wall_times": [
            {
                "theta": fmt(rec.theta),
                "ratio": fmt(rec.ratio),
                "flags": [fmt(v) for v in rec.flags.astuple()],
                "metric": rec.metric,
                "seconds": rec.wall_time,
            }
            for rec in result.records
        ],
        "failures": [
            {
                "theta": fmt(f.theta),
                "ratio": fmt(f.ratio),
                "flags": [fmt(v) for v in f.flags.astuple()],
                "message": f.message,
            }
            for f in result.failures
        ],
    }
    Path(base + ".meta.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    for failure in result.failures:
        print(
            f"sweep point failed: theta={failure.theta:.6g} ratio={failure.ratio:.6g} "
            f"flags={failure.flags.astuple()}: {failure.message}",
            file=sys.stderr,
        )
    return EXIT_COMPUTATION if result.failures else EXIT_OK


def _cmd_berry(opts: dict) -> int:
    entries = []
    for theta in opts["theta"]:
        params = FieldParams.from_ratio(theta, opts["ratio"], opts["omega1"])
        for route in opts["route"]:
            reports = {state: berry_phase(params, state, route) for state in opts["state"]}
            if len(reports) == 2:
                total = sum(r.geometric_phase for r in reports.values())
                sum_rule = fmt(abs(wrap_angle(total)))
            else:
                sum_rule = None
            for state in opts["state"]:
                entry = phase_report_entry(theta, reports[state])
                entry["sum_rule_mod_2pi"] = sum_rule
                entries.append(entry)
    _write_or_print(phase_reports_payload(entries), opts["out"])
    return EXIT_OK


def _cmd_verify(inject_fault: bool) -> int:
    from .verify import run_verification

    results = run_verification(inject_fault=inject_fault)
    n_pass = 0
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        n_pass += res.passed
        print(
            f"check {res.name}: {status} (worst residual {res.worst_residual:.3e}, "
            f"tolerance {res.tolerance:.1e}) [{res.detail}]"
        )
    print(f"verification: {n_pass}/{len(results)} checks passed")
    return EXIT_OK if n_pass == len(results) else EXIT_VERIFICATION


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit_ as exc:
        if exc.message:
            print(exc.message, file=sys.stderr)
        return exc.code
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            return _cmd_verify(args.inject_fault)
        opts = _resolve_options(args.command, args)
        if args.command == "evolve":
            return _cmd_evolve(opts)
        if args.command == "sweep":
            return _cmd_sweep(opts)
        return _cmd_berry(opts)
    except (UsageError, ValueError) as exc:
        print(f"spintracer: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IntegrationError as exc:
        print(f"spintracer: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()

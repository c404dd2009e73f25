"""Batch harness: evaluate error/decomposition metrics over parameter grids
and fit the scaling exponents that the single-point modules predict.

A sweep is described declaratively by :class:`SweepSpec`; running it yields
one :class:`RunRecord` per (parameter point, metric), plus log-log scaling
fits per (theta, flags, metric) series over the drive-ratio ladder.  Points
are independent and can be evaluated by a process pool; the output record
order is sorted, not completion-ordered, so results are stable.
"""

from __future__ import annotations

import concurrent.futures
import hashlib
import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .closedform import adiabatic_trajectory, exact_trajectory, rabi_frequency
from .integrate import IntegratorConfig, integrate_coefficients
from .model import CoefficientPair, FieldParams, TracerFlags
from .phases import (
    ROUTE_ADIABATIC,
    ROUTE_EXACT,
    ScalingFit,
    berry_phase,
    fit_scaling,
    rabi_contributions,
    wrap_angle,
)

__all__ = [
    "METRICS",
    "SweepSpec",
    "RunRecord",
    "SeriesFit",
    "PointFailure",
    "SweepResult",
    "run_sweep",
    "evaluate_point",
]

METRICS = ("sup-error", "terminal-error", "gamma-decomposition", "berry-phase", "norm-drift")

# gamma-decomposition expands into two record series so each can get its own
# scaling fit
_GAMMA_DIAGONAL = "gamma-diagonal"
_GAMMA_NONDIAGONAL = "gamma-nondiagonal"


@dataclass(frozen=True)
class SweepSpec:
    """Declarative description of a parameter sweep.

    ``metrics`` entries: ``sup-error`` and ``terminal-error`` compare the
    exact and adiabatic closed forms over ``periods`` drive periods;
    ``gamma-decomposition`` records the omega1-normalized diagonal and
    off-diagonal Rabi-frequency contributions (as the two metric names
    ``gamma-diagonal`` / ``gamma-nondiagonal``); ``berry-phase`` records the
    mod-2pi gap between the exact-route and adiabatic-route geometric
    phases; ``norm-drift`` integrates the coefficient equations numerically
    and records the worst norm deviation.
    """

    theta_values: tuple[float, ...]
    ratio_values: tuple[float, ...]
    flags_variants: tuple[TracerFlags, ...]
    initial_condition: CoefficientPair = field(default_factory=lambda: CoefficientPair(1.0, 0.0))
    periods: int = 1
    metrics: tuple[str, ...] = ("sup-error",)
    omega1: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "theta_values", tuple(float(v) for v in self.theta_values))
        object.__setattr__(self, "ratio_values", tuple(float(v) for v in self.ratio_values))
        object.__setattr__(self, "flags_variants", tuple(self.flags_variants))
        object.__setattr__(self, "metrics", tuple(self.metrics))
        if not self.theta_values:
            raise ValueError("theta_values must be nonempty")
        if not self.ratio_values:
            raise ValueError("ratio_values must be nonempty")
        if not self.flags_variants:
            raise ValueError("flags_variants must be nonempty")
        if not self.metrics:
            raise ValueError("metrics must be nonempty")
        unknown = [m for m in self.metrics if m not in METRICS]
        if unknown:
            raise ValueError(f"unknown metrics {unknown}; valid metrics are {list(METRICS)}")
        if any(r <= 0.0 for r in self.ratio_values):
            raise ValueError("ratio_values must all be positive")
        if self.periods < 1:
            raise ValueError(f"periods must be >= 1, got {self.periods}")
        if not self.initial_condition.is_normalized(tol=1e-6):
            raise ValueError("initial_condition must be normalized")
        # validate the whole grid before any computation starts
        for theta in self.theta_values:
            for ratio in self.ratio_values:
                FieldParams.from_ratio(theta, ratio, self.omega1)

    @property
    def spec_hash(self) -> str:
        payload = {
            "theta_values": [f"{v:.17g}" for v in self.theta_values],
            "ratio_values": [f"{v:.17g}" for v in self.ratio_values],
            "flags_variants": [
                [f"{v:.17g}" for v in fl.astuple()] for fl in self.flags_variants
            ],
            "initial_condition": [
                f"{self.initial_condition.c1.real:.17g}",
                f"{self.initial_condition.c1.imag:.17g}",
                f"{self.initial_condition.c2.real:.17g}",
                f"{self.initial_condition.c2.imag:.17g}",
            ],
            "periods": self.periods,
            "metrics": list(self.metrics),
            "omega1": f"{self.omega1:.17g}",
        }
        digest = hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()
        return digest[:12]


@dataclass(frozen=True)
class RunRecord:
    """One metric value at one parameter point, with provenance sufficient to
    re-run the point standalone."""

    spec_hash: str
    theta: float
    ratio: float
    omega1: float
    flags: TracerFlags
    initial_condition: CoefficientPair
    periods: int
    metric: str
    value: float
    solver: str
    wall_time: float


@dataclass(frozen=True)
class SeriesFit:
    theta: float
    flags: TracerFlags
    metric: str
    fit: ScalingFit


@dataclass(frozen=True)
class PointFailure:
    theta: float
    ratio: float
    flags: TracerFlags
    message: str


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    records: tuple[RunRecord, ...]
    fits: tuple[SeriesFit, ...]
    failures: tuple[PointFailure, ...]


def _comparison_grid(params: FieldParams, flags: TracerFlags, t_end: float) -> np.ndarray:
    """Deterministic sample grid dense enough to catch the sup of the
    oscillatory deviation (step <= 0.1 / fastest frequency)."""
    gamma = rabi_frequency(params, flags).frequency
    fastest = max(gamma, params.omega1, params.omega0)
    n = int(math.ceil(t_end * fastest / 0.1)) + 1
    return np.linspace(0.0, t_end, min(max(n, 257), 2_000_001))


def evaluate_point(
    spec: SweepSpec,
    theta: float,
    ratio: float,
    flags: TracerFlags,
    cfg: IntegratorConfig | None = None,
) -> list[RunRecord]:
    """Evaluate every requested metric at one (theta, ratio, flags) point."""
    params = FieldParams.from_ratio(theta, ratio, spec.omega1)
    c0 = spec.initial_condition
    t_end = spec.periods * params.drive_period
    records: list[RunRecord] = []

    def add(metric: str, value: float, solver: str, seconds: float) -> None:
        records.append(
            RunRecord(
                spec_hash=spec.spec_hash,
                theta=theta,
                ratio=ratio,
                omega1=spec.omega1,
                flags=flags,
                initial_condition=c0,
                periods=spec.periods,
                metric=metric,
                value=float(value),
                solver=solver,
                wall_time=seconds,
            )
        )

    for metric in spec.metrics:
        t0 = time.perf_counter()
        if metric in ("sup-error", "terminal-error"):
            times = _comparison_grid(params, flags, t_end)
            exact = exact_trajectory(params, flags, c0, times)
            approx = adiabatic_trajectory(params, flags, c0, times)
            dev = np.linalg.norm(exact.states - approx.states, axis=1)
            value = dev.max() if metric == "sup-error" else dev[-1]
            add(metric, value, "exact-vs-adiabatic-closed-form", time.perf_counter() - t0)
        elif metric == "gamma-decomposition":
            contrib = rabi_contributions(params, flags)
            dt = time.perf_counter() - t0
            add(_GAMMA_DIAGONAL, abs(contrib.diagonal_rel), "closed-form-algebra", dt)
            add(_GAMMA_NONDIAGONAL, abs(contrib.nondiagonal_rel), "closed-form-algebra", dt)
        elif metric == "berry-phase":
            exact_report = berry_phase(params, which_state=1, route=ROUTE_EXACT)
            adiab_report = berry_phase(params, which_state=1, route=ROUTE_ADIABATIC)
            value = abs(wrap_angle(exact_report.geometric_phase - adiab_report.geometric_phase))
            add(metric, value, "exact-vs-adiabatic-closed-form", time.perf_counter() - t0)
        elif metric == "norm-drift":
            traj = integrate_coefficients(params, flags, c0, t_end, cfg=cfg)
            value = float(np.abs(traj.norms_sq - 1.0).max())
            add(metric, value, "numeric-ode", time.perf_counter() - t0)
        else:  # pragma: no cover - SweepSpec validation rejects unknown metrics
            raise ValueError(f"unknown metric {metric!r}")
    return records


def _evaluate_point_args(args) -> tuple[list[RunRecord], PointFailure | None]:
    spec, theta, ratio, flags = args
    try:
        return evaluate_point(spec, theta, ratio, flags), None
    except Exception as exc:  # noqa: BLE001 - per-point failures must not kill the sweep
        return [], PointFailure(theta=theta, ratio=ratio, flags=flags, message=str(exc))


def _record_sort_key(rec: RunRecord):
    return (rec.theta, rec.flags.astuple(), -rec.ratio, rec.metric)


def run_sweep(spec: SweepSpec, workers: int = 1, cfg: IntegratorConfig | None = None) -> SweepResult:
    """Run every (theta, ratio, flags) point of the sweep.

    Point failures are collected (not raised) so one bad point cannot kill a
    long sweep; callers should treat a nonempty ``failures`` as a failed run.
    Records come back sorted by (theta, flags, descending ratio, metric).
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    jobs = [
        (spec, theta, ratio, flags)
        for theta in spec.theta_values
        for flags in spec.flags_variants
        for ratio in spec.ratio_values
    ]
    records: list[RunRecord] = []
    failures: list[PointFailure] = []
    if workers == 1:
        outcomes = map(_evaluate_point_args, jobs)
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_evaluate_point_args, jobs))
    for recs, failure in outcomes:
        records.extend(recs)
        if failure is not None:
            failures.append(failure)
    records.sort(key=_record_sort_key)

    fits: list[SeriesFit] = []
    series: dict[tuple, list[tuple[float, float]]] = {}
    for rec in records:
        series.setdefault((rec.theta, rec.flags, rec.metric), []).append((rec.ratio, rec.value))
    for (theta, flags, metric), pts in sorted(series.items(), key=lambda kv: (kv[0][0], kv[0][1].astuple(), kv[0][2])):
        positive = [(r, e) for r, e in pts if e > 0.0]
        if len(positive) >= 4 and len({r for r, _ in positive}) == len(positive):
            fits.append(SeriesFit(theta=theta, flags=flags, metric=metric, fit=fit_scaling(positive)))
    return SweepResult(
        spec=spec,
        records=tuple(records),
        fits=tuple(fits),
        failures=tuple(failures),
    )

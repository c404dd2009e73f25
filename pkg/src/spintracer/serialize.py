"""CSV/JSON serialization with round-trip-safe float formatting.

All floats are printed with 17 significant digits so that parsing the text
back yields bit-identical doubles, and identical inputs yield byte-identical
files.
"""

from __future__ import annotations

import json
from typing import Iterable

import numpy as np

from .model import Trajectory
from .phases import LEAKAGE_THRESHOLD, PhaseReport, ScalingFit
from .sweep import RunRecord, SeriesFit, SweepResult

__all__ = [
    "fmt",
    "trajectory_csv",
    "TRAJECTORY_COLUMNS",
    "RECORD_COLUMNS",
    "records_csv",
    "fits_payload",
    "phase_reports_payload",
]

TRAJECTORY_COLUMNS = (
    "t",
    "re_c1",
    "im_c1",
    "re_c2",
    "im_c2",
    "prob1",
    "prob2",
    "phase1_unwrapped",
    "phase2_unwrapped",
)

RECORD_COLUMNS = (
    "spec_hash",
    "theta",
    "ratio",
    "omega1",
    "a11",
    "a22",
    "a",
    "re_c1_0",
    "im_c1_0",
    "re_c2_0",
    "im_c2_0",
    "periods",
    "metric",
    "value",
    "solver",
)


def fmt(x: float) -> str:
    """17-significant-digit decimal form; round-trips float64 exactly."""
    return format(float(x), ".17g")


def trajectory_csv(traj: Trajectory) -> str:
    """Time series CSV: amplitudes, populations, and unwrapped phases.

    The phase of an identically-zero amplitude is reported as 0.
    """
    c1, c2 = traj.states[:, 0], traj.states[:, 1]
    phase1 = np.unwrap(np.angle(c1))
    phase2 = np.unwrap(np.angle(c2))
    lines = [",".join(TRAJECTORY_COLUMNS)]
    for i in range(traj.times.size):
        lines.append(
            ",".join(
                (
                    fmt(traj.times[i]),
                    fmt(c1[i].real),
                    fmt(c1[i].imag),
                    fmt(c2[i].real),
                    fmt(c2[i].imag),
                    fmt(abs(c1[i]) ** 2),
                    fmt(abs(c2[i]) ** 2),
                    fmt(phase1[i]),
                    fmt(phase2[i]),
                )
            )
        )
    return "\n".join(lines) + "\n"


def _record_row(rec: RunRecord) -> str:
    c0 = rec.initial_condition
    return ",".join(
        (
            rec.spec_hash,
            fmt(rec.theta),
            fmt(rec.ratio),
            fmt(rec.omega1),
            fmt(rec.flags.a11),
            fmt(rec.flags.a22),
            fmt(rec.flags.a),
            fmt(c0.c1.real),
            fmt(c0.c1.imag),
            fmt(c0.c2.real),
            fmt(c0.c2.imag),
            str(rec.periods),
            rec.metric,
            fmt(rec.value),
            rec.solver,
        )
    )


def records_csv(records: Iterable[RunRecord]) -> str:
    """Sweep records CSV.  Wall times are deliberately excluded (they go to
    the side metadata file) so identical runs produce identical bytes."""
    lines = [",".join(RECORD_COLUMNS)]
    lines.extend(_record_row(rec) for rec in records)
    return "\n".join(lines) + "\n"


def _scaling_fit_payload(fit: ScalingFit) -> dict:
    return {
        "ratios": [fmt(r) for r in fit.ratios],
        "errors": [fmt(e) for e in fit.errors],
        "slope": fmt(fit.slope),
        "intercept": fmt(fit.intercept),
        "r_squared": fmt(fit.r_squared),
    }


def fits_payload(result: SweepResult) -> dict:
    """JSON-ready summary of the fitted exponents per series."""
    def fit_entry(sf: SeriesFit) -> dict:
        return {
            "theta": fmt(sf.theta),
            "flags": [fmt(v) for v in sf.flags.astuple()],
            "metric": sf.metric,
            "fit": _scaling_fit_payload(sf.fit),
        }

    return {
        "spec_hash": result.spec.spec_hash,
        "fits": [fit_entry(sf) for sf in result.fits],
    }


def phase_reports_payload(entries: list[dict]) -> str:
    """Serialize geometric-phase records (already shaped as dicts) to JSON."""
    return json.dumps({"records": entries}, indent=2) + "\n"


def phase_report_entry(theta: float, report: PhaseReport) -> dict:
    return {
        "theta": fmt(theta),
        "state": report.state,
        "route": report.route,
        "total_phase": fmt(report.total_phase),
        "dynamical_phase": fmt(report.dynamical_phase),
        "geometric_phase": fmt(report.geometric_phase),
        "residual_mixing": fmt(report.residual_mixing),
        "leakage_warning": bool(report.residual_mixing >= LEAKAGE_THRESHOLD),
    }

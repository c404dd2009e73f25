"""Geometric-phase extraction, Rabi-frequency contribution accounting, and
power-law scaling fits.

The geometric phase is defined operationally: the expansion of the state on
the instantaneous eigenbasis already factors out the dynamical phase
exp(-i E_n t), so whatever phase the expansion coefficient c_n accumulates
over one full drive period T = 2*pi/omega0 is the geometric part.  In the
adiabatic limit it evaluates to -pi(1 + cos(theta)) for the lower state and
-pi(1 - cos(theta)) for the upper one (mod 2*pi), independent of omega1 and
of T.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .closedform import (
    adiabatic_phase_rates,
    exact_trajectory,
    rabi_frequency,
)
from .integrate import IntegratorConfig, integrate_lab_frame, project_to_instantaneous
from .model import CoefficientPair, FieldParams, TracerFlags, eigensystem_at

__all__ = [
    "ROUTE_ADIABATIC",
    "ROUTE_EXACT",
    "ROUTE_NUMERIC_LAB",
    "BERRY_ROUTES",
    "LEAKAGE_THRESHOLD",
    "LeakageWarning",
    "PhaseReport",
    "RabiContributions",
    "ScalingFit",
    "wrap_angle",
    "berry_phase",
    "rabi_contributions",
    "fit_scaling",
]

ROUTE_ADIABATIC = "adiabatic"
ROUTE_EXACT = "exact"
ROUTE_NUMERIC_LAB = "numeric-lab"
BERRY_ROUTES = (ROUTE_ADIABATIC, ROUTE_EXACT, ROUTE_NUMERIC_LAB)

# Above this terminal population in the other eigenstate the "same
# eigenstate" premise of the adiabatic theorem is visibly violated and the
# extracted phase stops being meaningful.
LEAKAGE_THRESHOLD = 0.1


class LeakageWarning(UserWarning):
    """Raised when the evolved state has leaked appreciably out of the
    initial instantaneous eigenstate."""


def wrap_angle(x):
    """Principal value of an angle (or array of angles) in (-pi, pi]."""
    x = np.asarray(x, dtype=np.float64)
    w = x - 2.0 * np.pi * np.round(x / (2.0 * np.pi))
    w = np.where(w <= -np.pi, w + 2.0 * np.pi, w)
    if w.ndim == 0:
        return float(w)
    return w


@dataclass(frozen=True)
class PhaseReport:
    """Phases accumulated by one instantaneous eigenstate over a drive period.

    total_phase:
        Unwrapped phase of c_n(T)/c_n(0), radians.
    dynamical_phase:
        -E_n * T, reported separately (it is already factored out of c_n).
    geometric_phase:
        total_phase reduced to the principal value in (-pi, pi].
    residual_mixing:
        |c_m(T)| for the other state m != n; 0 in the ideal adiabatic limit.
    """

    state: int
    route: str
    total_phase: float
    dynamical_phase: float
    geometric_phase: float
    residual_mixing: float


def _unwrap_grid(params: FieldParams, flags: TracerFlags, t_end: float) -> np.ndarray:
    """Uniform grid with step <= 0.1/max(Gamma, omega1) for safe unwrapping."""
    gamma = rabi_frequency(params, flags).frequency
    step = 0.1 / max(gamma, params.omega1)
    n = int(math.ceil(t_end / step)) + 1
    return np.linspace(0.0, t_end, max(n, 33))


def _unwrapped_terminal_phase(times: np.ndarray, values: np.ndarray) -> float:
    phases = np.unwrap(np.angle(values))
    return float(phases[-1] - phases[0])


def berry_phase(
    params: FieldParams,
    which_state: int = 1,
    route: str = ROUTE_ADIABATIC,
    cfg: IntegratorConfig | None = None,
) -> PhaseReport:
    """Geometric phase of one instantaneous eigenstate over one drive period.

    Evolves c(0) = eigenstate ``which_state`` over exactly T = 2*pi/omega0
    along the requested route and reads off the phase of the surviving
    coefficient.  Routes:

    * ``"adiabatic"`` -- adiabatic closed form (exactly t-linear phase).
    * ``"exact"`` -- exact closed form, valid at every drive ratio.
    * ``"numeric-lab"`` -- lab-frame Schroedinger integration projected back
      onto the instantaneous basis.

    A :class:`LeakageWarning` is emitted when more than
    ``LEAKAGE_THRESHOLD`` of the amplitude ends up in the other eigenstate.
    """
    if which_state not in (1, 2):
        raise ValueError(f"which_state must be 1 or 2, got {which_state!r}")
    if route not in BERRY_ROUTES:
        raise ValueError(f"route {route!r} unavailable; expected one of {BERRY_ROUTES}")
    T = params.drive_period
    flags = TracerFlags(1.0, 1.0, 1.0)
    n = which_state - 1
    energy = -params.omega1 if which_state == 1 else +params.omega1
    dynamical = -energy * T

    if route == ROUTE_ADIABATIC:
        rates = adiabatic_phase_rates(params, flags)
        total = rates[n] * T
        residual = 0.0
    elif route == ROUTE_EXACT:
        c0 = CoefficientPair(1.0, 0.0) if which_state == 1 else CoefficientPair(0.0, 1.0)
        times = _unwrap_grid(params, flags, T)
        traj = exact_trajectory(params, flags, c0, times)
        total = _unwrapped_terminal_phase(times, traj.states[:, n])
        residual = float(abs(traj.states[-1, 1 - n]))
    else:
        eig = eigensystem_at(params, 0.0)
        psi0 = eig.state1 if which_state == 1 else eig.state2
        times = _unwrap_grid(params, flags, T)
        lab = integrate_lab_frame(params, psi0, T, cfg=cfg, n_samples=times.size)
        proj = project_to_instantaneous(params, lab)
        total = _unwrapped_terminal_phase(proj.times, proj.states[:, n])
        residual = float(abs(proj.states[-1, 1 - n]))

    if residual >= LEAKAGE_THRESHOLD:
        warnings.warn(
            f"residual mixing {residual:.3g} >= {LEAKAGE_THRESHOLD:g} at "
            f"omega0/omega1 = {params.ratio:.3g}; the extracted phase no longer "
            "tracks a single instantaneous eigenstate",
            LeakageWarning,
            stacklevel=2,
        )
    return PhaseReport(
        state=which_state,
        route=route,
        total_phase=total,
        dynamical_phase=dynamical,
        geometric_phase=wrap_angle(total),
        residual_mixing=residual,
    )


@dataclass(frozen=True)
class RabiContributions:
    """Contributions of the diagonal and off-diagonal terms to the Rabi
    frequency, in absolute and omega1-normalized form.

    ``diagonal`` = Gamma(a=0) - omega1 is first order in omega0/omega1;
    ``nondiagonal`` = Gamma - Gamma(a=0) is second order.  That separation in
    order is what justifies dropping only the off-diagonal terms over one
    drive period.
    """

    frequency: float
    frequency_diagonal_only: float
    frequency_adiabatic: float
    diagonal: float
    nondiagonal: float
    diagonal_rel: float
    nondiagonal_rel: float


def rabi_contributions(params: FieldParams, flags: TracerFlags) -> RabiContributions:
    """Split the Rabi frequency into diagonal and off-diagonal tracer
    contributions."""
    full = rabi_frequency(params, flags).frequency
    diag_only = rabi_frequency(params, TracerFlags(flags.a11, flags.a22, 0.0)).frequency
    adiabatic = rabi_frequency(params, flags).adiabatic_frequency
    w1 = params.omega1
    return RabiContributions(
        frequency=full,
        frequency_diagonal_only=diag_only,
        frequency_adiabatic=adiabatic,
        diagonal=diag_only - w1,
        nondiagonal=full - diag_only,
        diagonal_rel=(diag_only - w1) / w1,
        nondiagonal_rel=(full - diag_only) / w1,
    )


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares power-law fit error ~ C * ratio^slope in log-log space."""

    ratios: tuple[float, ...]
    errors: tuple[float, ...]
    slope: float
    intercept: float
    r_squared: float


def fit_scaling(points) -> ScalingFit:
    """Fit a power-law exponent to (ratio, error) pairs.

    Ordinary least squares on (log ratio, log error); the slope is the
    scaling exponent.  Requires at least 4 points with positive ratios and
    errors and distinct ratios; points are sorted by decreasing ratio.
    """
    pts = [(float(r), float(e)) for r, e in points]
    if len(pts) < 4:
        raise ValueError(f"need at least 4 points for a scaling fit, got {len(pts)}")
    if any(r <= 0.0 or e <= 0.0 for r, e in pts):
        raise ValueError("all ratios and errors must be positive for a log-log fit")
    pts.sort(key=lambda p: -p[0])
    ratios = tuple(p[0] for p in pts)
    errors = tuple(p[1] for p in pts)
    if len(set(ratios)) != len(ratios):
        raise ValueError("ratios must be distinct")
    x = np.log(ratios)
    y = np.log(errors)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot > 0.0:
        r_squared = 1.0 - ss_res / ss_tot
    else:
        r_squared = 1.0 if ss_res < 1e-30 else 0.0
    return ScalingFit(
        ratios=ratios,
        errors=errors,
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r_squared,
    )

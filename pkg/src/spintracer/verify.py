"""Built-in verification suite: the mutually-checking identities on a fixed
parameter grid, plus a fault-injection canary proving the checks can fail.

Every check reports its name, the worst residual found, the tolerance, and
the parameters at the worst point, whether it passed or not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .closedform import adiabatic_trajectory, exact_coefficients, exact_trajectory
from .integrate import (
    IntegratorConfig,
    coefficient_rhs,
    integrate_coefficients,
    integrate_lab_frame,
    integrate_rotating_frame,
    project_to_instantaneous,
    rotating_to_instantaneous,
)
from .model import (
    CoefficientPair,
    FieldParams,
    TracerFlags,
    eigensystem_at,
    hamiltonian_at,
)

__all__ = ["CheckResult", "run_verification", "GRID_THETAS", "GRID_RATIOS", "GRID_FLAGS"]

# Fixed verification grid: covers every tracer regime the solutions
# distinguish (all terms, diagonal-only, off-diagonal-only, frozen).
GRID_THETAS = (math.pi / 6, math.pi / 4, math.pi / 3, math.pi / 2)
GRID_RATIOS = (1e-1, 1e-2, 1e-3)
GRID_FLAGS = (
    TracerFlags(1.0, 1.0, 1.0),
    TracerFlags(1.0, 1.0, 0.0),
    TracerFlags(0.0, 0.0, 1.0),
    TracerFlags(0.0, 0.0, 0.0),
)

_MIXED_C0 = CoefficientPair(0.6, 0.8j)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst_residual: float
    tolerance: float
    detail: str


class _Worst:
    """Track the largest residual and where it occurred."""

    def __init__(self):
        self.value = 0.0
        self.where = ""

    def update(self, residual: float, where: str) -> None:
        if residual > self.value or not self.where:
            self.value = max(self.value, float(residual))
            self.where = where


def _finish(name: str, worst: _Worst, tol: float) -> CheckResult:
    return CheckResult(
        name=name,
        passed=worst.value < tol,
        worst_residual=worst.value,
        tolerance=tol,
        detail=worst.where,
    )


def _check_orthonormality() -> CheckResult:
    worst = _Worst()
    for theta in GRID_THETAS:
        params = FieldParams.from_ratio(theta, 0.1)
        for t in (0.0, 0.7, 3.9, 2.0 * math.pi / params.omega0):
            eig = eigensystem_at(params, t)
            basis = np.column_stack([eig.state1, eig.state2])
            gram = basis.conj().T @ basis
            res = float(np.abs(gram - np.eye(2)).max())
            worst.update(res, f"theta={theta:.6g}, t={t:.6g}")
    return _finish("eigenvector-orthonormality", worst, 1e-12)


def _check_eigenvalue_equation() -> CheckResult:
    worst = _Worst()
    for theta in GRID_THETAS:
        for ratio in GRID_RATIOS:
            params = FieldParams.from_ratio(theta, ratio)
            for t in (0.0, 1.3, 0.25 * params.drive_period):
                h = hamiltonian_at(params, t)
                eig = eigensystem_at(params, t)
                r1 = float(np.abs(h @ eig.state1 - eig.energy1 * eig.state1).max())
                r2 = float(np.abs(h @ eig.state2 - eig.energy2 * eig.state2).max())
                worst.update(max(r1, r2), f"theta={theta:.6g}, ratio={ratio:g}, t={t:.6g}")
    return _finish("eigenvalue-equation-residual", worst, 1e-12)


def _check_offdiagonal_identity() -> CheckResult:
    """The off-diagonal coupling can be written two ways: as the overlap of
    one eigenvector with the time derivative of the other, or through the
    matrix element of dH/dt divided by the energy gap.  Both sides are
    evaluated by central finite differences on a 20-point grid."""
    worst = _Worst()
    thetas = (math.pi / 6, math.pi / 4, math.pi / 3, math.pi / 2, 2.2)
    for theta in thetas:
        params = FieldParams.from_ratio(theta, 0.05)
        period = params.drive_period
        h_fd = 1e-6 * period
        for frac in (0.0, 0.21, 0.5, 0.83):
            t = frac * period
            phi1 = eigensystem_at(params, t).state1
            phi2_p = eigensystem_at(params, t + h_fd).state2
            phi2_m = eigensystem_at(params, t - h_fd).state2
            dphi2 = (phi2_p - phi2_m) / (2.0 * h_fd)
            lhs = np.vdot(phi1, dphi2)
            dh = (hamiltonian_at(params, t + h_fd) - hamiltonian_at(params, t - h_fd)) / (2.0 * h_fd)
            eig = eigensystem_at(params, t)
            rhs = -np.vdot(phi1, dh @ eig.state2) / (eig.energy1 - eig.energy2)
            scale = max(abs(lhs), abs(rhs))
            res = abs(lhs - rhs) / scale if scale > 0 else abs(lhs - rhs)
            worst.update(res, f"theta={theta:.6g}, t={t:.6g}")
    return _finish("offdiagonal-matrix-element-identity", worst, 1e-6)


def _check_hamiltonian_periodicity() -> CheckResult:
    worst = _Worst()
    for theta in GRID_THETAS:
        for ratio in GRID_RATIOS:
            params = FieldParams.from_ratio(theta, ratio)
            period = params.drive_period
            for t in (0.0, 0.37 * period, 0.77 * period):
                res = float(np.abs(hamiltonian_at(params, t + period) - hamiltonian_at(params, t)).max())
                worst.update(res, f"theta={theta:.6g}, ratio={ratio:g}, t={t:.6g}")
    return _finish("hamiltonian-periodicity", worst, 1e-12)


def _check_closed_form_unitarity(sine_sign: float) -> CheckResult:
    worst = _Worst()
    for theta in GRID_THETAS:
        for ratio in GRID_RATIOS:
            params = FieldParams.from_ratio(theta, ratio)
            times = np.linspace(0.0, params.drive_period, 257)
            for flags in GRID_FLAGS:
                for c0 in (CoefficientPair(1.0, 0.0), _MIXED_C0):
                    traj = exact_trajectory(params, flags, c0, times, _sine_sign=sine_sign)
                    res = float(np.abs(traj.norms_sq - 1.0).max())
                    worst.update(
                        res,
                        f"theta={theta:.6g}, ratio={ratio:g}, flags={flags.astuple()}",
                    )
    return _finish("closed-form-unitarity", worst, 1e-12)


def _check_ode_residual(sine_sign: float) -> CheckResult:
    """Differentiate the closed form by central differences and check it
    satisfies the tracer-tagged coefficient equations."""
    worst = _Worst()
    for theta in (math.pi / 6, math.pi / 3):
        for ratio in (1e-1, 1e-2):
            params = FieldParams.from_ratio(theta, ratio)
            h_fd = 1e-5 / params.omega1
            for flags in GRID_FLAGS:
                for t in (0.4, 2.7, 0.31 * params.drive_period):
                    c = exact_coefficients(params, flags, _MIXED_C0, t, _sine_sign=sine_sign)
                    cp = exact_coefficients(params, flags, _MIXED_C0, t + h_fd, _sine_sign=sine_sign)
                    cm = exact_coefficients(params, flags, _MIXED_C0, t - h_fd, _sine_sign=sine_sign)
                    deriv = (cp.as_array() - cm.as_array()) / (2.0 * h_fd)
                    rhs = coefficient_rhs(params, flags, t, c.as_array())
                    res = float(np.abs(deriv - rhs).max())
                    # tolerance 1e-6 * omega1; the grid uses omega1 = 1
                    worst.update(
                        res,
                        f"theta={theta:.6g}, ratio={ratio:g}, flags={flags.astuple()}, t={t:.6g}",
                    )
    return _finish("closed-form-ode-residual", worst, 1e-6)


def _check_integrator_norm_drift(cfg: IntegratorConfig) -> CheckResult:
    worst = _Worst()
    c0 = CoefficientPair(1.0, 0.0)
    for theta in GRID_THETAS:
        for ratio in GRID_RATIOS:
            params = FieldParams.from_ratio(theta, ratio)
            t_end = params.drive_period
            for flags in GRID_FLAGS:
                traj = integrate_coefficients(params, flags, c0, t_end, cfg=cfg, n_samples=257)
                worst.update(
                    float(np.abs(traj.norms_sq - 1.0).max()),
                    f"coefficient path: theta={theta:.6g}, ratio={ratio:g}, flags={flags.astuple()}",
                )
            rot = integrate_rotating_frame(
                params, TracerFlags(1.0, 1.0, 1.0), c0, t_end, cfg=cfg, n_samples=257
            )
            worst.update(
                float(np.abs(rot.norms_sq - 1.0).max()),
                f"rotating path: theta={theta:.6g}, ratio={ratio:g}",
            )
            psi0 = eigensystem_at(params, 0.0).state1
            lab = integrate_lab_frame(params, psi0, t_end, cfg=cfg, n_samples=257)
            worst.update(
                float(np.abs(lab.norms_sq - 1.0).max()),
                f"lab path: theta={theta:.6g}, ratio={ratio:g}",
            )
    return _finish("integrator-norm-drift", worst, 1e-9)


def _check_rotating_consistency(cfg: IntegratorConfig) -> CheckResult:
    worst = _Worst()
    c0 = CoefficientPair(1.0, 0.0)
    flags = TracerFlags(1.0, 1.0, 1.0)
    for theta in GRID_THETAS:
        for ratio in GRID_RATIOS:
            params = FieldParams.from_ratio(theta, ratio)
            t_end = params.drive_period
            direct = integrate_coefficients(params, flags, c0, t_end, cfg=cfg, n_samples=257)
            mapped = rotating_to_instantaneous(
                params,
                integrate_rotating_frame(params, flags, c0, t_end, cfg=cfg, n_samples=257),
            )
            res = float(np.abs(direct.states - mapped.states).max())
            worst.update(res, f"theta={theta:.6g}, ratio={ratio:g}")
    return _finish("rotating-frame-consistency", worst, 1e-8)


def _check_oracle_triangle(cfg: IntegratorConfig, sine_sign: float) -> CheckResult:
    """Closed form, direct coefficient integration, and the lab-frame route
    must agree pairwise on a shared grid."""
    worst = _Worst()
    c0 = CoefficientPair(1.0, 0.0)
    flags = TracerFlags(1.0, 1.0, 1.0)
    for theta in GRID_THETAS:
        for ratio in GRID_RATIOS:
            params = FieldParams.from_ratio(theta, ratio)
            t_end = params.drive_period
            numeric = integrate_coefficients(params, flags, c0, t_end, cfg=cfg, n_samples=257)
            closed = exact_trajectory(params, flags, c0, numeric.times, _sine_sign=sine_sign)
            psi0 = eigensystem_at(params, 0.0).state1
            lab = project_to_instantaneous(
                params, integrate_lab_frame(params, psi0, t_end, cfg=cfg, n_samples=257)
            )
            where = f"theta={theta:.6g}, ratio={ratio:g}"
            worst.update(float(np.abs(closed.states - numeric.states).max()), where + " (closed vs numeric)")
            worst.update(float(np.abs(closed.states - lab.states).max()), where + " (closed vs lab)")
            worst.update(float(np.abs(numeric.states - lab.states).max()), where + " (numeric vs lab)")
    return _finish("oracle-triangle", worst, 1e-8)


def _check_adiabatic_collapse() -> CheckResult:
    """The adiabatic solution with all flags active must equal the exact
    solution with the off-diagonal flag removed, up to the second-order
    phase-drift budget (omega0/omega1)^2 * omega1 * t."""
    worst = _Worst()
    for theta in GRID_THETAS:
        for ratio in GRID_RATIOS:
            params = FieldParams.from_ratio(theta, ratio)
            times = np.linspace(0.0, params.drive_period, 257)
            adiab = adiabatic_trajectory(params, TracerFlags(1.0, 1.0, 1.0), _MIXED_C0, times)
            exact0 = exact_trajectory(params, TracerFlags(1.0, 1.0, 0.0), _MIXED_C0, times)
            budget = max(1e-10, ratio**2 * params.omega1 * params.drive_period)
            res = float(np.abs(adiab.states - exact0.states).max()) / budget
            worst.update(res, f"theta={theta:.6g}, ratio={ratio:g} (relative to budget)")
    return _finish("adiabatic-flag-collapse", worst, 1.0)


def run_verification(inject_fault: bool = False, cfg: IntegratorConfig | None = None) -> list[CheckResult]:
    """Run the full verification suite on the built-in grid.

    ``inject_fault`` flips the sign of the sine-term bracket inside the
    closed-form evaluation used by the checks (a mutation canary): a healthy
    suite must then report unitarity/residual/oracle-triangle failures.
    """
    cfg = cfg if cfg is not None else IntegratorConfig()
    sine_sign = -1.0 if inject_fault else 1.0
    return [
        _check_orthonormality(),
        _check_eigenvalue_equation(),
        _check_offdiagonal_identity(),
        _check_hamiltonian_periodicity(),
        _check_closed_form_unitarity(sine_sign),
        _check_ode_residual(sine_sign),
        _check_integrator_norm_drift(cfg),
        _check_rotating_consistency(cfg),
        _check_oracle_triangle(cfg, sine_sign),
        _check_adiabatic_collapse(),
    ]

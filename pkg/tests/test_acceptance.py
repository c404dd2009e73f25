"""Acceptance suite.

One test per acceptance criterion, each at its stated tolerance, each
printing a single pass line (run with ``pytest tests/test_acceptance.py -v -s``):

  1. oracle triangle: closed form / coefficient ODEs / lab-frame projection
     agree pairwise to < 1e-8 over one period across the parameter grid,
     in under 30 s
  2. unitarity: < 1e-12 closed form, < 1e-9 integrators, all flag variants
  3. off-diagonal matrix-element identity under finite differences, relative
     residual < 1e-6 on a 20-point grid
  4. Rabi-frequency contribution scaling: diagonal slope 1 +- 0.05,
     off-diagonal slope 2 +- 0.1, in under 1 s
  5. adiabatic-solution sup-error slope 1 +- 0.15
  6. geometric phases: closed form to 1e-10, numeric extraction to 1e-2,
     sum rule to 1e-10
  7. fixed-step RK4 terminal-error order 4 +- 0.3
  8. verify subcommand: exit 0 clean, nonzero under the fault canary,
     in under 2 min
"""

import time

import numpy as np
import pytest

from spintracer import (
    CoefficientPair,
    FieldParams,
    IntegratorConfig,
    METHOD_FIXED_RK4,
    ROUTE_ADIABATIC,
    ROUTE_NUMERIC_LAB,
    TracerFlags,
    adiabatic_trajectory,
    berry_phase,
    eigensystem_at,
    exact_coefficients,
    exact_trajectory,
    fit_scaling,
    hamiltonian_at,
    integrate_coefficients,
    integrate_lab_frame,
    integrate_rotating_frame,
    project_to_instantaneous,
    rabi_frequency,
    wrap_angle,
)
from spintracer.cli import EXIT_OK, EXIT_VERIFICATION, main

FULL = TracerFlags(1.0, 1.0, 1.0)
C10 = CoefficientPair(1.0, 0.0)
GRID_THETAS = (np.pi / 6, np.pi / 4, np.pi / 3, np.pi / 2)
GRID_RATIOS = (1e-1, 1e-2, 1e-3)
GRID_FLAGS = (FULL, TracerFlags(1.0, 1.0, 0.0), TracerFlags(0.0, 0.0, 1.0), TracerFlags(0.0, 0.0, 0.0))
RATIO_LADDER = (1e-1, 10**-1.5, 1e-2, 10**-2.5, 1e-3)


def _report(n, label):
    print(f"\nACCEPTANCE {n} ({label}): PASS")


def test_criterion_1_oracle_triangle():
    t_start = time.perf_counter()
    worst = 0.0
    for theta in GRID_THETAS:
        for ratio in (1e-3, 1e-2, 1e-1, 1.0):
            params = FieldParams.from_ratio(theta, ratio)
            T = params.drive_period
            numeric = integrate_coefficients(params, FULL, C10, T, n_samples=257)
            closed = exact_trajectory(params, FULL, C10, numeric.times)
            lab = project_to_instantaneous(
                params,
                integrate_lab_frame(params, eigensystem_at(params, 0.0).state1, T, n_samples=257),
            )
            worst = max(
                worst,
                np.abs(closed.states - numeric.states).max(),
                np.abs(closed.states - lab.states).max(),
                np.abs(numeric.states - lab.states).max(),
            )
    elapsed = time.perf_counter() - t_start
    assert worst < 1e-8, f"worst pairwise deviation {worst:.3e}"
    assert elapsed < 30.0, f"runtime {elapsed:.1f} s exceeds 30 s"
    _report(1, f"oracle triangle, worst {worst:.2e}, {elapsed:.1f} s")


def test_criterion_2_unitarity():
    worst_closed = 0.0
    worst_numeric = 0.0
    for theta in GRID_THETAS:
        for ratio in GRID_RATIOS:
            params = FieldParams.from_ratio(theta, ratio)
            T = params.drive_period
            dense = np.linspace(0.0, T, 2001)
            for flags in GRID_FLAGS:
                closed = exact_trajectory(params, flags, C10, dense)
                worst_closed = max(worst_closed, np.abs(closed.norms_sq - 1.0).max())
                direct = integrate_coefficients(params, flags, C10, T, n_samples=257)
                rotating = integrate_rotating_frame(params, flags, C10, T, n_samples=257)
                worst_numeric = max(
                    worst_numeric,
                    np.abs(direct.norms_sq - 1.0).max(),
                    np.abs(rotating.norms_sq - 1.0).max(),
                )
            lab = integrate_lab_frame(params, eigensystem_at(params, 0.0).state1, T, n_samples=257)
            worst_numeric = max(worst_numeric, np.abs(lab.norms_sq - 1.0).max())
    assert worst_closed < 1e-12, f"closed-form norm drift {worst_closed:.3e}"
    assert worst_numeric < 1e-9, f"integrator norm drift {worst_numeric:.3e}"
    _report(2, f"unitarity, closed {worst_closed:.2e}, numeric {worst_numeric:.2e}")


def test_criterion_3_matrix_element_identity():
    worst = 0.0
    thetas = (np.pi / 6, np.pi / 4, np.pi / 3, np.pi / 2, 2.2)
    fracs = (0.0, 0.21, 0.5, 0.83)  # 5 x 4 = 20 grid points
    for theta in thetas:
        params = FieldParams.from_ratio(theta, 0.05)
        h = 1e-6 * params.drive_period
        for frac in fracs:
            t = frac * params.drive_period
            phi1 = eigensystem_at(params, t).state1
            dphi2 = (eigensystem_at(params, t + h).state2 - eigensystem_at(params, t - h).state2) / (2 * h)
            lhs = np.vdot(phi1, dphi2)
            dh = (hamiltonian_at(params, t + h) - hamiltonian_at(params, t - h)) / (2 * h)
            eig = eigensystem_at(params, t)
            rhs = -np.vdot(phi1, dh @ eig.state2) / (eig.energy1 - eig.energy2)
            worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs)))
    assert worst < 1e-6, f"relative residual {worst:.3e}"
    _report(3, f"matrix-element identity, worst relative residual {worst:.2e}")


def test_criterion_4_contribution_scaling():
    t_start = time.perf_counter()
    diag_pts, nondiag_pts = [], []
    for ratio in RATIO_LADDER:
        params = FieldParams.from_ratio(np.pi / 4, ratio)
        g_full = rabi_frequency(params, FULL).frequency
        g_diag = rabi_frequency(params, TracerFlags(1.0, 1.0, 0.0)).frequency
        diag_pts.append((ratio, abs(g_diag - 1.0)))
        nondiag_pts.append((ratio, abs(g_full - g_diag)))
    diag_fit = fit_scaling(diag_pts)
    nondiag_fit = fit_scaling(nondiag_pts)
    elapsed = time.perf_counter() - t_start
    assert diag_fit.slope == pytest.approx(1.0, abs=0.05), f"diagonal slope {diag_fit.slope}"
    assert nondiag_fit.slope == pytest.approx(2.0, abs=0.1), f"nondiagonal slope {nondiag_fit.slope}"
    assert elapsed < 1.0, f"runtime {elapsed:.2f} s exceeds 1 s"
    _report(4, f"slopes {diag_fit.slope:.3f} / {nondiag_fit.slope:.3f}, {elapsed * 1000:.0f} ms")


def test_criterion_5_adiabatic_error_scaling():
    slopes = []
    for theta in (np.pi / 6, np.pi / 4, np.pi / 3):
        pts = []
        for ratio in RATIO_LADDER:
            params = FieldParams.from_ratio(theta, ratio)
            times = np.linspace(0.0, params.drive_period, 8193)
            exact = exact_trajectory(params, FULL, C10, times)
            adiab = adiabatic_trajectory(params, FULL, C10, times)
            pts.append((ratio, np.linalg.norm(exact.states - adiab.states, axis=1).max()))
        fit = fit_scaling(pts)
        slopes.append(fit.slope)
        assert fit.slope == pytest.approx(1.0, abs=0.15), f"theta={theta}: slope {fit.slope}"
    _report(5, "adiabatic sup-error slopes " + ", ".join(f"{s:.3f}" for s in slopes))


def test_criterion_6_geometric_phases():
    worst_closed = 0.0
    worst_sum = 0.0
    for theta in (np.pi / 6, np.pi / 4, np.pi / 3, np.pi / 2, 2 * np.pi / 3, 5 * np.pi / 6):
        params = FieldParams.from_ratio(theta, 1e-2)
        g1 = berry_phase(params, 1, ROUTE_ADIABATIC).geometric_phase
        g2 = berry_phase(params, 2, ROUTE_ADIABATIC).geometric_phase
        worst_closed = max(
            worst_closed,
            abs(wrap_angle(g1 - (-np.pi * (1 + np.cos(theta))))),
            abs(wrap_angle(g2 - (-np.pi * (1 - np.cos(theta))))),
        )
        worst_sum = max(worst_sum, abs(wrap_angle(g1 + g2)))
    assert worst_closed < 1e-10, f"closed-form geometric phase deviation {worst_closed:.3e}"
    assert worst_sum < 1e-10, f"sum rule violation {worst_sum:.3e}"

    worst_lab = 0.0
    for theta in (np.pi / 4, np.pi / 2, 2 * np.pi / 3):
        params = FieldParams.from_ratio(theta, 1e-3)
        lab = berry_phase(params, 1, ROUTE_NUMERIC_LAB).geometric_phase
        adiab = berry_phase(params, 1, ROUTE_ADIABATIC).geometric_phase
        worst_lab = max(worst_lab, abs(wrap_angle(lab - adiab)))
    assert worst_lab < 1e-2, f"numeric-lab deviation {worst_lab:.3e}"
    _report(6, f"berry phases: closed {worst_closed:.2e}, lab {worst_lab:.2e}, sum {worst_sum:.2e}")


def test_criterion_7_rk4_order():
    params = FieldParams.from_ratio(np.pi / 3, 0.1)
    T = params.drive_period
    reference = exact_coefficients(params, FULL, C10, T).as_array()
    pts = []
    for n in (400, 800, 1600, 3200, 6400):  # four halvings
        cfg = IntegratorConfig(method=METHOD_FIXED_RK4, max_step=T / n)
        traj = integrate_coefficients(params, FULL, C10, T, cfg=cfg, n_samples=9)
        pts.append((T / n, np.abs(traj.states[-1] - reference).max()))
    fit = fit_scaling(pts)
    assert fit.slope == pytest.approx(4.0, abs=0.3), f"fitted order {fit.slope}"
    _report(7, f"rk4 terminal-error order {fit.slope:.3f}")


def test_criterion_8_verify_subcommand():
    t_start = time.perf_counter()
    assert main(["verify"]) == EXIT_OK
    assert main(["verify", "--inject-fault"]) == EXIT_VERIFICATION
    elapsed = time.perf_counter() - t_start
    assert elapsed < 120.0, f"runtime {elapsed:.1f} s exceeds 2 min"
    _report(8, f"verify exit codes 0 / {EXIT_VERIFICATION}, {elapsed:.1f} s")

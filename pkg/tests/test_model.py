"""Domain types, field/Hamiltonian construction, and the instantaneous
eigensystem."""

import numpy as np
import pytest

from spintracer import (
    CoefficientPair,
    FieldParams,
    FRAME_INSTANTANEOUS,
    SOLVER_EXACT,
    TracerFlags,
    Trajectory,
    eigensystem_at,
    hamiltonian_at,
    magnetic_field,
)

THETAS = (np.pi / 6, np.pi / 4, np.pi / 3, np.pi / 2, 2.5)


class TestFieldParams:
    @pytest.mark.parametrize("theta", [0.0, np.pi, -0.3, np.pi + 0.1])
    def test_theta_endpoints_rejected(self, theta):
        with pytest.raises(ValueError, match="theta"):
            FieldParams(theta=theta, omega0=0.1, omega1=1.0)

    def test_near_boundary_accepted(self):
        FieldParams(theta=1e-6, omega0=0.1, omega1=1.0)
        FieldParams(theta=np.pi - 1e-6, omega0=0.1, omega1=1.0)

    def test_omega_domains(self):
        with pytest.raises(ValueError, match="omega0"):
            FieldParams(theta=1.0, omega0=-0.1, omega1=1.0)
        with pytest.raises(ValueError, match="omega1"):
            FieldParams(theta=1.0, omega0=0.1, omega1=0.0)
        FieldParams(theta=1.0, omega0=0.0, omega1=1.0)  # static field is fine

    def test_from_ratio(self):
        p = FieldParams.from_ratio(1.0, 0.01, omega1=2.0)
        assert p.omega0 == pytest.approx(0.02)
        assert p.ratio == pytest.approx(0.01)

    def test_from_moment(self):
        # omega1 is half the splitting: moment * magnitude / 2
        p = FieldParams.from_moment(1.0, 0.1, moment=3.0, field_magnitude=4.0)
        assert p.omega1 == pytest.approx(6.0)

    def test_drive_period(self):
        p = FieldParams(theta=1.0, omega0=0.5, omega1=1.0)
        assert p.drive_period == pytest.approx(4.0 * np.pi)
        with pytest.raises(ValueError, match="period"):
            _ = FieldParams(theta=1.0, omega0=0.0, omega1=1.0).drive_period


class TestTracerFlags:
    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            TracerFlags(np.nan, 1.0, 1.0)
        with pytest.raises(ValueError):
            TracerFlags(1.0, np.inf, 1.0)

    def test_intermediate_values_allowed(self):
        fl = TracerFlags(0.5, 0.25, 0.75)
        assert fl.astuple() == (0.5, 0.25, 0.75)


class TestCoefficientPair:
    def test_normalization_helpers(self):
        c = CoefficientPair(3.0, 4.0j)
        assert not c.is_normalized()
        n = c.normalized()
        assert n.norm_sq == pytest.approx(1.0, abs=1e-15)
        assert n.c1 == pytest.approx(0.6)
        assert n.c2 == pytest.approx(0.8j)

    def test_array_round_trip(self):
        c = CoefficientPair(0.6, 0.8j)
        assert CoefficientPair.from_array(c.as_array()) == c


class TestMagneticField:
    def test_equator_alignment(self):
        # at theta = pi/2 and zero drive phase the field points along x
        p = FieldParams(theta=np.pi / 2, omega0=0.3, omega1=1.0)
        np.testing.assert_allclose(magnetic_field(p, 0.0), [1.0, 0.0, 0.0], atol=1e-15)

    def test_polar_limit(self):
        # theta -> 0 drives the field to the z axis (validation-only input)
        p = FieldParams(theta=1e-6, omega0=0.3, omega1=1.0)
        np.testing.assert_allclose(magnetic_field(p, 1.234), [0.0, 0.0, 1.0], atol=1e-5)

    @pytest.mark.parametrize("theta", THETAS)
    def test_constant_norm(self, theta):
        p = FieldParams(theta=theta, omega0=0.7, omega1=1.0)
        for t in np.linspace(0.0, 30.0, 17):
            assert np.linalg.norm(magnetic_field(p, t, magnitude=2.5)) == pytest.approx(2.5, abs=1e-14)


class TestHamiltonian:
    @pytest.mark.parametrize("theta", THETAS)
    @pytest.mark.parametrize("t", [0.0, 0.9, 17.3])
    def test_eigenvalues_and_trace(self, theta, t):
        p = FieldParams(theta=theta, omega0=0.4, omega1=1.7)
        h = hamiltonian_at(p, t)
        assert abs(np.trace(h)) < 1e-14
        np.testing.assert_allclose(np.linalg.eigvalsh(h), [-1.7, 1.7], atol=1e-13)

    def test_hermitian(self):
        p = FieldParams(theta=1.1, omega0=0.4, omega1=1.0)
        h = hamiltonian_at(p, 2.2)
        np.testing.assert_allclose(h, h.conj().T, atol=1e-16)

    def test_matches_pauli_assembly(self):
        """Oracle: assemble moment * B(t).S from explicit Pauli matrices."""
        sx = np.array([[0, 1], [1, 0]], dtype=complex)
        sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
        sz = np.array([[1, 0], [0, -1]], dtype=complex)
        theta, omega1 = np.pi / 3, 1.0
        p = FieldParams(theta=theta, omega0=1.0, omega1=omega1)
        t = np.pi / 4  # drive phase omega0*t = pi/4
        bx, by, bz = magnetic_field(p, t)
        # moment*B = 2*omega1 with unit |B|; spin operator is sigma/2
        oracle = 2.0 * omega1 * (bx * sx + by * sy + bz * sz) / 2.0
        np.testing.assert_allclose(hamiltonian_at(p, t), oracle, atol=1e-15)
        # frozen spot values (mpmath, dps=30)
        h = hamiltonian_at(p, t)
        assert h[0, 0] == pytest.approx(0.5, abs=1e-15)
        assert h[0, 1].real == pytest.approx(0.61237243569579452455, abs=1e-15)
        assert h[0, 1].imag == pytest.approx(-0.61237243569579452455, abs=1e-15)

    def test_periodicity(self):
        p = FieldParams(theta=0.8, omega0=0.25, omega1=1.0)
        T = p.drive_period
        for t in (0.0, 1.7, 5.1):
            assert np.abs(hamiltonian_at(p, t + T) - hamiltonian_at(p, t)).max() < 1e-12


class TestEigensystem:
    @pytest.mark.parametrize("theta", THETAS)
    @pytest.mark.parametrize("t", [0.0, 0.37, 12.9])
    def test_eigenvalue_equation(self, theta, t):
        p = FieldParams(theta=theta, omega0=0.6, omega1=1.3)
        h = hamiltonian_at(p, t)
        eig = eigensystem_at(p, t)
        assert np.abs(h @ eig.state1 - eig.energy1 * eig.state1).max() < 1e-12
        assert np.abs(h @ eig.state2 - eig.energy2 * eig.state2).max() < 1e-12
        assert eig.energy1 == -1.3
        assert eig.energy2 == +1.3

    def test_equator_amplitudes(self):
        eig = eigensystem_at(FieldParams(theta=np.pi / 2, omega0=0.1, omega1=1.0), 0.0)
        assert eig.sin_half_theta == pytest.approx(1 / np.sqrt(2), abs=1e-15)
        assert eig.cos_half_theta == pytest.approx(1 / np.sqrt(2), abs=1e-15)

    @pytest.mark.parametrize("theta", THETAS)
    def test_orthonormality(self, theta):
        p = FieldParams(theta=theta, omega0=0.45, omega1=1.0)
        for t in np.linspace(0.0, p.drive_period, 9):
            eig = eigensystem_at(p, t)
            basis = np.column_stack([eig.state1, eig.state2])
            np.testing.assert_allclose(basis.conj().T @ basis, np.eye(2), atol=1e-12)

    @pytest.mark.parametrize("theta", THETAS)
    def test_amplitude_identity(self, theta):
        eig = eigensystem_at(FieldParams(theta=theta, omega0=0.1, omega1=1.0), 0.0)
        assert eig.sin_half_theta**2 + eig.cos_half_theta**2 == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("theta", [np.pi / 6, np.pi / 3, np.pi / 2, 2.2])
    @pytest.mark.parametrize("frac", [0.0, 0.21, 0.5, 0.83, 0.97])
    def test_offdiagonal_coupling_identity(self, theta, frac):
        """The overlap of state1 with the time derivative of state2 equals
        minus the dH/dt matrix element over the energy gap.

        Oracle: central finite differences with step 1e-6 * drive period.
        """
        p = FieldParams(theta=theta, omega0=0.05, omega1=1.0)
        t = frac * p.drive_period
        h_fd = 1e-6 * p.drive_period
        phi1 = eigensystem_at(p, t).state1
        dphi2 = (eigensystem_at(p, t + h_fd).state2 - eigensystem_at(p, t - h_fd).state2) / (2 * h_fd)
        lhs = np.vdot(phi1, dphi2)
        dh = (hamiltonian_at(p, t + h_fd) - hamiltonian_at(p, t - h_fd)) / (2 * h_fd)
        eig = eigensystem_at(p, t)
        rhs = -np.vdot(phi1, dh @ eig.state2) / (eig.energy1 - eig.energy2)
        assert abs(lhs - rhs) / max(abs(lhs), abs(rhs)) < 1e-6

    def test_coupling_closed_form(self):
        # <state1 | d/dt state2> = i*omega0*sin(theta/2)*cos(theta/2)
        p = FieldParams(theta=0.9, omega0=0.3, omega1=1.0)
        h_fd = 1e-7 * p.drive_period
        t = 1.1
        phi1 = eigensystem_at(p, t).state1
        dphi2 = (eigensystem_at(p, t + h_fd).state2 - eigensystem_at(p, t - h_fd).state2) / (2 * h_fd)
        expected = 1j * p.omega0 * p.sin_half_theta * p.cos_half_theta
        assert np.vdot(phi1, dphi2) == pytest.approx(expected, abs=1e-8)


class TestTrajectory:
    def test_validation(self):
        times = np.array([0.0, 1.0, 2.0])
        states = np.zeros((3, 2), dtype=complex)
        Trajectory(times, states, FRAME_INSTANTANEOUS, SOLVER_EXACT)
        with pytest.raises(ValueError, match="increasing"):
            Trajectory(times[::-1].copy(), states, FRAME_INSTANTANEOUS, SOLVER_EXACT)
        with pytest.raises(ValueError, match="shape"):
            Trajectory(times, states[:2], FRAME_INSTANTANEOUS, SOLVER_EXACT)
        with pytest.raises(ValueError, match="frame"):
            Trajectory(times, states, "sideways", SOLVER_EXACT)
        with pytest.raises(ValueError, match="solver"):
            Trajectory(times, states, FRAME_INSTANTANEOUS, "guesswork")

    def test_accessors(self):
        times = np.array([0.0, 0.5])
        states = np.array([[1.0, 0.0], [0.6, 0.8j]], dtype=complex)
        traj = Trajectory(times, states, FRAME_INSTANTANEOUS, SOLVER_EXACT)
        assert len(traj) == 2
        assert traj.sample(0) == CoefficientPair(1.0, 0.0)
        assert traj.terminal == CoefficientPair(0.6, 0.8j)
        np.testing.assert_allclose(traj.norms_sq, [1.0, 1.0])

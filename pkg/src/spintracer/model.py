"""Physical model: rotating magnetic field, spin-1/2 Hamiltonian, and the
instantaneous eigensystem, plus the shared domain types.

Conventions (used throughout the package):

* hbar = 1 everywhere.
* ``omega1`` is half the level splitting: the two instantaneous energies are
  -omega1 and +omega1, so the transition frequency is 2*omega1.  If the
  coupling is given as a magnetic moment ``mu`` and field magnitude ``b``,
  then omega1 = mu*b/2 (see :meth:`FieldParams.from_moment`).
* The fixed spinor basis is (spin-up, spin-down) along z, in that order.
* The eigenvector phase convention is fixed once and never re-gauged; the
  geometric-phase bookkeeping depends on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "FRAME_INSTANTANEOUS",
    "FRAME_ROTATING",
    "FRAME_LAB",
    "SOLVER_EXACT",
    "SOLVER_ADIABATIC",
    "SOLVER_NUMERIC_ODE",
    "SOLVER_NUMERIC_LAB",
    "FieldParams",
    "TracerFlags",
    "CoefficientPair",
    "SpinHalfEigensystem",
    "Trajectory",
    "magnetic_field",
    "hamiltonian_at",
    "eigensystem_at",
]

# Frame tags for Trajectory
FRAME_INSTANTANEOUS = "instantaneous-basis"
FRAME_ROTATING = "rotating"
FRAME_LAB = "lab-spinor"

# Solver provenance tags for Trajectory
SOLVER_EXACT = "exact"
SOLVER_ADIABATIC = "adiabatic"
SOLVER_NUMERIC_ODE = "numeric-ode"
SOLVER_NUMERIC_LAB = "numeric-lab"

_FRAMES = (FRAME_INSTANTANEOUS, FRAME_ROTATING, FRAME_LAB)
_SOLVERS = (SOLVER_EXACT, SOLVER_ADIABATIC, SOLVER_NUMERIC_ODE, SOLVER_NUMERIC_LAB)


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class FieldParams:
    """Geometry and frequencies of the precessing field.

    Parameters
    ----------
    theta:
        Polar tilt of the field axis, radians.  Must lie strictly inside
        (0, pi); at the endpoints the transverse coupling degenerates
        (sin(theta/2)*cos(theta/2) = 0) and the adiabatic analysis does not
        apply, so they are rejected.
    omega0:
        Drive (precession) angular frequency, rad per unit time, >= 0.
    omega1:
        Half the level splitting, rad per unit time, > 0.
    """

    theta: float
    omega0: float
    omega1: float

    def __post_init__(self):
        theta = _require_finite("theta", self.theta)
        omega0 = _require_finite("omega0", self.omega0)
        omega1 = _require_finite("omega1", self.omega1)
        if not 0.0 < theta < math.pi:
            raise ValueError(
                f"theta must lie strictly in (0, pi); got {theta!r}. "
                "The axis-aligned endpoints are rejected because the "
                "transverse coupling vanishes there."
            )
        if omega0 < 0.0:
            raise ValueError(f"omega0 must be >= 0, got {omega0!r}")
        if omega1 <= 0.0:
            raise ValueError(f"omega1 must be > 0, got {omega1!r}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "omega0", omega0)
        object.__setattr__(self, "omega1", omega1)

    @classmethod
    def from_ratio(cls, theta: float, ratio: float, omega1: float = 1.0) -> "FieldParams":
        """Build from the dimensionless drive ratio omega0/omega1."""
        return cls(theta=theta, omega0=ratio * omega1, omega1=omega1)

    @classmethod
    def from_moment(cls, theta: float, omega0: float, moment: float, field_magnitude: float) -> "FieldParams":
        """Build from a magnetic moment and field magnitude: omega1 = moment*b/2."""
        return cls(theta=theta, omega0=omega0, omega1=0.5 * moment * field_magnitude)

    @property
    def ratio(self) -> float:
        """Dimensionless drive ratio omega0/omega1."""
        return self.omega0 / self.omega1

    @property
    def drive_period(self) -> float:
        """One full field precession, 2*pi/omega0."""
        if self.omega0 == 0.0:
            raise ValueError("drive period undefined for omega0 = 0 (static field)")
        return 2.0 * math.pi / self.omega0

    @property
    def sin_half_theta(self) -> float:
        return math.sin(0.5 * self.theta)

    @property
    def cos_half_theta(self) -> float:
        return math.cos(0.5 * self.theta)


@dataclass(frozen=True)
class TracerFlags:
    """Bookkeeping multipliers attached to the coefficient-equation terms.

    ``a11`` and ``a22`` scale the two diagonal (phase) terms, ``a`` scales the
    off-diagonal (mixing) terms.  Canonical values are 0 and 1; intermediate
    real values are allowed for continuation studies.
    """

    a11: float
    a22: float
    a: float

    def __post_init__(self):
        object.__setattr__(self, "a11", _require_finite("a11", self.a11))
        object.__setattr__(self, "a22", _require_finite("a22", self.a22))
        object.__setattr__(self, "a", _require_finite("a", self.a))

    def astuple(self) -> tuple[float, float, float]:
        return (self.a11, self.a22, self.a)


@dataclass(frozen=True)
class CoefficientPair:
    """Complex amplitudes (c1, c2) in the instantaneous eigenbasis."""

    c1: complex
    c2: complex

    def __post_init__(self):
        c1, c2 = complex(self.c1), complex(self.c2)
        for name, z in (("c1", c1), ("c2", c2)):
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise ValueError(f"{name} must be finite, got {z!r}")
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "c2", c2)

    @property
    def norm_sq(self) -> float:
        return abs(self.c1) ** 2 + abs(self.c2) ** 2

    def is_normalized(self, tol: float = 1e-9) -> bool:
        return abs(self.norm_sq - 1.0) <= tol

    def normalized(self) -> "CoefficientPair":
        n = math.sqrt(self.norm_sq)
        if n == 0.0:
            raise ValueError("cannot normalize the zero pair")
        return CoefficientPair(self.c1 / n, self.c2 / n)

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2], dtype=np.complex128)

    @classmethod
    def from_array(cls, values) -> "CoefficientPair":
        values = np.asarray(values)
        if values.shape != (2,):
            raise ValueError(f"expected shape (2,), got {values.shape}")
        return cls(complex(values[0]), complex(values[1]))


@dataclass(frozen=True)
class SpinHalfEigensystem:
    """Instantaneous eigensystem of the spin-1/2 Hamiltonian at one time.

    ``state1`` is the lower-energy eigenvector (energy -omega1, spin
    anti-aligned with the field axis), ``state2`` the upper one (+omega1).
    Components are in the fixed (up, down) basis.  The energies do not depend
    on time; the eigenvectors rotate with the drive phase.
    """

    sin_half_theta: float
    cos_half_theta: float
    energy1: float
    energy2: float
    state1: np.ndarray
    state2: np.ndarray

    def __post_init__(self):
        for arr in (self.state1, self.state2):
            arr.setflags(write=False)


@dataclass(frozen=True)
class Trajectory:
    """Time-ordered two-component samples plus frame/solver provenance.

    ``states`` has shape (n, 2).  In the instantaneous-basis and rotating
    frames the columns are expansion coefficients; in the lab-spinor frame
    they are spinor components in the fixed (up, down) basis.
    """

    times: np.ndarray
    states: np.ndarray
    frame: str
    solver: str

    def __post_init__(self):
        times = np.asarray(self.times, dtype=np.float64)
        states = np.asarray(self.states, dtype=np.complex128)
        if times.ndim != 1:
            raise ValueError(f"times must be one-dimensional, got shape {times.shape}")
        if states.shape != (times.size, 2):
            raise ValueError(
                f"states shape {states.shape} does not match times length {times.size}"
            )
        if times.size >= 2 and not np.all(np.diff(times) > 0.0):
            raise ValueError("times must be strictly increasing")
        if self.frame not in _FRAMES:
            raise ValueError(f"unknown frame tag {self.frame!r}; expected one of {_FRAMES}")
        if self.solver not in _SOLVERS:
            raise ValueError(f"unknown solver tag {self.solver!r}; expected one of {_SOLVERS}")
        times.setflags(write=False)
        states.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    def __len__(self) -> int:
        return self.times.size

    @property
    def c1(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def c2(self) -> np.ndarray:
        return self.states[:, 1]

    @property
    def norms_sq(self) -> np.ndarray:
        return np.abs(self.states[:, 0]) ** 2 + np.abs(self.states[:, 1]) ** 2

    def sample(self, i: int) -> CoefficientPair:
        return CoefficientPair(complex(self.states[i, 0]), complex(self.states[i, 1]))

    @property
    def terminal(self) -> CoefficientPair:
        return self.sample(-1)


def magnetic_field(params: FieldParams, t: float, magnitude: float = 1.0) -> np.ndarray:
    """Field vector at time t: constant norm, precessing about z.

    The magnitude is 1 by default; physically it is folded into omega1
    (omega1 = moment*magnitude/2), so only the direction matters elsewhere.
    """
    s, c = math.sin(params.theta), math.cos(params.theta)
    phase = params.omega0 * t
    return magnitude * np.array([s * math.cos(phase), s * math.sin(phase), c])


def hamiltonian_at(params: FieldParams, t: float) -> np.ndarray:
    """2x2 Hermitian Hamiltonian at time t, eigenvalues -omega1 and +omega1.

    H(t) = moment * B(t) . S with hbar = 1 reduces to
    omega1 * (n_hat(t) . sigma) where n_hat is the field direction.
    """
    w1 = params.omega1
    ct, st = math.cos(params.theta), math.sin(params.theta)
    phase = np.exp(-1j * params.omega0 * t)
    return np.array(
        [
            [w1 * ct, w1 * st * phase],
            [w1 * st * np.conj(phase), -w1 * ct],
        ],
        dtype=np.complex128,
    )


def eigensystem_at(params: FieldParams, t: float) -> SpinHalfEigensystem:
    """Instantaneous eigenvectors and (time-independent) energies at time t.

    state1 = (-sin(theta/2), cos(theta/2) e^{i omega0 t}), energy -omega1;
    state2 = (cos(theta/2), sin(theta/2) e^{i omega0 t}), energy +omega1.
    The phase convention is fixed exactly in this form.
    """
    a = params.sin_half_theta
    d = params.cos_half_theta
    phase = np.exp(1j * params.omega0 * t)
    state1 = np.array([-a, d * phase], dtype=np.complex128)
    state2 = np.array([d, a * phase], dtype=np.complex128)
    return SpinHalfEigensystem(
        sin_half_theta=a,
        cos_half_theta=d,
        energy1=-params.omega1,
        energy2=+params.omega1,
        state1=state1,
        state2=state2,
    )

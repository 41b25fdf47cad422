"""Otto strokes for a two-level (or generic d-level) working substance.

Energies are in units with hbar = 1.  Eigenvalues of a
:class:`StrokeHamiltonian` are sorted ascending, so label 0 is the ground
state and, for a TLS, label 1 the excited state.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .linops import Channel, reset_channel, sandwich

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class Direction(enum.Enum):
    COMPRESSION = "compression"
    EXPANSION = "expansion"


class Occupation(enum.Enum):
    """How the bath occupation number is computed from ``beta * gap``.

    ``GIBBS_CONSISTENT`` uses the Bose factor ``1/(exp(x) - 1)``, for which
    the Gibbs state is stationary under the GKSL generator.  ``AS_PRINTED``
    uses ``1/(exp(x) + 1)``; its stationary state is not the Gibbs state.
    """

    GIBBS_CONSISTENT = "gibbs"
    AS_PRINTED = "printed"


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    # make each eigenvector's largest-magnitude component real and positive
    vecs = vecs.copy()
    for j in range(vecs.shape[1]):
        col = vecs[:, j]
        k = int(np.argmax(np.abs(col) + 1e-12 * np.arange(len(col))[::-1]))
        vecs[:, j] = col * (abs(col[k]) / col[k])
    return vecs


@dataclass(frozen=True, eq=False)
class StrokeHamiltonian:
    """Spectral data of the working-substance Hamiltonian at one cycle point."""

    energies: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.energies, dtype=float)
        v = np.asarray(self.vectors, dtype=complex)
        if v.shape != (len(e), len(e)):
            raise ValueError("eigenvector matrix does not match number of energies")
        if np.abs(v.conj().T @ v - np.eye(len(e))).max() > 1e-12:
            raise ValueError("eigenvectors are not orthonormal")
        e.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "energies", e)
        object.__setattr__(self, "vectors", v)

    @classmethod
    def from_matrix(cls, h: np.ndarray) -> "StrokeHamiltonian":
        h = np.asarray(h, dtype=complex)
        if np.abs(h - h.conj().T).max() > 1e-12:
            raise ValueError("Hamiltonian is not Hermitian")
        evals, evecs = np.linalg.eigh(0.5 * (h + h.conj().T))
        return cls(evals, _fix_phases(evecs))

    @classmethod
    def tls(cls, omega: float) -> "StrokeHamiltonian":
        """TLS with energies -omega/2, +omega/2 in the computational basis."""
        if omega <= 0:
            raise ValueError("level splitting must be positive")
        # computational |1> is the ground state of (omega/2) sigma_z
        vecs = np.array([[0, 1], [1, 0]], dtype=complex)
        return cls(np.array([-omega / 2, omega / 2]), vecs)

    @property
    def dim(self) -> int:
        return len(self.energies)

    @property
    def matrix(self) -> np.ndarray:
        return (self.vectors * self.energies) @ self.vectors.conj().T

    def projector(self, m: int) -> np.ndarray:
        v = self.vectors[:, m]
        return np.outer(v, v.conj())

    def projectors(self) -> list[np.ndarray]:
        return [self.projector(m) for m in range(self.dim)]

    def to_eigenbasis(self, x: np.ndarray) -> np.ndarray:
        return self.vectors.conj().T @ x @ self.vectors

    @property
    def gap(self) -> float:
        return float(self.energies[-1] - self.energies[0])


@dataclass(frozen=True)
class Parametric:
    """Two-parameter TLS work stroke: transition probability and phase."""

    r: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.r <= 1.0:
            raise ValueError(f"transition probability must lie in [0, 1], got {self.r}")


@dataclass(frozen=True)
class Protocol:
    """Time-resolved TLS drive rotating sigma_x into sigma_z while ramping the splitting."""

    omega1: float
    omega2: float
    tau_u: float
    steps: int = 10_000

    def __post_init__(self):
        if self.tau_u < 0:
            raise ValueError("stroke duration must be non-negative")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")

    def hamiltonian(self, t, direction: Direction = Direction.COMPRESSION) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        tau = self.tau_u
        s = t / tau
        angle = np.pi * s / 2
        if direction is Direction.COMPRESSION:
            lam = self.omega1 * (1 - s) + self.omega2 * s
            cz, cx = np.sin(angle), np.cos(angle)
        else:
            lam = self.omega1 * s + self.omega2 * (1 - s)
            cz, cx = np.cos(angle), np.sin(angle)
        coeff = lam / 2
        return (coeff * cz)[..., None, None] * SIGMA_Z + (coeff * cx)[..., None, None] * SIGMA_X

    def endpoints(self) -> tuple[StrokeHamiltonian, StrokeHamiltonian]:
        """Hamiltonians at the start and end of compression."""
        return (
            StrokeHamiltonian.from_matrix(self.omega1 / 2 * SIGMA_X),
            StrokeHamiltonian.from_matrix(self.omega2 / 2 * SIGMA_Z),
        )


@dataclass(frozen=True)
class BathSpec:
    beta: float
    gamma: float
    tau_b: float
    occupation: Occupation = Occupation.GIBBS_CONSISTENT

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("inverse temperature must be positive")
        if self.gamma < 0 or self.tau_b < 0:
            raise ValueError("rate and duration must be non-negative")


@dataclass(frozen=True)
class PerfectReset:
    """Cold stroke that replaces any state by the Gibbs state at ``beta``."""

    beta: float

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("inverse temperature must be positive")


def occupation_number(beta: float, gap: float, convention: Occupation = Occupation.GIBBS_CONSISTENT) -> float:
    x = beta * gap
    if convention is Occupation.GIBBS_CONSISTENT:
        return float(1.0 / np.expm1(x))
    return float(1.0 / (np.exp(x) + 1.0))


def effective_rate(h: StrokeHamiltonian, bath: BathSpec) -> float:
    """Population relaxation rate ``gamma (2 n + 1)`` of the thermal channel."""
    n = occupation_number(bath.beta, h.gap, bath.occupation)
    return bath.gamma * (2 * n + 1)


def stationary_excited_population(h: StrokeHamiltonian, bath: BathSpec) -> float:
    n = occupation_number(bath.beta, h.gap, bath.occupation)
    return n / (2 * n + 1)


# ----------------------------------------------------------------------------
# work strokes


def parametric_unitary(
    spec: Parametric,
    h_from: StrokeHamiltonian,
    h_to: StrokeHamiltonian,
    direction: Direction = Direction.COMPRESSION,
) -> np.ndarray:
    """TLS work-stroke unitary with transition probability ``r`` and phase ``phi``.

    For compression ``h_from`` is the Hamiltonian at point 1 and ``h_to`` the
    one at point 2; the returned operator maps the eigenbasis of ``h_from``
    to that of ``h_to``.  For expansion pass the same pair in the same order:
    the result is the motion-reversed operator ``Theta U1^dagger Theta^dagger``
    with ``Theta`` complex conjugation in the two eigenbases, which maps
    ``h_to`` eigenstates back onto ``h_from`` eigenstates.
    """
    if h_from.dim != 2 or h_to.dim != 2:
        raise ValueError("the parametric work stroke is defined for two-level systems only")
    a = np.sqrt(1.0 - spec.r)
    b = np.sqrt(spec.r)
    # rows: labels of h_to (ground, excited); columns: labels of h_from
    m1 = np.array(
        [[a, b * np.exp(-1j * spec.phi)], [-b * np.exp(1j * spec.phi), a]],
        dtype=complex,
    )
    if direction is Direction.COMPRESSION:
        return h_to.vectors @ m1 @ h_from.vectors.conj().T
    return h_from.vectors @ m1.T @ h_to.vectors.conj().T


def _su2_exp(h: np.ndarray, dt: float) -> np.ndarray:
    """``exp(-i h dt)`` for a stack of traceless Hermitian 2x2 matrices."""
    nz = h[..., 0, 0].real
    nx = h[..., 0, 1].real
    ny = -h[..., 0, 1].imag
    norm = np.sqrt(nx**2 + ny**2 + nz**2)
    theta = norm * dt
    with np.errstate(invalid="ignore", divide="ignore"):
        sinc = np.where(norm > 0, np.sin(theta) / np.where(norm > 0, norm, 1.0), dt)
    out = np.empty(h.shape, dtype=complex)
    c = np.cos(theta)
    out[..., 0, 0] = c - 1j * sinc * nz
    out[..., 1, 1] = c + 1j * sinc * nz
    out[..., 0, 1] = -1j * sinc * (nx - 1j * ny)
    out[..., 1, 0] = -1j * sinc * (nx + 1j * ny)
    return out


def _ordered_product(mats: np.ndarray) -> np.ndarray:
    """``mats[-1] @ ... @ mats[0]`` by pairwise reduction."""
    while len(mats) > 1:
        if len(mats) % 2:
            mats = np.concatenate([mats, np.eye(2, dtype=complex)[None]], axis=0)
        mats = mats[1::2] @ mats[0::2]
    return mats[0]


def protocol_unitary(spec: Protocol, direction: Direction = Direction.COMPRESSION, *, steps: int | None = None) -> np.ndarray:
    """Time-ordered evolution operator of the driven stroke (midpoint rule)."""
    n = spec.steps if steps is None else steps
    if spec.tau_u == 0:
        return np.eye(2, dtype=complex)
    dt = spec.tau_u / n
    mid = (np.arange(n) + 0.5) * dt
    u = _ordered_product(_su2_exp(spec.hamiltonian(mid, direction), dt))
    if np.abs(u.conj().T @ u - np.eye(2)).max() > 1e-10:
        raise ArithmeticError("work-stroke integrator lost unitarity")
    return u


def protocol_step_error(spec: Protocol, direction: Direction = Direction.COMPRESSION) -> float:
    """Operator-norm change when the step count is doubled."""
    u = protocol_unitary(spec, direction)
    u2 = protocol_unitary(spec, direction, steps=2 * spec.steps)
    return float(np.linalg.norm(u - u2, 2))


@dataclass(frozen=True)
class TransitionParams:
    r: float
    phi: float
    phase_undefined: bool = False
    not_two_parameter: bool = False
    residual: float = 0.0


def effective_transition_params(
    u: np.ndarray, h_from: StrokeHamiltonian, h_to: StrokeHamiltonian, *, tol: float = 1e-8
) -> TransitionParams:
    """Invert the two-parameter parametrization of a TLS compression unitary.

    ``phi`` is measured relative to the phase of the no-transition amplitude,
    which is the combination that enters the cycle when the expansion is the
    motion reverse of the compression.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or h_from.dim != 2 or h_to.dim != 2:
        raise ValueError("effective transition parameters are defined for two-level systems only")
    if np.abs(u.conj().T @ u - np.eye(2)).max() > 1e-8:
        raise ValueError("input is not unitary")
    m = h_to.vectors.conj().T @ u @ h_from.vectors
    flip = m[1, 0]
    r = float(min(max(abs(flip) ** 2, 0.0), 1.0))
    undefined = abs(flip) < 1e-12 or abs(m[0, 0]) < 1e-12
    if abs(flip) < 1e-12:
        phi = 0.0
    elif abs(m[0, 0]) < 1e-12:
        phi = float(np.angle(-flip) % (2 * np.pi))
    else:
        phi = float((np.angle(-flip) - np.angle(m[0, 0])) % (2 * np.pi))
    recon = h_to.vectors.conj().T @ parametric_unitary(Parametric(r, phi), h_from, h_to) @ h_from.vectors
    # best global phase aligning m with the reconstruction
    overlap = np.vdot(recon, m)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    residual = float(np.abs(m - phase * recon).max())
    return TransitionParams(r, phi, undefined, residual > tol, residual)


# ----------------------------------------------------------------------------
# isochores


def gibbs_state(h: StrokeHamiltonian, beta: float) -> np.ndarray:
    if beta < 0:
        raise ValueError("inverse temperature must be non-negative")
    shifted = h.energies - h.energies.min()
    weights = np.exp(-beta * shifted)
    weights /= weights.sum()
    return (h.vectors * weights) @ h.vectors.conj().T


def lindblad_generator(h: StrokeHamiltonian, bath: BathSpec) -> np.ndarray:
    """Column-stacked GKSL generator with jump operators between the two eigenstates."""
    if h.dim != 2:
        raise ValueError("the thermal channel is defined for two-level systems only")
    n = occupation_number(bath.beta, h.gap, bath.occupation)
    ground, excited = h.vectors[:, 0], h.vectors[:, 1]
    lower = np.outer(ground, excited.conj())
    raise_ = lower.conj().T
    ident = np.eye(2)
    hm = h.matrix
    gen = -1j * (sandwich(hm, ident) - sandwich(ident, hm))
    for rate, jump in ((bath.gamma * (n + 1), lower), (bath.gamma * n, raise_)):
        jj = jump.conj().T @ jump
        gen = gen + rate * (sandwich(jump, jump.conj().T) - 0.5 * sandwich(jj, ident) - 0.5 * sandwich(ident, jj))
    return gen


def thermal_channel(h: StrokeHamiltonian, bath: BathSpec | PerfectReset) -> Channel:
    """Isochore channel: GKSL evolution for ``tau_b``, or an exact reset to Gibbs."""
    if isinstance(bath, PerfectReset):
        return reset_channel(gibbs_state(h, bath.beta))
    return Channel(h.dim, expm(lindblad_generator(h, bath) * bath.tau_b))

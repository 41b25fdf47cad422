"""Cycle channels and steady states under the five monitoring schemes.

Every monitored cycle map is a weighted sum of conditional blocks
``S[m, m']`` labelled by two index vectors ``m = (m1, m2, m3, m4)`` that
select energy eigenstates at the four cycle points (H1, H2, H2, H1).  The
weights ``Lambda[m, m']`` carry all scheme dependence.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .linops import Channel, compose, fixed_point, sandwich, unitary_channel, vec
from .pointer import suppression_factor, validate_width
from .strokes import (
    BathSpec,
    Direction,
    Parametric,
    PerfectReset,
    Protocol,
    StrokeHamiltonian,
    parametric_unitary,
    protocol_unitary,
    thermal_channel,
)

# energy differences below this (relative to the spectrum scale) count as zero
GAP_SNAP = 1e-12


class Scheme(enum.Enum):
    UM = "UM"
    TPM = "TPM"
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"

    @classmethod
    def parse(cls, name: str) -> "Scheme":
        try:
            return cls(name.strip().upper())
        except ValueError:
            raise ValueError(f"unknown scheme {name!r}") from None


POINTER_COUNT = {Scheme.UM: 0, Scheme.TPM: 0, Scheme.S1: 4, Scheme.S2: 3, Scheme.S3: 2}


@dataclass(frozen=True)
class WorkUnitaries:
    """Explicit compression and expansion unitaries (any dimension)."""

    u1: np.ndarray
    u2: np.ndarray


@dataclass(frozen=True)
class SchemeConfig:
    scheme: Scheme
    widths: tuple[float, ...] = ()

    def __post_init__(self):
        scheme = self.scheme if isinstance(self.scheme, Scheme) else Scheme.parse(self.scheme)
        widths = tuple(validate_width(s) for s in self.widths)
        if len(widths) != POINTER_COUNT[scheme]:
            raise ValueError(
                f"scheme {scheme.value} needs {POINTER_COUNT[scheme]} pointer widths, got {len(widths)}"
            )
        object.__setattr__(self, "scheme", scheme)
        object.__setattr__(self, "widths", widths)

    @classmethod
    def uniform(cls, scheme, sigma: float | None = None) -> "SchemeConfig":
        scheme = scheme if isinstance(scheme, Scheme) else Scheme.parse(scheme)
        n = POINTER_COUNT[scheme]
        if n and sigma is None:
            raise ValueError(f"scheme {scheme.value} needs a pointer width")
        return cls(scheme, (sigma,) * n)

    @property
    def is_uniform(self) -> bool:
        return len(set(self.widths)) <= 1


@dataclass(frozen=True, eq=False)
class CycleSpec:
    """All engine parameters of one Otto cycle.

    ``h1`` is the Hamiltonian at points 1 and 4, ``h2`` at points 2 and 3.
    The hot isochore acts at ``h2``, the cold one at ``h1``.
    """

    h1: StrokeHamiltonian
    h2: StrokeHamiltonian
    work_stroke: Parametric | Protocol | WorkUnitaries
    hot: BathSpec | PerfectReset | Channel
    cold: BathSpec | PerfectReset | Channel

    def __post_init__(self):
        if self.h1.dim != self.h2.dim:
            raise ValueError("Hamiltonians at the two cycle points have different dimensions")
        b_hot = getattr(self.hot, "beta", None)
        b_cold = getattr(self.cold, "beta", None)
        if b_hot is not None and b_cold is not None and not b_cold > b_hot:
            raise ValueError("engine ordering requires beta_c > beta_h")

    @property
    def dim(self) -> int:
        return self.h1.dim

    @cached_property
    def unitaries(self) -> tuple[np.ndarray, np.ndarray]:
        ws = self.work_stroke
        if isinstance(ws, Parametric):
            return (
                parametric_unitary(ws, self.h1, self.h2, Direction.COMPRESSION),
                parametric_unitary(ws, self.h1, self.h2, Direction.EXPANSION),
            )
        if isinstance(ws, Protocol):
            return protocol_unitary(ws, Direction.COMPRESSION), protocol_unitary(ws, Direction.EXPANSION)
        return np.asarray(ws.u1, dtype=complex), np.asarray(ws.u2, dtype=complex)

    def _bath(self, bath, h: StrokeHamiltonian) -> Channel:
        return bath if isinstance(bath, Channel) else thermal_channel(h, bath)

    @cached_property
    def hot_channel(self) -> Channel:
        return self._bath(self.hot, self.h2)

    @cached_property
    def cold_channel(self) -> Channel:
        return self._bath(self.cold, self.h1)

    @cached_property
    def point_hamiltonians(self) -> tuple[StrokeHamiltonian, ...]:
        return (self.h1, self.h2, self.h2, self.h1)

    @cached_property
    def index_vectors(self) -> np.ndarray:
        """All index vectors ``m`` as rows, in lexicographic order."""
        return np.array(list(itertools.product(range(self.dim), repeat=4)), dtype=int)

    @cached_property
    def path_values(self) -> dict[str, np.ndarray]:
        """Point energies and per-stroke work/heat for every index vector."""
        m = self.index_vectors
        e = [h.energies[m[:, k]] for k, h in enumerate(self.point_hamiltonians)]
        w1 = e[1] - e[0]
        qh = e[2] - e[1]
        w3 = e[3] - e[2]
        return {"e1": e[0], "e2": e[1], "e3": e[2], "e4": e[3], "w1": w1, "qh": qh, "w3": w3, "w": w1 + w3}

    @cached_property
    def energy_scale(self) -> float:
        return max(np.abs(self.h1.energies).max(), np.abs(self.h2.energies).max(), 1.0)

    @cached_property
    def blocks(self) -> np.ndarray:
        """Conditional blocks as an array indexed ``[i, j]`` over index vectors.

        ``blocks[i, j]`` is the Liouville matrix of ``S[m_i, m_j]``.
        """
        d = self.dim
        u1, u2 = self.unitaries
        p1 = self.h1.projectors()
        p2 = self.h2.projectors()
        # first-half Kraus-like pieces A[m1, m2] = P2[m2] U1 P1[m1]; second half B[m3, m4] = P1[m4] U2 P2[m3]
        a = np.array([[p2[j] @ u1 @ p1[i] for j in range(d)] for i in range(d)]).reshape(d * d, d, d)
        b = np.array([[p1[j] @ u2 @ p2[i] for j in range(d)] for i in range(d)]).reshape(d * d, d, d)
        lh = self.hot_channel.liouville
        lc = self.cold_channel.liouville
        # X -> A X A'^dagger  has Liouville matrix conj(A') kron A
        inner = np.array([[lh @ sandwich(a[i], a[j].conj().T) for j in range(d * d)] for i in range(d * d)])
        outer = np.array([[lc @ sandwich(b[i], b[j].conj().T) for j in range(d * d)] for i in range(d * d)])
        n = d * d
        # S[(i_a, i_b), (j_a, j_b)] = outer[i_b, j_b] @ inner[i_a, j_a]
        full = np.einsum("bdxy,acyz->abcdxz", outer, inner)
        return full.reshape(n * n, n * n, d * d, d * d)

    def block(self, m, mp) -> np.ndarray:
        """Liouville matrix of the conditional block for index vectors ``m`` and ``m'``."""
        d = self.dim
        m = tuple(int(k) for k in m)
        mp = tuple(int(k) for k in mp)
        if len(m) != 4 or len(mp) != 4 or not all(0 <= k < d for k in m + mp):
            raise IndexError(f"index vectors must have four entries in [0, {d})")
        i = int(np.ravel_multi_index(m, (d,) * 4))
        j = int(np.ravel_multi_index(mp, (d,) * 4))
        return self.blocks[i, j]

    def _snap(self, x: np.ndarray) -> np.ndarray:
        return np.where(np.abs(x) <= GAP_SNAP * self.energy_scale, 0.0, x)

    def pair_gap(self, key: str) -> np.ndarray:
        """Matrix of differences ``value[m] - value[m']`` for one path quantity."""
        v = self.path_values[key]
        return self._snap(v[:, None] - v[None, :])


def suppression_weights(cycle: CycleSpec, config: SchemeConfig) -> np.ndarray:
    """``Lambda[m, m']`` for every pair of index vectors."""
    n = len(cycle.index_vectors)
    s = config.scheme
    if s is Scheme.UM:
        return np.ones((n, n))
    if s is Scheme.TPM:
        return np.eye(n)
    if s is Scheme.S1:
        keys = [("e1", 0), ("e2", 1), ("e3", 2), ("e4", 3)]
    elif s is Scheme.S2:
        keys = [("w1", 0), ("qh", 1), ("w3", 2)]
    else:
        keys = [("w", 0), ("qh", 1)]
    lam = np.ones((n, n))
    for key, k in keys:
        lam = lam * suppression_factor(cycle.pair_gap(key), config.widths[k])
    return lam


def conditional_block(cycle: CycleSpec, m, mp) -> Channel:
    """Conditional (trace-non-preserving) map ``S[m, m']`` of one cycle."""
    return Channel(cycle.dim, cycle.block(m, mp))


def unmonitored_channel(cycle: CycleSpec) -> Channel:
    u1, u2 = cycle.unitaries
    return compose(
        cycle.cold_channel,
        compose(unitary_channel(u2), compose(cycle.hot_channel, unitary_channel(u1))),
    )


def cycle_channel(cycle: CycleSpec, config: SchemeConfig, *, check: bool = True) -> Channel:
    """Full-cycle CPTP map for the requested monitoring scheme."""
    if config.scheme is Scheme.UM:
        ch = unmonitored_channel(cycle)
    else:
        lam = suppression_weights(cycle, config)
        ch = Channel(cycle.dim, np.einsum("ij,ijxy->xy", lam, cycle.blocks))
    if check and not (ch.is_trace_preserving() and ch.is_completely_positive()):
        raise ArithmeticError(f"{config.scheme.value} cycle map failed the CPTP check")
    return ch


def steady_state_for_scheme(cycle: CycleSpec, config: SchemeConfig) -> np.ndarray:
    return fixed_point(cycle_channel(cycle, config))


@dataclass(frozen=True)
class NondegeneracyReport:
    """Pairs ``m != m'`` whose scheme-relevant energy differences all vanish.

    ``s2_collisions`` lists pairs with equal compression work, hot heat and
    expansion work; if any exist, S2 at zero width does not reduce to TPM.
    ``s3_collisions`` does the same for total work and hot heat.
    """

    s2_collisions: list = field(default_factory=list)
    s3_collisions: list = field(default_factory=list)
    zero_work_collisions: list = field(default_factory=list)

    @property
    def s2_tpm_limit(self) -> bool:
        return not self.s2_collisions

    @property
    def s3_tpm_limit(self) -> bool:
        return not self.s3_collisions


def nondegeneracy_check(cycle: CycleSpec) -> NondegeneracyReport:
    m = cycle.index_vectors
    n = len(m)
    off = ~np.eye(n, dtype=bool)
    g = {k: cycle.pair_gap(k) for k in ("w1", "qh", "w3", "w")}
    s2 = off & (g["w1"] == 0) & (g["qh"] == 0) & (g["w3"] == 0)
    s3 = off & (g["w"] == 0) & (g["qh"] == 0)
    w = cycle._snap(cycle.path_values["w"])
    zero = off & (w[:, None] == 0) & (w[None, :] == 0)

    def pairs(mask):
        return [(tuple(m[i]), tuple(m[j])) for i, j in zip(*np.nonzero(np.triu(mask)))]

    return NondegeneracyReport(pairs(s2), pairs(s3), pairs(zero))

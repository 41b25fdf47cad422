"""Closed-form averages and work variances for a perfectly thermalizing cold stroke.

Regime: TLS with energies -omega/2, +omega/2, parametric work strokes
``(r, phi)`` with the expansion equal to the motion reverse of the
compression, a finite hot isochore and a cold stroke that resets the
substance to the cold Gibbs state.  All pointers have the same width.

``gamma_h`` is the population relaxation rate of the hot isochore, i.e.
``gamma (2 n + 1)`` for the GKSL generator with bare rate ``gamma``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .strokes import Occupation


@dataclass(frozen=True)
class PerfectCoolingParams:
    omega1: float
    omega2: float
    beta_c: float
    beta_h: float
    gamma_h: float
    tau_b: float
    r: float
    phi: float = 0.0
    sigma: float = math.inf
    occupation: Occupation = Occupation.GIBBS_CONSISTENT

    def __post_init__(self):
        if self.gamma_h < 0 or self.tau_b < 0 or self.sigma < 0:
            raise ValueError("rates, durations and widths must be non-negative")
        if not 0 <= self.r <= 1:
            raise ValueError("transition probability must lie in [0, 1]")

    @property
    def n_cold(self) -> float:
        """Excited population of the cold Gibbs state."""
        return 1.0 / (math.exp(self.beta_c * self.omega1) + 1.0)

    @property
    def n_hot(self) -> float:
        """Excited population the hot isochore relaxes towards."""
        x = self.beta_h * self.omega2
        if self.occupation is Occupation.GIBBS_CONSISTENT:
            return 1.0 / (math.exp(x) + 1.0)
        n = 1.0 / (math.exp(x) + 1.0)
        return n / (2 * n + 1)

    @property
    def decay(self) -> float:
        return math.exp(-self.gamma_h * self.tau_b)

    @property
    def polarization(self) -> float:
        return math.tanh(self.beta_c * self.omega1 / 2)

    @property
    def coherence_phase(self) -> float:
        return 2 * self.phi - self.omega2 * self.tau_b

    @property
    def mixing(self) -> float:
        """Weight ``exp(-omega2**2 / (4 sigma**2))`` of the unmonitored value."""
        if math.isinf(self.sigma):
            return 1.0
        if self.sigma == 0:
            return 0.0
        return math.exp(-self.omega2**2 / (4 * self.sigma**2))


def w_avg_tpm_perfect(p: PerfectCoolingParams) -> float:
    w1, w2, r = p.omega1, p.omega2, p.r
    nh, nc, e = p.n_hot, p.n_cold, p.decay
    return (
        (1 - e) * ((1 - 2 * r) * w1 - w2) * nh
        + (w2 * (1 - 2 * r) - w1) * nc
        + r * (w2 + w1)
        - e * (r + (1 - 2 * r) * nc) * (w2 - (1 - 2 * r) * w1)
    )


def coherence_shift(p: PerfectCoolingParams) -> float:
    """``<w>_UM - <w>_TPM``: the oscillating contribution of compression coherence."""
    return (
        -2 * math.exp(-0.5 * p.gamma_h * p.tau_b) * p.r * (1 - p.r) * p.omega1
        * math.cos(p.coherence_phase) * p.polarization
    )


def coherence_envelope(p: PerfectCoolingParams) -> float:
    return 2 * math.exp(-0.5 * p.gamma_h * p.tau_b) * p.r * (1 - p.r) * p.omega1 * p.polarization


def w_avg_um_perfect(p: PerfectCoolingParams) -> float:
    return w_avg_tpm_perfect(p) + coherence_shift(p)


def w_avg_schemes_perfect(p: PerfectCoolingParams) -> tuple[float, float, float]:
    """Average work for S1, S2 and S3."""
    tpm = w_avg_tpm_perfect(p)
    um = tpm + coherence_shift(p)
    x = p.mixing
    s12 = x * um + (1 - x) * tpm
    return s12, s12, um


def w_var_tpm_perfect(p: PerfectCoolingParams) -> float:
    """Work variance of the TPM scheme by enumerating the 16 classical paths."""
    w1, w2, r = p.omega1, p.omega2, p.r
    e1 = (-w1 / 2, w1 / 2)
    e2 = (-w2 / 2, w2 / 2)
    flip = np.array([[1 - r, r], [r, 1 - r]])
    nh, decay = p.n_hot, p.decay
    hot = np.array([[1 - nh, nh], [1 - nh, nh]]) * (1 - decay) + np.eye(2) * decay
    start = (1 - p.n_cold, p.n_cold)
    mean = second = 0.0
    for m1, m2, m3, m4 in itertools.product(range(2), repeat=4):
        prob = start[m1] * flip[m1, m2] * hot[m2, m3] * flip[m3, m4]
        work = e2[m2] - e1[m1] + e1[m4] - e2[m3]
        mean += prob * work
        second += prob * work * work
    return second - mean * mean


def w_var_schemes_perfect(p: PerfectCoolingParams) -> tuple[float, float, float, float]:
    """Second work cumulants for S1, S2, S3 and TPM."""
    tpm_var = w_var_tpm_perfect(p)
    if math.isinf(p.sigma):
        return math.inf, math.inf, math.inf, tpm_var
    tpm = w_avg_tpm_perfect(p)
    x = p.mixing
    c = math.cos(p.coherence_phase)
    pol = p.polarization
    rr = p.r * (1 - p.r)
    half = math.exp(-0.5 * p.gamma_h * p.tau_b)
    bracket = p.omega1**2 - 2 * p.omega1 * tpm * pol
    linear = 2 * half * rr * bracket * c
    quadratic = 4 * half**2 * pol**2 * p.omega1**2 * rr**2 * c**2
    s2 = p.sigma**2
    v1 = tpm_var + 4 * s2 - x * linear - x**2 * quadratic
    v2 = tpm_var + 2 * s2 - x * linear - x**2 * quadratic
    v3 = tpm_var + s2 - linear - quadratic
    return v1, v2, v3, tpm_var

"""Gaussian pointer model of a weak energy measurement.

A pointer width of ``0`` is the projective limit and ``math.inf`` means no
measurement at all.  Both are handled as exact branches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .strokes import StrokeHamiltonian


def validate_width(sigma: float) -> float:
    sigma = float(sigma)
    if math.isnan(sigma) or sigma < 0:
        raise ValueError(f"pointer width must be >= 0 or inf, got {sigma}")
    return sigma


def suppression_factor(gap, sigma: float):
    """Coherence suppression ``exp(-gap**2 / (8 sigma**2))``.

    Works elementwise on arrays of gaps.
    """
    sigma = validate_width(sigma)
    gap = np.asarray(gap, dtype=float)
    if math.isinf(sigma):
        out = np.ones_like(gap)
    elif sigma == 0:
        out = (gap == 0).astype(float)
    else:
        out = np.exp(-(gap**2) / (8 * sigma**2))
    return out if out.ndim else float(out)


def gaussian(x, mean, sigma):
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * ((x - mean) / sigma) ** 2) / (math.sqrt(2 * math.pi) * sigma)


@dataclass(frozen=True)
class Mixture1D:
    """Weighted sum of normal densities; zero width means a point mass."""

    weights: np.ndarray
    means: np.ndarray
    widths: np.ndarray

    def pdf(self, x) -> np.ndarray:
        """Density on ``x``; point masses are omitted."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for w, mu, s in zip(self.weights, self.means, self.widths):
            if s > 0:
                out = out + w * gaussian(x, mu, s)
        return out

    def mean(self) -> float:
        return float(np.sum(self.weights * self.means))

    def total(self) -> float:
        return float(np.sum(self.weights))


def conditional_state(rho: np.ndarray, h: StrokeHamiltonian, sigma: float, x: float) -> np.ndarray:
    """Unnormalized post-measurement state for pointer outcome ``x``.

    In the projective limit the outcome is snapped to the nearest energy and
    the result is ``Pi_m rho Pi_m`` (a probability rather than a density).
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (h.dim, h.dim):
        raise ValueError("state and Hamiltonian dimensions differ")
    sigma = validate_width(sigma)
    projs = h.projectors()
    e = h.energies
    if math.isinf(sigma):
        raise ValueError("an infinitely wide pointer has no outcome density; the state is undisturbed")
    if sigma == 0:
        dist = np.abs(e - x)
        hit = np.flatnonzero(dist == dist.min())
        return sum(projs[m] @ rho @ projs[m] for m in hit)
    out = np.zeros_like(rho)
    for m in range(h.dim):
        for mp in range(h.dim):
            weight = suppression_factor(e[m] - e[mp], sigma) * gaussian(x, (e[m] + e[mp]) / 2, sigma)
            out = out + weight * (projs[m] @ rho @ projs[mp])
    return out


def averaged_state(rho: np.ndarray, h: StrokeHamiltonian, sigma: float) -> np.ndarray:
    """Post-measurement state with the outcome discarded (integral over ``x``)."""
    rho = np.asarray(rho, dtype=complex)
    sigma = validate_width(sigma)
    if math.isinf(sigma):
        return rho.copy()
    e = h.energies
    lam = suppression_factor(e[:, None] - e[None, :], sigma)
    return h.vectors @ (h.to_eigenbasis(rho) * lam) @ h.vectors.conj().T


def outcome_density(rho: np.ndarray, h: StrokeHamiltonian, sigma: float) -> Mixture1D:
    """Pointer outcome distribution as a Gaussian mixture centred on the energies."""
    sigma = validate_width(sigma)
    if math.isinf(sigma):
        raise ValueError("an infinitely wide pointer has no normalizable outcome density")
    pops = np.real(np.diag(h.to_eigenbasis(np.asarray(rho, dtype=complex))))
    return Mixture1D(pops.copy(), h.energies.copy(), np.full(h.dim, sigma))

"""Joint work/heat statistics, moments and state diagnostics.

Work is counted as work done on the working substance, so an engine has
``<w> < 0`` and ``<q_h> > 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linops import vec
from .pointer import Mixture1D
from .schemes import CycleSpec, Scheme, SchemeConfig, suppression_weights
from .strokes import StrokeHamiltonian

WEIGHT_SUM_TOL = 1e-8
IMAG_TOL = 1e-12
MAX_ORDER = 4


@dataclass(frozen=True, eq=False)
class GaussianMixture2D:
    """Signed mixture of bivariate normals over ``(w, q_h)``.

    Individual weights may be negative (interference terms); the total
    density is a genuine probability density.  A zero covariance block is a
    point mass.
    """

    weights: np.ndarray
    means: np.ndarray
    covs: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        mu = np.asarray(self.means, dtype=float).reshape(-1, 2)
        c = np.asarray(self.covs, dtype=float).reshape(-1, 2, 2)
        if not len(w) == len(mu) == len(c):
            raise ValueError("weights, means and covariances must have the same length")
        for arr in (w, mu, c):
            arr.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "means", mu)
        object.__setattr__(self, "covs", c)

    def __len__(self):
        return len(self.weights)

    def total_weight(self) -> float:
        return float(self.weights.sum())

    def merged(self, decimals: int = 12) -> "GaussianMixture2D":
        """Combine components sharing the same mean and covariance."""
        keys = np.round(np.column_stack([self.means, self.covs.reshape(-1, 4)]), decimals) + 0.0
        uniq, inverse = np.unique(keys, axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)
        weights = np.zeros(len(uniq))
        np.add.at(weights, inverse, self.weights)
        first = np.zeros(len(uniq), dtype=int)
        first[inverse[::-1]] = np.arange(len(inverse))[::-1]
        return GaussianMixture2D(weights, self.means[first], self.covs[first])

    def pdf(self, w, q) -> np.ndarray:
        """Joint density; requires every covariance to be non-singular."""
        w = np.asarray(w, dtype=float)
        q = np.asarray(q, dtype=float)
        out = np.zeros(np.broadcast(w, q).shape)
        for weight, mu, c in zip(self.weights, self.means, self.covs):
            det = c[0, 0] * c[1, 1] - c[0, 1] ** 2
            if det <= 0:
                raise ValueError("pdf is undefined for components with singular covariance")
            dw, dq = w - mu[0], q - mu[1]
            quad = (c[1, 1] * dw**2 - 2 * c[0, 1] * dw * dq + c[0, 0] * dq**2) / det
            out = out + weight * np.exp(-0.5 * quad) / (2 * math.pi * math.sqrt(det))
        return out


def _path_means(cycle: CycleSpec) -> tuple[np.ndarray, np.ndarray]:
    pv = cycle.path_values
    return pv["w"], pv["qh"]


def scheme_covariance(config: SchemeConfig) -> np.ndarray:
    """Pointer-noise covariance of ``(w, q_h)`` shared by all components."""
    s = config.scheme
    sq = [x * x for x in config.widths]
    if s is Scheme.TPM:
        return np.zeros((2, 2))
    if s is Scheme.S1:
        heat = sq[1] + sq[2]
        return np.array([[sum(sq), -heat], [-heat, heat]])
    if s is Scheme.S2:
        return np.array([[sq[0] + sq[2], 0.0], [0.0, sq[1]]])
    if s is Scheme.S3:
        return np.array([[sq[0], 0.0], [0.0, sq[1]]])
    raise ValueError("no measurement record exists for UM; its work distribution is undefined")


def block_traces(cycle: CycleSpec, rho: np.ndarray) -> np.ndarray:
    """``Tr S[m, m'](rho)`` for all pairs of index vectors."""
    ident = vec(np.eye(cycle.dim)).conj()
    return np.einsum("x,ijxy,y->ij", ident, cycle.blocks, vec(np.asarray(rho, dtype=complex)))


def joint_distribution(cycle: CycleSpec, config: SchemeConfig, rho_ss: np.ndarray) -> GaussianMixture2D:
    """Exact joint distribution of total work and hot-bath heat at the steady state."""
    cov = scheme_covariance(config)
    if np.any(np.isinf(cov)):
        raise ValueError("an infinitely wide pointer gives no normalizable distribution")
    lam = suppression_weights(cycle, config)
    t = block_traces(cycle, rho_ss) * lam
    imag = np.abs((t + t.T).imag).max()
    if imag > IMAG_TOL:
        raise ArithmeticError(f"conjugate blocks do not pair up (residual imaginary part {imag:.3g})")
    # pair (m, m') with (m', m): their complex weights are conjugates
    upper = np.triu(np.ones_like(lam, dtype=bool), k=1)
    merged = np.where(upper, 2 * t.real, 0.0) + np.diag(np.diag(t).real)
    keep = (lam != 0) & (upper | np.eye(len(lam), dtype=bool))
    i, j = np.nonzero(keep)
    w, q = _path_means(cycle)
    weights = merged[i, j]
    means = np.column_stack([(w[i] + w[j]) / 2, (q[i] + q[j]) / 2])
    covs = np.broadcast_to(cov, (len(weights), 2, 2))
    total = weights.sum()
    if abs(total - 1) > WEIGHT_SUM_TOL:
        raise ArithmeticError(f"distribution weights sum to {total}, not 1")
    return GaussianMixture2D(weights, means, covs).merged()


def characteristic_function(dist: GaussianMixture2D, k1, k2) -> complex | np.ndarray:
    """``E[exp(i k1 w + i k2 q_h)]``; broadcasts over ``k1`` and ``k2``."""
    k1 = np.asarray(k1, dtype=float)
    k2 = np.asarray(k2, dtype=float)
    kk1, kk2 = k1[..., None], k2[..., None]
    mu, c = dist.means, dist.covs
    phase = kk1 * mu[:, 0] + kk2 * mu[:, 1]
    quad = kk1**2 * c[:, 0, 0] + 2 * kk1 * kk2 * c[:, 0, 1] + kk2**2 * c[:, 1, 1]
    out = np.sum(dist.weights * np.exp(1j * phase - 0.5 * quad), axis=-1)
    return complex(out) if out.ndim == 0 else out


def _central_moment(cov: np.ndarray, labels: list[int]) -> float:
    """Isserlis' theorem for a zero-mean Gaussian."""
    if not labels:
        return 1.0
    if len(labels) % 2:
        return 0.0
    first, rest = labels[0], labels[1:]
    total = 0.0
    for k, other in enumerate(rest):
        total += cov[first, other] * _central_moment(cov, rest[:k] + rest[k + 1 :])
    return total


def moments(dist: GaussianMixture2D, n: int, m: int = 0) -> float:
    """Raw moment ``<w**n q_h**m>`` computed from the mixture parameters."""
    if n < 0 or m < 0 or n + m > MAX_ORDER:
        raise ValueError(f"moment order ({n}, {m}) not supported; need n, m >= 0 and n + m <= {MAX_ORDER}")
    total = 0.0
    for weight, mu, c in zip(dist.weights, dist.means, dist.covs):
        acc = 0.0
        for a in range(n + 1):
            for b in range(m + 1):
                central = _central_moment(c, [0] * a + [1] * b)
                if central == 0.0:
                    continue
                acc += math.comb(n, a) * math.comb(m, b) * mu[0] ** (n - a) * mu[1] ** (m - b) * central
        total += weight * acc
    return float(total)


@dataclass(frozen=True)
class Cumulants:
    w: float
    w2c: float
    qh: float


def cumulants(dist: GaussianMixture2D) -> Cumulants:
    mean_w = moments(dist, 1, 0)
    return Cumulants(mean_w, moments(dist, 2, 0) - mean_w**2, moments(dist, 0, 1))


def marginal_work(dist: GaussianMixture2D) -> Mixture1D:
    """Work marginal; components with equal mean and width are combined."""
    keys = np.round(np.column_stack([dist.means[:, 0], dist.covs[:, 0, 0]]), 12) + 0.0
    uniq, inverse = np.unique(keys, axis=0, return_inverse=True)
    weights = np.zeros(len(uniq))
    np.add.at(weights, inverse.reshape(-1), dist.weights)
    means = np.zeros(len(uniq))
    var = np.zeros(len(uniq))
    means[inverse.reshape(-1)] = dist.means[:, 0]
    var[inverse.reshape(-1)] = dist.covs[:, 0, 0]
    return Mixture1D(weights, means, np.sqrt(var))


# ----------------------------------------------------------------------------
# unmonitored energetics


def stroke_states(cycle: CycleSpec, rho1: np.ndarray) -> list[np.ndarray]:
    """States at points 1-4 of the unmonitored cycle starting from ``rho1``."""
    u1, u2 = cycle.unitaries
    rho2 = u1 @ rho1 @ u1.conj().T
    rho3 = cycle.hot_channel(rho2)
    rho4 = u2 @ rho3 @ u2.conj().T
    return [np.asarray(rho1, dtype=complex), rho2, rho3, rho4]


def unmonitored_averages(cycle: CycleSpec, rho1: np.ndarray) -> tuple[float, float]:
    """Average work and hot heat from energy bookkeeping along the unmonitored cycle."""
    r1, r2, r3, r4 = stroke_states(cycle, rho1)
    h1, h2 = cycle.h1.matrix, cycle.h2.matrix

    def energy(h, r):
        return float(np.trace(h @ r).real)

    work = energy(h2, r2) - energy(h1, r1) + energy(h1, r4) - energy(h2, r3)
    heat = energy(h2, r3) - energy(h2, r2)
    return work, heat


def scheme_cumulants(cycle: CycleSpec, config: SchemeConfig, rho_ss: np.ndarray) -> Cumulants:
    """Average work, work variance and average hot heat for one scheme.

    The unmonitored cycle has no work distribution, so its variance is NaN.
    Infinite pointer widths give an infinite variance with means equal to
    the unmonitored ones.
    """
    if config.scheme is Scheme.UM:
        w, q = unmonitored_averages(cycle, rho_ss)
        return Cumulants(w, math.nan, q)
    if any(math.isinf(s) for s in config.widths):
        # means do not depend on pointer noise; evaluate with the noise removed
        c = cumulants(_distribution_without_noise(cycle, config, rho_ss))
        return Cumulants(c.w, math.inf, c.qh)
    return cumulants(joint_distribution(cycle, config, rho_ss))


def _distribution_without_noise(cycle: CycleSpec, config: SchemeConfig, rho_ss: np.ndarray) -> GaussianMixture2D:
    lam = suppression_weights(cycle, config)
    t = block_traces(cycle, rho_ss) * lam
    w, q = _path_means(cycle)
    weights = t.real.reshape(-1)
    means = np.column_stack([((w[:, None] + w[None, :]) / 2).reshape(-1), ((q[:, None] + q[None, :]) / 2).reshape(-1)])
    return GaussianMixture2D(weights, means, np.zeros((len(weights), 2, 2))).merged()


# ----------------------------------------------------------------------------
# state diagnostics


def _hermitian_log(rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    evals, evecs = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    return evals, evecs


def kl_divergence(rho: np.ndarray, rho_ref: np.ndarray) -> float:
    """Quantum relative entropy ``Tr rho (ln rho - ln rho_ref)`` in nats."""
    rho = np.asarray(rho, dtype=complex)
    rho_ref = np.asarray(rho_ref, dtype=complex)
    p, _ = _hermitian_log(rho)
    s, v = _hermitian_log(rho_ref)
    if s.min() <= 0:
        raise ValueError("reference state must have full rank")
    p = np.clip(p, 0.0, None)
    entropy_term = float(np.sum(p[p > 0] * np.log(p[p > 0])))
    log_ref = (v * np.log(s)) @ v.conj().T
    cross = float(np.trace(rho @ log_ref).real)
    out = entropy_term - cross
    if out < 0:
        if out < -1e-12:
            raise ArithmeticError(f"relative entropy came out negative ({out})")
        out = 0.0
    return out


def l1_coherence(rho: np.ndarray, h: StrokeHamiltonian) -> float:
    """Sum of absolute off-diagonal elements in the eigenbasis of ``h``."""
    x = h.to_eigenbasis(np.asarray(rho, dtype=complex))
    return float(np.abs(x).sum() - np.abs(np.diag(x)).sum())

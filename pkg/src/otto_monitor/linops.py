"""Dense channel algebra for finite-dimensional quantum systems.

Channels are stored in the Liouville representation with the
column-stacking convention: ``vec(X) = X.reshape(-1, order="F")`` so that
``vec(A X B) = (B.T kron A) vec(X)``.  A Kraus operator ``K`` therefore
contributes ``conj(K) kron K``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
CHOI_TOL = 1e-8
DEGENERACY_TOL = 1e-9


class NonUniqueSteadyStateError(ValueError):
    """The eigenvalue-1 eigenspace of a channel is not one-dimensional."""


class ConvergenceError(RuntimeError):
    pass


def vec(x: np.ndarray) -> np.ndarray:
    """Column-stack a matrix."""
    return np.asarray(x).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(v).reshape((dim, dim), order="F")


def sandwich(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Liouville matrix of ``X -> left @ X @ right``."""
    return np.kron(np.asarray(right).T, np.asarray(left))


def check_density_matrix(rho: np.ndarray, *, name: str = "rho") -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity; return ``rho`` as a complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] < 2:
        raise ValueError(f"{name} must be a square matrix of size >= 2, got {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise ValueError(f"{name} has non-finite entries")
    if np.abs(rho - rho.conj().T).max() > HERMITIAN_TOL:
        raise ValueError(f"{name} is not Hermitian")
    if abs(np.trace(rho) - 1.0) > TRACE_TOL:
        raise ValueError(f"{name} does not have unit trace (trace={np.trace(rho)})")
    if np.linalg.eigvalsh(rho).min() < -PSD_TOL:
        raise ValueError(f"{name} is not positive semidefinite")
    return rho


@dataclass(frozen=True, eq=False)
class Channel:
    """A linear map on ``dim x dim`` matrices, stored as a ``dim**2 x dim**2`` matrix."""

    dim: int
    liouville: np.ndarray

    def __post_init__(self):
        mat = np.array(self.liouville, dtype=complex)
        n = self.dim * self.dim
        if mat.shape != (n, n):
            raise ValueError(f"Liouville matrix must be {n}x{n}, got {mat.shape}")
        if not np.all(np.isfinite(mat)):
            raise ValueError("Liouville matrix has non-finite entries")
        mat.setflags(write=False)
        object.__setattr__(self, "liouville", mat)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return unvec(self.liouville @ vec(x), self.dim)

    def choi(self) -> np.ndarray:
        """Choi matrix ``sum_ij |i><j| kron Phi(|i><j|)``."""
        d = self.dim
        # column-stacked Liouville entries: L[(a,b),(i,j)] with row-major index a + d*b
        tensor = self.liouville.reshape(d, d, d, d, order="F")  # a, b, i, j
        return tensor.transpose(2, 0, 3, 1).reshape(d * d, d * d)

    def is_trace_preserving(self, tol: float = 1e-10) -> bool:
        # trace-preserving iff vec(I)^dagger L = vec(I)^dagger
        ident = vec(np.eye(self.dim))
        return bool(np.abs(ident.conj() @ self.liouville - ident.conj()).max() <= tol)

    def is_completely_positive(self, tol: float = CHOI_TOL) -> bool:
        choi = self.choi()
        choi = 0.5 * (choi + choi.conj().T)
        return bool(np.linalg.eigvalsh(choi).min() >= -tol)


def identity_channel(dim: int) -> Channel:
    return Channel(dim, np.eye(dim * dim, dtype=complex))


def channel_from_kraus(kraus, *, normalized: bool = True, tol: float = 1e-10) -> Channel:
    """Build a channel from Kraus operators.

    With ``normalized=False`` the completeness relation is not checked, which
    is what conditional (trace-decreasing) maps need.
    """
    ops = [np.asarray(k, dtype=complex) for k in kraus]
    if not ops:
        raise ValueError("at least one Kraus operator is required")
    dim = ops[0].shape[0]
    for k in ops:
        if k.shape != (dim, dim):
            raise ValueError(f"Kraus operators must all be {dim}x{dim}, got {k.shape}")
    if normalized:
        completeness = sum(k.conj().T @ k for k in ops)
        if np.abs(completeness - np.eye(dim)).max() > tol:
            raise ValueError("Kraus operators violate sum K^dagger K = I")
    liouville = sum(np.kron(k.conj(), k) for k in ops)
    return Channel(dim, liouville)


def unitary_channel(u: np.ndarray) -> Channel:
    u = np.asarray(u, dtype=complex)
    return Channel(u.shape[0], np.kron(u.conj(), u))


def reset_channel(target: np.ndarray) -> Channel:
    """Map every input ``X`` to ``Tr(X) * target``."""
    target = np.asarray(target, dtype=complex)
    dim = target.shape[0]
    return Channel(dim, np.outer(vec(target), vec(np.eye(dim)).conj()))


def compose(outer: Channel, inner: Channel) -> Channel:
    """``outer o inner``: apply ``inner`` first."""
    if outer.dim != inner.dim:
        raise ValueError(f"dimension mismatch: {outer.dim} vs {inner.dim}")
    return Channel(outer.dim, outer.liouville @ inner.liouville)


def apply_channel(c: Channel, rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (c.dim, c.dim):
        raise ValueError(f"state shape {rho.shape} does not match channel dimension {c.dim}")
    out = c(rho)
    if np.linalg.eigvalsh(0.5 * (out + out.conj().T)).min() < -PSD_TOL:
        raise ValueError("channel output is not positive semidefinite; channel is not CP")
    return out


def _normalize_state(x: np.ndarray) -> np.ndarray:
    x = 0.5 * (x + x.conj().T)
    return x / np.trace(x).real


def fixed_point(c: Channel) -> np.ndarray:
    """Unique fixed point of a CPTP channel via dense eigendecomposition."""
    evals, evecs = np.linalg.eig(c.liouville)
    dist = np.abs(evals - 1.0)
    near_one = np.flatnonzero(dist <= DEGENERACY_TOL)
    if near_one.size > 1:
        raise NonUniqueSteadyStateError(
            f"non-unique steady state: {near_one.size} eigenvalues within {DEGENERACY_TOL} of 1"
        )
    idx = int(np.argmin(dist))
    rho = unvec(evecs[:, idx], c.dim)
    # eigenvectors carry an arbitrary complex phase
    tr = np.trace(rho)
    if abs(tr) < 1e-14:
        raise NonUniqueSteadyStateError("eigenvector for eigenvalue 1 is traceless")
    # LAPACK eigenvectors lose accuracy when the rest of the spectrum is defective
    # (e.g. a reset stroke makes the map rank one); re-solve (L - 1) x = 0, Tr x = 1
    # as a bordered least-squares system, which has full column rank here
    n = c.dim * c.dim
    a = np.vstack([c.liouville - np.eye(n), vec(np.eye(c.dim)).conj()[None, :]])
    b = np.zeros(n + 1, dtype=complex)
    b[-1] = 1.0
    x = np.linalg.lstsq(a, b, rcond=None)[0]
    return _normalize_state(unvec(x, c.dim))


def fixed_point_power(c: Channel, *, tol: float = 1e-14, max_iter: int = 1_000_000) -> np.ndarray:
    """Fixed point by repeated application starting from the maximally mixed state.

    The Liouville matrix is squared repeatedly, so ``k`` iterations cover
    ``2**k`` applications of the channel.
    """
    rho = vec(np.eye(c.dim) / c.dim)
    power = c.liouville.copy()
    applied = 1
    for _ in range(200):
        new = power @ rho
        new_state = _normalize_state(unvec(new, c.dim))
        if np.linalg.norm(c(new_state) - new_state) <= tol:
            return new_state
        power = power @ power
        applied *= 2
        if applied > max_iter:
            break
    raise ConvergenceError(f"power iteration did not converge within {max_iter} applications")


def frobenius_distance(a: Channel, b: Channel) -> float:
    return float(np.linalg.norm(a.liouville - b.liouville))

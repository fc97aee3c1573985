"""Symmetric eigensystems, vertex/spectral spreads and the spread-trade-off pencil."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .graph import laplacian_of

MAX_DENSE_N = 4000
SYMMETRY_RTOL = 1e-12
DEGENERATE_RTOL = 1e-11


class SpectralError(ArithmeticError):
    """Numerical failure in an eigendecomposition or spectral construction."""


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Ascending eigenvalues with orthonormal eigenvectors as columns."""

    values: np.ndarray
    vectors: np.ndarray

    def __len__(self):
        return len(self.values)

    def smallest(self, r: int) -> "EigenSystem":
        return EigenSystem(self.values[:r], self.vectors[:, :r])

    def largest(self, r: int) -> "EigenSystem":
        return EigenSystem(self.values[-r:], self.vectors[:, -r:])

    def residuals(self, m: np.ndarray) -> np.ndarray:
        """``||M v_l - lambda_l v_l||_2`` per eigenpair."""
        return np.linalg.norm(m @ self.vectors - self.vectors * self.values, axis=0)


@dataclass(frozen=True)
class SpreadPoint:
    s_L: float
    s_W: float


def check_symmetric(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    if np.abs(m - m.T).max(initial=0.0) > SYMMETRY_RTOL * scale:
        raise ValueError("matrix is not symmetric")
    return m


def fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip columns so the largest-magnitude entry (lowest index on ties) is positive."""
    vectors = np.array(vectors, dtype=float)
    if vectors.size == 0:
        return vectors
    pivot = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivot, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def eigh(m: np.ndarray) -> EigenSystem:
    """Full symmetric eigendecomposition with a deterministic sign convention.

    Columns inside a numerically degenerate block are ordered
    lexicographically (after sign fixing); callers should not depend on
    individual vectors within such a block.
    """
    m = check_symmetric(m)
    n = m.shape[0]
    if n > MAX_DENSE_N:
        raise ValueError(f"dense eigendecomposition capped at N={MAX_DENSE_N}, got {n}")
    sym = 0.5 * (m + m.T)
    try:
        values, vectors = sla.eigh(sym, driver="evr")
    except (np.linalg.LinAlgError, sla.LinAlgError) as exc:
        raise SpectralError(f"eigensolver failed: {exc}") from exc
    if not (np.all(np.isfinite(values)) and np.all(np.isfinite(vectors))):
        raise SpectralError("eigensolver returned non-finite output")
    vectors = fix_signs(vectors)

    tol = DEGENERATE_RTOL * max(1.0, float(np.abs(values).max(initial=0.0)))
    start = 0
    for k in range(1, n + 1):
        if k == n or values[k] - values[k - 1] > tol:
            if k - start > 1:
                block = vectors[:, start:k]
                order = np.lexsort(block[::-1])
                vectors[:, start:k] = block[:, order]
            start = k
    return EigenSystem(values, vectors)


def graph_fourier_transform(eig: EigenSystem, x) -> np.ndarray:
    """Coefficients ``x_hat(l) = sum_i x(i) phi_l(i)``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (eig.vectors.shape[0],):
        raise ValueError(f"signal length {x.shape} does not match {eig.vectors.shape[0]} nodes")
    return eig.vectors.T @ x


def _nonzero(x):
    x = np.asarray(x, dtype=float)
    nrm2 = float(x @ x)
    if nrm2 == 0.0:
        raise ValueError("spread is undefined for the zero signal")
    return x, nrm2


def vertex_spread(w: np.ndarray, x) -> float:
    """Rayleigh quotient ``x^T W x / x^T x``."""
    x, nrm2 = _nonzero(x)
    return float(x @ w @ x) / nrm2


def spectral_spread(l: np.ndarray, x) -> float:
    """Rayleigh quotient ``x^T L x / x^T x`` against a Laplacian."""
    x, nrm2 = _nonzero(x)
    return float(x @ l @ x) / nrm2


def spectral_spread_fourier(eig_l: EigenSystem, x) -> float:
    """Same quantity as :func:`spectral_spread`, from Fourier energies."""
    x, nrm2 = _nonzero(x)
    xh = graph_fourier_transform(eig_l, x)
    return float(np.sum(eig_l.values * xh**2)) / nrm2


def spread_point(l_be, w_be, x) -> SpreadPoint:
    return SpreadPoint(spectral_spread(l_be, x), vertex_spread(w_be, x))


def assert_laplacian_of(w: np.ndarray, l: np.ndarray, atol: float = 1e-9) -> None:
    if w.shape != l.shape:
        raise ValueError(f"dimension mismatch {w.shape} vs {l.shape}")
    scale = max(1.0, float(np.abs(w).max(initial=0.0)))
    if np.abs(laplacian_of(w) - l).max(initial=0.0) > atol * scale:
        raise ValueError("Laplacian is not degree(W) - W for the given affinity")


def build_pencil(w_be: np.ndarray, l_be: np.ndarray, beta: float) -> np.ndarray:
    """Pencil matrix ``W - beta * L`` trading vertex spread against spectral spread."""
    if not np.isfinite(beta):
        raise ValueError("beta must be finite")
    w_be = check_symmetric(w_be)
    l_be = check_symmetric(l_be)
    assert_laplacian_of(w_be, l_be)
    return w_be - beta * l_be


def spd_shift(m: np.ndarray, eig: EigenSystem | None = None):
    """Shift ``m`` by ``mu I`` with ``mu = -lambda_min`` so the spectrum starts at 0.

    Returns
    -------
    shifted, mu
    """
    m = check_symmetric(m)
    if eig is None:
        eig = eigh(m)
    mu = -float(eig.values[0])
    return m + mu * np.eye(m.shape[0]), mu


def shifted_eigensystem(eig: EigenSystem, mu: float) -> EigenSystem:
    """Eigensystem of ``M + mu I`` from that of ``M``; gaps are preserved exactly."""
    return EigenSystem(eig.values + mu, eig.vectors)


def q_beta(w_be: np.ndarray, l_be: np.ndarray, beta: float) -> float:
    """Half-plane offset: ``min eig(W - beta L) - lambda_max(W)``.

    For every unit ``x``, ``g_W(x) - beta * g_L(x) >= q_beta``.
    """
    pencil = build_pencil(w_be, l_be, beta)
    lo = sla.eigvalsh(pencil, subset_by_index=[0, 0])[0]
    n = w_be.shape[0]
    hi = sla.eigvalsh(w_be, subset_by_index=[n - 1, n - 1])[0]
    return float(lo - hi)


def spread_bounds(point: SpreadPoint, eig_l: EigenSystem, eig_w: EigenSystem, slack: float = 1e-9) -> bool:
    """Whether ``0 <= s_L <= lambda_max(L)`` and ``|s_W| <= lambda_max(W)``."""
    lam_l = eig_l.values[-1]
    lam_w = eig_w.values[-1]
    return bool(
        -slack <= point.s_L <= lam_l + slack and -lam_w - slack <= point.s_W <= lam_w + slack
    )


def subspace_angle_deg(a: np.ndarray, b: np.ndarray) -> float:
    """Largest principal angle between column spans, in degrees."""
    return float(np.degrees(np.max(sla.subspace_angles(a, b))))

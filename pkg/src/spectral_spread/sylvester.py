"""Sylvester-based eigensystem composition and a dense Kronecker solver.

For ``A X + X B = rho I`` with symmetric ``A``, ``B`` sharing eigenvectors,
the eigenpairs of ``X`` are ``rho / (lambda_l + mu_l)`` and
``u_l + v_l``. :func:`compose_gse` applies that recipe to arbitrary
symmetric pairs, pairing eigenvalues by ascending rank.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .spectral import DEGENERATE_RTOL, EigenSystem, check_symmetric

log = logging.getLogger(__name__)

KRONECKER_MAX_N = 64


@dataclass(frozen=True)
class GseConfig:
    rho: float = 1.0
    pair_exclusion_eps: float | None = None  # None -> 1e-8 * (max|lambda| + max|mu|)

    def __post_init__(self):
        if not np.isfinite(self.rho):
            raise ValueError("rho must be finite")
        if self.pair_exclusion_eps is not None and not self.pair_exclusion_eps > 0:
            raise ValueError("pair_exclusion_eps must be positive")


@dataclass(frozen=True, eq=False)
class ComposedEigenSystem:
    """Composed values/vectors plus which ``(a_index, b_index)`` pairs were kept."""

    values: np.ndarray
    vectors: np.ndarray
    pairing: list
    excluded: list = field(default_factory=list)
    sums: np.ndarray | None = None


def align_degenerate_blocks(mu: np.ndarray, v: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Rotate ``v`` inside each degenerate block of ``mu`` towards the same columns of ``u``.

    Any orthonormal basis of a repeated eigenvalue's eigenspace is equally
    valid, so the two eigensolver calls may return unrelated bases and
    ``u_l + v_l`` can even cancel. The orthogonal Procrustes rotation picks
    the basis closest to the paired ``u`` columns; when the eigenspaces
    coincide it reproduces them exactly.
    """
    v = v.copy()
    tol = DEGENERATE_RTOL * max(1.0, float(np.abs(mu).max(initial=0.0)))
    start = 0
    for k in range(1, len(mu) + 1):
        if k == len(mu) or mu[k] - mu[k - 1] > tol:
            if k - start > 1:
                blk = slice(start, k)
                p, _, qt = np.linalg.svd(v[:, blk].T @ u[:, blk])
                v[:, blk] = v[:, blk] @ (p @ qt)
            start = k
    return v


def compose_gse(eig_a: EigenSystem, eig_b: EigenSystem, cfg: GseConfig = GseConfig()) -> ComposedEigenSystem:
    """Pair eigensystems by rank and form ``rho / (lambda + mu)``, ``u + v``.

    Pairs with ``|lambda + mu| <= eps`` are dropped and listed in ``excluded``.
    Inside repeated eigenvalues of ``B`` the basis is chosen by
    :func:`align_degenerate_blocks`.
    """
    if eig_a.vectors.shape != eig_b.vectors.shape:
        raise ValueError("eigensystems must have equal dimensions")
    ia = np.argsort(eig_a.values, kind="stable")
    ib = np.argsort(eig_b.values, kind="stable")
    lam = eig_a.values[ia]
    mu = eig_b.values[ib]
    eps = cfg.pair_exclusion_eps
    if eps is None:
        eps = 1e-8 * (np.abs(lam).max(initial=0.0) + np.abs(mu).max(initial=0.0))
        eps = eps if eps > 0 else 1e-300
    sums = lam + mu
    keep = np.abs(sums) > eps
    excluded = [(int(a), int(b)) for a, b in zip(ia[~keep], ib[~keep])]
    if excluded:
        log.info("compose_gse: dropped %d pair(s) with lambda + mu ~ 0: %s", len(excluded), excluded)
    if not keep.any():
        raise ValueError("all eigenvalue pairs excluded (lambda_l ~ -mu_l everywhere)")
    u = eig_a.vectors[:, ia]
    v = align_degenerate_blocks(mu, eig_b.vectors[:, ib], u)
    values = cfg.rho / sums[keep]
    vectors = u[:, keep] + v[:, keep]
    pairing = [(int(a), int(b)) for a, b in zip(ia[keep], ib[keep])]
    return ComposedEigenSystem(values, vectors, pairing, excluded, sums[keep])


def solve_sylvester_dense(a, b, c, max_n: int = KRONECKER_MAX_N, rtol: float = 1e-12) -> np.ndarray:
    """Solve ``A X + X B = C`` via the ``(I kron A + B^T kron I) vec X = vec C`` system.

    Intended as a verification oracle; memory grows as ``n^4``.
    """
    a, b, c = check_symmetric(a), check_symmetric(b), check_symmetric(c)
    n = a.shape[0]
    if not a.shape == b.shape == c.shape:
        raise ValueError("A, B, C must have equal size")
    if n > max_n:
        raise ValueError(f"Kronecker Sylvester solve limited to n <= {max_n}, got {n}")
    la = np.linalg.eigvalsh(a)
    lb = np.linalg.eigvalsh(b)
    gap = np.abs(la[:, None] + lb[None, :]).min()
    scale = max(1.0, np.abs(la).max(), np.abs(lb).max())
    if gap <= rtol * scale:
        raise np.linalg.LinAlgError("singular Sylvester system: spectra of A and -B intersect")
    eye = np.eye(n)
    k = np.kron(eye, a) + np.kron(b.T, eye)
    x = np.linalg.solve(k, c.reshape(-1, order="F"))
    return x.reshape(n, n, order="F")


def reconstruct(composed: ComposedEigenSystem, strict: bool = True) -> np.ndarray:
    """``V diag(values) V^+`` from a composed eigensystem.

    With ``strict=False`` a rank-deficient ``V`` is accepted and the
    pseudo-inverse gives a least-squares reconstruction.
    """
    v = composed.vectors
    s = np.linalg.svd(v, compute_uv=False)
    if s.size == 0 or s[-1] <= 1e-12 * s[0] or v.shape[1] < v.shape[0]:
        if strict:
            raise np.linalg.LinAlgError("composed eigenvectors are rank deficient")
        log.warning("reconstruct: composed eigenvectors are rank deficient, using pseudo-inverse")
    return v @ np.diag(composed.values) @ np.linalg.pinv(v)


def gse_residual(composed: ComposedEigenSystem, a, b, cfg: GseConfig = GseConfig(), strict: bool = True) -> float:
    """Relative Sylvester residual ``||A X + X B - rho I||_F / ||rho I||_F`` of the reconstruction.

    Raises ``LinAlgError`` for rank-deficient composed vectors unless
    ``strict=False``, which falls back to the least-squares reconstruction.
    """
    x = reconstruct(composed, strict=strict)
    n = x.shape[0]
    c = cfg.rho * np.eye(n)
    scale = np.linalg.norm(c) or 1.0
    return float(np.linalg.norm(a @ x + x @ b - c) / scale)

"""Wave-kernel descriptors, edge feature lifting and embedding persistence."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.spatial.distance import cdist

from .graph import Graph


@dataclass(frozen=True)
class WksConfig:
    """Descriptor settings.

    ``t`` energy samples (= output width), ``r`` eigenpairs consumed,
    Gaussian width ``sigma = sigma_scale * delta`` where ``delta`` is the
    log-energy range over ``t``. Eigenvalues at or below ``eigen_floor`` are
    discarded before taking logs.
    """

    t: int = 32
    r: int = 20
    sigma_scale: float = 7.0
    eigen_floor: float = 1e-12

    def __post_init__(self):
        if self.t < 2 or self.r < 2:
            raise ValueError("WKS needs t >= 2 and r >= 2")
        if not self.sigma_scale > 0 or not self.eigen_floor > 0:
            raise ValueError("sigma_scale and eigen_floor must be positive")


@dataclass(frozen=True, eq=False)
class EmbeddingMatrix:
    rows: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        if rows.ndim != 2:
            raise ValueError("embedding rows must form a 2-D array")
        if not np.all(np.isfinite(rows)):
            raise ValueError("embedding contains non-finite entries")
        object.__setattr__(self, "rows", rows)

    @property
    def shape(self):
        return self.rows.shape


def wks_features(eig, cfg: WksConfig = WksConfig(), meta=None) -> EmbeddingMatrix:
    """Wave-kernel signature of every node from an eigensystem slice.

    ``eig`` is anything with ``values`` and unit-column ``vectors``
    (typically an :class:`~spectral_spread.spectral.EigenSystem`); all of its
    pairs are used.

    ``f(i)[j] = C_j sum_l phi_l(i)^2 exp(-(e_j - log lambda_l)^2 / (2 sigma^2))``
    with ``C_j`` normalizing the Gaussian weights to sum 1 and ``e_j`` a
    linear grid on ``[log lambda_min, log lambda_max]``.
    """
    values = np.asarray(eig.values, dtype=float)
    vectors = np.asarray(eig.vectors, dtype=float)
    if vectors.ndim != 2 or vectors.shape[1] != len(values):
        raise ValueError("vectors must have one column per eigenvalue")
    usable = values > cfg.eigen_floor
    if usable.sum() < 2:
        raise ValueError("WKS needs at least 2 eigenvalues above eigen_floor")
    log_vals = np.log(values[usable])
    lo, hi = log_vals.min(), log_vals.max()
    if hi - lo <= 0:
        raise ValueError("degenerate energy range: all usable eigenvalues are equal")
    energies = np.linspace(lo, hi, cfg.t)
    sigma = cfg.sigma_scale * (hi - lo) / cfg.t
    gauss = np.exp(-((energies[:, None] - log_vals[None, :]) ** 2) / (2.0 * sigma**2))
    gauss /= gauss.sum(axis=1, keepdims=True)
    feats = (vectors[:, usable] ** 2) @ gauss.T
    info = {"method": "wks", "t": cfg.t, "r": int(len(values)), "sigma": float(sigma)}
    info.update(meta or {})
    return EmbeddingMatrix(feats, info)


def edge_embedding(node_emb: EmbeddingMatrix, g: Graph, symmetric: bool = False) -> EmbeddingMatrix:
    """One row per canonical edge ``u < v``.

    Default rows are ``[f(u) | f(v)]``. With ``symmetric=True`` rows are
    ``[f(u) + f(v) | |f(u) - f(v)|]``, which does not depend on node ids.
    """
    f = node_emb.rows
    if f.shape[0] != g.n_nodes:
        raise ValueError(f"node embedding has {f.shape[0]} rows, graph has {g.n_nodes} nodes")
    fu, fv = f[g.edges[:, 0]], f[g.edges[:, 1]]
    if symmetric:
        rows = np.hstack([fu + fv, np.abs(fu - fv)])
    else:
        rows = np.hstack([fu, fv])
    meta = dict(node_emb.meta, entity="edge", edge_mode="symmetric" if symmetric else "concat")
    return EmbeddingMatrix(rows, meta)


def distance_matrix(emb, metric: str = "euclidean") -> np.ndarray:
    rows = emb.rows if isinstance(emb, EmbeddingMatrix) else np.asarray(emb, dtype=float)
    if rows.shape[0] == 0:
        raise ValueError("empty embedding")
    names = {"euclidean": "euclidean", "l1": "cityblock"}
    if metric not in names:
        raise ValueError(f"unknown metric {metric!r}")
    d = cdist(rows, rows, names[metric])
    d = 0.5 * (d + d.T)
    np.fill_diagonal(d, 0.0)
    return d


def save_embedding(path, emb: EmbeddingMatrix, entity_ids=None) -> None:
    """CSV (``entity_id,f0,...``) at 17 significant digits plus ``<path>.meta.json``."""
    path = Path(path)
    ids = range(emb.rows.shape[0]) if entity_ids is None else entity_ids
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["entity_id", *(f"f{j}" for j in range(emb.rows.shape[1]))])
        for eid, row in zip(ids, emb.rows):
            writer.writerow([eid, *(f"{x:.17g}" for x in row)])
    meta_path(path).write_text(json.dumps(emb.meta, indent=2, sort_keys=True, default=str) + "\n")


def load_embedding(path) -> tuple[EmbeddingMatrix, list]:
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if not header or header[0] != "entity_id":
            raise ValueError(f"{path}: missing entity_id header")
        ids, rows = [], []
        for row in reader:
            ids.append(row[0])
            rows.append([float(x) for x in row[1:]])
    mp = meta_path(path)
    meta = json.loads(mp.read_text()) if mp.exists() else {}
    arr = np.array(rows, dtype=float).reshape(len(rows), len(header) - 1)
    return EmbeddingMatrix(arr, meta), ids


def meta_path(path) -> Path:
    return Path(str(path) + ".meta.json")

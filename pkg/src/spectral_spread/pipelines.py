"""End-to-end node embeddings: GSSE, GSE and WKS baselines."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .centrality import HOP, METRICS, EbcResult, build_bcg, edge_betweenness
from .descriptors import EmbeddingMatrix, WksConfig, wks_features
from .graph import Graph, build_laplacian, laplacian_of, matrix_digest, require_connected
from .spectral import EigenSystem, build_pencil, eigh, shifted_eigensystem
from .sylvester import GseConfig, compose_gse

log = logging.getLogger(__name__)

METHODS = ("gsse", "gse", "baseline-wks", "bcg-wks")


@dataclass(frozen=True)
class PipelineConfig:
    method: str = "gsse"
    beta: float = -1000.0
    rho: float = 1.0
    r: int | None = None  # None -> min(20, N - 1)
    wks: WksConfig = field(default_factory=WksConfig)
    metric: str = HOP

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; choose from {METHODS}")
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")
        if not (np.isfinite(self.beta) and np.isfinite(self.rho)):
            raise ValueError("beta and rho must be finite")
        if self.r is not None and self.r < 2:
            raise ValueError("r must be >= 2")

    def resolved_r(self, n: int) -> int:
        r = min(20, n - 1) if self.r is None else self.r
        if r > n:
            raise ValueError(f"r={r} exceeds node count {n}")
        return r

    def to_dict(self) -> dict:
        return asdict(self)


def _bcg(g: Graph, cfg: PipelineConfig, ebc: EbcResult | None):
    require_connected(g)
    if ebc is None:
        ebc = edge_betweenness(g, cfg.metric)
    w_be = build_bcg(g, cfg.metric, ebc=ebc)
    return w_be, laplacian_of(w_be)


def _meta(g: Graph, cfg: PipelineConfig, r: int, **hashes) -> dict:
    meta = {"method": cfg.method, "r": r, "t": cfg.wks.t, "metric": cfg.metric, "graph": g.digest()}
    if cfg.method == "gsse":
        meta["beta"] = cfg.beta
    if cfg.method == "gse":
        meta["rho"] = cfg.rho
    meta["hashes"] = hashes
    return meta


def embed_gsse(g: Graph, cfg: PipelineConfig = PipelineConfig(), ebc: EbcResult | None = None) -> EmbeddingMatrix:
    """WKS over the smallest ``r`` eigenpairs of the zero-shifted pencil ``W - beta L``."""
    cfg = replace(cfg, method="gsse")
    r = cfg.resolved_r(g.n_nodes)
    w_be, l_be = _bcg(g, cfg, ebc)
    pencil = build_pencil(w_be, l_be, cfg.beta)
    eig = eigh(pencil)
    shifted = shifted_eigensystem(eig, -eig.values[0])
    meta = _meta(
        g, cfg, r, w_be=matrix_digest(w_be), pencil=matrix_digest(pencil),
        values=matrix_digest(shifted.values[:r]),
    )
    meta["mu"] = float(-eig.values[0])
    return wks_features(shifted.smallest(r), cfg.wks, meta)


def gse_eigensystem(w_be: np.ndarray, l_be: np.ndarray, r: int, rho: float = 1.0):
    """The ``r`` composed pairs with largest value, as ``(|value|, unit vector)``.

    Also returns the underlying :class:`ComposedEigenSystem`.
    """
    composed = compose_gse(eigh(l_be), eigh(w_be), GseConfig(rho=rho))
    if r > len(composed.values):
        raise ValueError(f"r={r} exceeds the {len(composed.values)} retained composed pairs")
    top = np.argsort(composed.values, kind="stable")[::-1][:r]
    vecs = composed.vectors[:, top]
    vecs = vecs / np.linalg.norm(vecs, axis=0)
    return EigenSystem(np.abs(composed.values[top]), vecs), composed


def embed_gse(g: Graph, cfg: PipelineConfig = PipelineConfig(method="gse"), ebc: EbcResult | None = None) -> EmbeddingMatrix:
    """WKS over the ``r`` largest Sylvester-composed eigenpairs of ``(L_BE, W_BE)``."""
    cfg = replace(cfg, method="gse")
    r = cfg.resolved_r(g.n_nodes)
    w_be, l_be = _bcg(g, cfg, ebc)
    sel, composed = gse_eigensystem(w_be, l_be, r, cfg.rho)
    kept = sel.values > cfg.wks.eigen_floor
    if not kept.all():
        log.info("embed_gse: %d composed value(s) below eigen_floor dropped", int((~kept).sum()))
    meta = _meta(g, cfg, r, w_be=matrix_digest(w_be), values=matrix_digest(sel.values))
    meta["excluded_pairs"] = composed.excluded
    return wks_features(sel, cfg.wks, meta)


def embed_baseline(g: Graph, cfg: PipelineConfig = PipelineConfig(method="baseline-wks"), ebc: EbcResult | None = None) -> EmbeddingMatrix:
    """WKS over the smallest ``r`` eigenpairs of the unweighted ``L`` or of ``L_BE``."""
    if cfg.method not in ("baseline-wks", "bcg-wks"):
        cfg = replace(cfg, method="baseline-wks")
    r = cfg.resolved_r(g.n_nodes)
    if cfg.method == "bcg-wks":
        _, lap = _bcg(g, cfg, ebc)
    else:
        require_connected(g)
        lap = build_laplacian(g, weighted=False)
    eig = eigh(lap).smallest(r)
    meta = _meta(g, cfg, r, laplacian=matrix_digest(lap), values=matrix_digest(eig.values))
    return wks_features(eig, cfg.wks, meta)


def embed(g: Graph, cfg: PipelineConfig, ebc: EbcResult | None = None) -> EmbeddingMatrix:
    """Dispatch on ``cfg.method``."""
    if cfg.method == "gsse":
        return embed_gsse(g, cfg, ebc)
    if cfg.method == "gse":
        return embed_gse(g, cfg, ebc)
    return embed_baseline(g, cfg, ebc)

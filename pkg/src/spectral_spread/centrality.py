"""Exact edge and vertex betweenness and the betweenness-centrality graph.

Values use the unordered-pair convention: each pair ``{s, t}`` contributes
once, i.e. ordered-pair sums are halved.

The hop metric runs a level-synchronous Brandes accumulation over blocks of
sources with sparse-times-dense products. Blocks have a fixed size and are
reduced in ascending source order, so results do not depend on ``threads``.
"""

from __future__ import annotations

import heapq
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .graph import Graph, GraphError, require_connected

HOP = "hop"
WEIGHTED = "weighted-distance"
METRICS = (HOP, WEIGHTED)

PATH_TIE_ATOL = 1e-12
SOURCE_BLOCK = 128


@dataclass(frozen=True, eq=False)
class EbcResult:
    """Edge betweenness aligned with ``graph.edges``."""

    graph: Graph
    values: np.ndarray
    metric: str = HOP

    def as_dict(self) -> dict:
        return {(int(u), int(v)): float(x) for (u, v), x in zip(self.graph.edges, self.values)}

    def mean(self) -> float:
        return float(self.values.mean())


@dataclass(frozen=True, eq=False)
class VbcResult:
    """Interior-pair vertex betweenness, one value per node."""

    graph: Graph
    values: np.ndarray
    metric: str = HOP


def _check(g: Graph, metric: str):
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; use one of {METRICS}")
    require_connected(g)


def _resolve_threads(threads):
    if threads is None:
        threads = int(os.environ.get("SPECTRAL_SPREAD_THREADS", "1") or 1)
    return max(1, int(threads))


def _hop_block(adj, edges, sources, n):
    """Brandes dependency accumulation for one block of BFS sources.

    Arrays are laid out ``(n, b)``: one column per source.
    """
    b = len(sources)
    cols = np.arange(b)
    dist = np.full((n, b), -1, dtype=np.int64)
    sigma = np.zeros((n, b))
    dist[sources, cols] = 0
    sigma[sources, cols] = 1.0
    front = sigma.copy()
    level = 0
    while True:
        reach = adj @ front
        new = (dist < 0) & (reach > 0)
        if not new.any():
            break
        level += 1
        dist[new] = level
        sigma[new] = reach[new]
        front = np.where(new, sigma, 0.0)

    delta = np.zeros((n, b))
    for lvl in range(level - 1, -1, -1):
        coef = np.where(dist == lvl + 1, (1.0 + delta) / np.where(sigma > 0, sigma, 1.0), 0.0)
        delta += np.where(dist == lvl, sigma * (adj @ coef), 0.0)

    coef = (1.0 + delta) / sigma
    u, v = edges[:, 0], edges[:, 1]
    du, dv = dist[u], dist[v]
    edge_part = np.where(dv == du + 1, sigma[u] * coef[v], 0.0)
    edge_part += np.where(du == dv + 1, sigma[v] * coef[u], 0.0)
    delta[sources, cols] = 0.0
    return edge_part.sum(axis=1), delta.sum(axis=1)


def _hop_betweenness(g: Graph, threads=None):
    n = g.n_nodes
    adj = g.sparse_adjacency(weighted=False)
    blocks = [np.arange(s, min(s + SOURCE_BLOCK, n)) for s in range(0, n, SOURCE_BLOCK)]
    threads = _resolve_threads(threads)
    work = lambda src: _hop_block(adj, g.edges, src, n)  # noqa: E731
    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(work, blocks))
    else:
        parts = [work(b) for b in blocks]
    ebc = np.zeros(g.n_edges)
    vbc = np.zeros(n)
    for e_part, v_part in parts:
        ebc += e_part
        vbc += v_part
    return ebc / 2.0, vbc / 2.0


def _weighted_single_source(adj, s, n):
    dist = np.full(n, np.inf)
    sigma = np.zeros(n)
    preds = [[] for _ in range(n)]
    dist[s] = 0.0
    sigma[s] = 1.0
    order = []
    done = np.zeros(n, dtype=bool)
    heap = [(0.0, s)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u] or d > dist[u]:
            continue
        done[u] = True
        order.append(u)
        for v, w in adj[u]:
            if done[v]:
                continue
            nd = d + w
            if nd < dist[v] - PATH_TIE_ATOL:
                dist[v] = nd
                sigma[v] = sigma[u]
                preds[v] = [u]
                heapq.heappush(heap, (nd, v))
            elif abs(nd - dist[v]) <= PATH_TIE_ATOL:
                sigma[v] += sigma[u]
                preds[v].append(u)
    return order, sigma, preds


def _weighted_betweenness(g: Graph):
    n = g.n_nodes
    if np.any(g.weights < 0):
        raise GraphError("negative edge length")
    adj = [[] for _ in range(n)]
    for (u, v), w in zip(g.edges, g.weights):
        adj[u].append((int(v), float(w)))
        adj[v].append((int(u), float(w)))
    index = g.edge_index()
    ebc = np.zeros(g.n_edges)
    vbc = np.zeros(n)
    for s in range(n):
        order, sigma, preds = _weighted_single_source(adj, s, n)
        delta = np.zeros(n)
        for w in reversed(order):
            for v in preds[w]:
                c = sigma[v] / sigma[w] * (1.0 + delta[w])
                ebc[index[(v, w) if v < w else (w, v)]] += c
                delta[v] += c
            if w != s:
                vbc[w] += delta[w]
    return ebc / 2.0, vbc / 2.0


def betweenness(g: Graph, metric: str = HOP, threads=None):
    """Edge and vertex betweenness in one pass.

    Returns
    -------
    (EbcResult, VbcResult)
    """
    _check(g, metric)
    if metric == HOP:
        ebc, vbc = _hop_betweenness(g, threads)
    else:
        ebc, vbc = _weighted_betweenness(g)
    ebc.setflags(write=False)
    vbc.setflags(write=False)
    return EbcResult(g, ebc, metric), VbcResult(g, vbc, metric)


def edge_betweenness(g: Graph, metric: str = HOP, threads=None) -> EbcResult:
    """Exact edge betweenness ``sum_{s,t} sigma_st(e) / sigma_st`` over unordered pairs."""
    return betweenness(g, metric, threads)[0]


def vertex_betweenness(g: Graph, metric: str = HOP, threads=None) -> VbcResult:
    """Exact vertex betweenness over unordered pairs with ``i`` strictly interior."""
    return betweenness(g, metric, threads)[1]


def build_bcg(g: Graph, metric: str = HOP, ebc: EbcResult | None = None) -> np.ndarray:
    """Dense BCG affinity: original sparsity pattern, EBC values as weights."""
    if ebc is None:
        ebc = edge_betweenness(g, metric)
    w = np.zeros((g.n_nodes, g.n_nodes))
    w[g.edges[:, 0], g.edges[:, 1]] = ebc.values
    w[g.edges[:, 1], g.edges[:, 0]] = ebc.values
    return w

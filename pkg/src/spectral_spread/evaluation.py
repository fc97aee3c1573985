"""Evaluation protocols: structural equivalence, anchored alignment,
failed-edge forecasting and clustering purity, plus the clustering tools
they rely on (seeded k-means, kNN feature graphs, PCA).
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from scipy.spatial.distance import cdist

from .centrality import EbcResult, edge_betweenness
from .datasets import karate_club
from .descriptors import EmbeddingMatrix, WksConfig, distance_matrix, edge_embedding
from .graph import Graph, GraphError, LabeledGraph, connected_components, generate_mirrored
from .pipelines import PipelineConfig, embed

TIE_ATOL = 1e-9


class ClusteringError(RuntimeError):
    """k-means could not produce ``k`` nonempty clusters."""


@dataclass
class EvalReport:
    metric: str
    value: float
    values: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    detail: list | None = None
    seed: int | None = None

    def to_json(self, path=None) -> str:
        text = json.dumps(asdict(self), indent=2, sort_keys=True, default=_jsonable)
        if path is not None:
            Path(path).write_text(text + "\n", encoding="utf-8")
        return text

    def write_detail_csv(self, path) -> None:
        if not self.detail:
            raise ValueError("report has no detail table")
        keys = list(self.detail[0])
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, keys, lineterminator="\n")
            writer.writeheader()
            writer.writerows(self.detail)


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return str(obj)


def _rows(emb):
    return emb.rows if isinstance(emb, EmbeddingMatrix) else np.asarray(emb, dtype=float)


# --- structural equivalence --------------------------------------------------


def structural_equivalence_accuracy(emb, correspondence, tie_mode: str = "optimistic", tie_atol: float = TIE_ATOL) -> EvalReport:
    """Fraction of nodes whose nearest other node is their structural twin.

    ``optimistic`` counts a success when the twin attains the minimum
    distance (within ``tie_atol``); ``strict`` also requires it to be the only
    node at that distance. Both are always present in ``values``.
    """
    if tie_mode not in ("optimistic", "strict"):
        raise ValueError("tie_mode must be 'optimistic' or 'strict'")
    rows = _rows(emb)
    corr = np.asarray(correspondence)
    n = rows.shape[0]
    if corr.shape != (n,) or corr.min() < 0 or corr.max() >= n:
        raise ValueError("correspondence must map every embedded node to a node")
    if np.any(corr == np.arange(n)):
        raise ValueError("correspondence maps a node to itself")
    d = distance_matrix(rows)
    np.fill_diagonal(d, np.inf)
    nearest = d.min(axis=1)
    twin = d[np.arange(n), corr]
    hit = twin <= nearest + tie_atol
    unique = (d <= nearest[:, None] + tie_atol).sum(axis=1) == 1
    values = {"optimistic": float(hit.mean()), "strict": float((hit & unique).mean())}
    detail = [
        {"node": i, "twin": int(corr[i]), "twin_distance": float(twin[i]), "nearest_distance": float(nearest[i]), "hit": bool(hit[i])}
        for i in range(n)
    ]
    return EvalReport("structural_equivalence_accuracy", values[tie_mode], values, {"tie_mode": tie_mode, "tie_atol": tie_atol}, detail)


def mirrored_karate_sweep(
    methods=("gse", "gsse", "baseline-wks"),
    mirror_edges=range(1, 26),
    seeds=range(10),
    r_values=(8, 12, 16, 20),
    t: int = 32,
    beta: float = -1000.0,
    rho: float = 1.0,
    tie_mode: str = "optimistic",
    base: Graph | None = None,
) -> EvalReport:
    """Mirrored-graph structural-equivalence sweep.

    For every ``r`` the accuracy is averaged over mirror-edge counts and
    seeds. Per method, ``best`` is the best single run and ``avg`` the best
    per-``r`` average.
    """
    base = karate_club() if base is None else base
    runs = []
    start = time.perf_counter()
    for k in mirror_edges:
        for seed in seeds:
            g, corr = generate_mirrored(base, k, seed)
            ebc = edge_betweenness(g)
            for method in methods:
                for r in r_values:
                    cfg = PipelineConfig(method=method, beta=beta, rho=rho, r=r, wks=WksConfig(t=t, r=r))
                    rep = structural_equivalence_accuracy(embed(g, cfg, ebc=ebc), corr, tie_mode)
                    runs.append({"method": method, "r": r, "mirror_edges": k, "seed": seed, **rep.values})
    summary = {}
    for method in methods:
        mine = [x for x in runs if x["method"] == method]
        per_r = {r: float(np.mean([x[tie_mode] for x in mine if x["r"] == r])) for r in r_values}
        best_r = max(per_r, key=per_r.get)
        summary[method] = {
            "best": float(max(x[tie_mode] for x in mine)),
            "avg": per_r[best_r],
            "avg_r": best_r,
            "avg_by_r": per_r,
            "avg_strict": float(np.mean([x["strict"] for x in mine if x["r"] == best_r])),
        }
    config = {
        "methods": list(methods), "mirror_edges": list(mirror_edges), "seeds": list(seeds),
        "r_values": list(r_values), "t": t, "beta": beta, "rho": rho, "tie_mode": tie_mode,
        "seconds": time.perf_counter() - start,
    }
    lead = summary[methods[0]]["avg"]
    return EvalReport("mirrored_structural_accuracy", lead, summary, config, runs)


# --- anchored alignment ------------------------------------------------------


def alignment_accuracy(emb, anchors: dict, truth: dict, n_first: int) -> EvalReport:
    """Nearest copy-2 node of every non-anchor copy-1 node, scored against ``truth``.

    Nodes ``0 .. n_first-1`` form copy 1, the remaining rows copy 2.
    """
    if not anchors:
        raise ValueError("alignment needs at least one anchor")
    for a, b in anchors.items():
        if truth.get(a) != b:
            raise ValueError(f"anchor {a}->{b} disagrees with ground truth")
    rows = _rows(emb)
    first = np.array(sorted(set(truth) - set(anchors)))
    second = np.arange(n_first, rows.shape[0])
    if first.size == 0:
        raise ValueError("every node is anchored; nothing to score")
    d = cdist(rows[first], rows[second])
    pred = second[np.argmin(d, axis=1)]
    target = np.array([truth[i] for i in first])
    hits = pred == target
    detail = [{"node": int(i), "predicted": int(p), "truth": int(t)} for i, p, t in zip(first, pred, target)]
    return EvalReport("alignment_accuracy", float(hits.mean()), {"scored": int(first.size)}, {"anchors": len(anchors)}, detail)


def remove_edges_connected(g: Graph, fraction: float, rng) -> Graph:
    """Drop ``round(fraction * m)`` random edges, never disconnecting the graph."""
    rng = np.random.default_rng(rng)
    target = int(round(fraction * g.n_edges))
    keep = np.ones(g.n_edges, dtype=bool)
    removed = 0
    for k in rng.permutation(g.n_edges):
        if removed == target:
            break
        keep[k] = False
        trial = Graph(g.n_nodes, g.edges[keep], g.weights[keep])
        if len(connected_components(trial)) == 1:
            removed += 1
        else:
            keep[k] = True
    if removed < target:
        raise GraphError(f"could only remove {removed} of {target} edges without disconnecting")
    return Graph(g.n_nodes, g.edges[keep], g.weights[keep])


def build_alignment_graph(g: Graph, noise: float, anchor_fraction: float, seed: int):
    """Original graph plus a noisy copy (ids shifted by N) joined at anchor pairs.

    Returns ``(joined, anchors, truth)``.
    """
    rng = np.random.default_rng(seed)
    n = g.n_nodes
    noisy = remove_edges_connected(g, noise, rng) if noise > 0 else g
    n_anchor = int(round(anchor_fraction * n))
    if n_anchor < 1:
        raise ValueError("anchor_fraction leaves no anchors")
    anchor_nodes = np.sort(rng.choice(n, size=n_anchor, replace=False))
    anchors = {int(i): int(i) + n for i in anchor_nodes}
    truth = {i: i + n for i in range(n)}
    edges = np.concatenate([g.edges, noisy.edges + n, [[i, i + n] for i in anchor_nodes]])
    weights = np.concatenate([g.weights, noisy.weights, np.ones(n_anchor)])
    return Graph.from_edges(2 * n, edges, weights), anchors, truth


def alignment_benchmark(
    g: Graph | None = None,
    methods=("gse", "gsse", "baseline-wks"),
    noise_levels=(0.1, 0.2),
    anchor_fraction: float = 0.5,
    seeds=range(10),
    r: int = 20,
    t: int = 32,
    beta: float = -1000.0,
    rho: float = 1.0,
) -> EvalReport:
    """Mean alignment accuracy per method and noise level over seeds."""
    g = karate_club() if g is None else g
    runs = []
    for noise in noise_levels:
        for seed in seeds:
            joined, anchors, truth = build_alignment_graph(g, noise, anchor_fraction, seed)
            ebc = edge_betweenness(joined)
            for method in methods:
                cfg = PipelineConfig(method=method, beta=beta, rho=rho, r=r, wks=WksConfig(t=t, r=r))
                rep = alignment_accuracy(embed(joined, cfg, ebc=ebc), anchors, truth, g.n_nodes)
                runs.append({"method": method, "noise": noise, "seed": seed, "accuracy": rep.value})
    summary = {
        m: {str(nl): float(np.mean([x["accuracy"] for x in runs if x["method"] == m and x["noise"] == nl])) for nl in noise_levels}
        for m in methods
    }
    config = {"methods": list(methods), "noise_levels": list(noise_levels), "anchor_fraction": anchor_fraction,
              "seeds": list(seeds), "r": r, "t": t, "beta": beta, "rho": rho}
    return EvalReport("alignment_accuracy", summary[methods[0]][str(noise_levels[0])], summary, config, runs)


# --- k-means and friends -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class KMeansResult:
    labels: np.ndarray
    centers: np.ndarray
    inertia: float
    history: list


def _kmeans_pp(x, k, rng):
    n = len(x)
    centers = [x[rng.integers(n)]]
    d2 = ((x - centers[0]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = d2.sum()
        if total <= 0:
            raise ClusteringError("fewer distinct points than clusters")
        centers.append(x[rng.choice(n, p=d2 / total)])
        d2 = np.minimum(d2, ((x - centers[-1]) ** 2).sum(axis=1))
    return np.array(centers)


def _lloyd(x, centers, max_iter):
    """Lloyd iterations; ``history`` holds the objective after each assignment step."""
    history = []
    labels = None
    for _ in range(max_iter):
        d2 = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_labels = np.argmin(d2, axis=1)
        history.append(float(d2[np.arange(len(x)), new_labels].sum()))
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        if np.any(np.bincount(labels, minlength=len(centers)) == 0):
            return labels, centers, None, history
        centers = np.array([x[labels == j].mean(axis=0) for j in range(len(centers))])
    return labels, centers, history[-1], history


def kmeans(emb, k: int, seed: int = 0, n_init: int = 10, max_iter: int = 300) -> KMeansResult:
    """Seeded Lloyd iterations from k-means++ starts; best of ``n_init`` restarts."""
    x = _rows(emb)
    n = len(x)
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}]")
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(n_init):
        labels, centers, inertia, history = _lloyd(x, _kmeans_pp(x, k, rng), max_iter)
        if inertia is None:
            continue
        if best is None or inertia < best.inertia:
            best = KMeansResult(labels, centers, inertia, history)
    if best is None:
        raise ClusteringError("every restart ended with an empty cluster")
    return best


def purity(assignment, labels) -> float:
    """``(1/N) sum_clusters max_label |cluster & label|``."""
    a = np.asarray(assignment)
    y = np.asarray(labels)
    if a.size == 0 or a.shape != y.shape:
        raise ValueError("assignment and labels must be nonempty and equally long")
    total = 0
    for c in np.unique(a):
        _, counts = np.unique(y[a == c], return_counts=True)
        total += counts.max()
    return total / a.size


def knn_feature_graph(emb, k: int = 15) -> Graph:
    """Union of directed k-nearest-neighbour relations as an unweighted graph."""
    x = _rows(emb)
    n = len(x)
    if not 1 <= k < n:
        raise ValueError(f"k must be in [1, {n - 1}]")
    d = distance_matrix(x)
    np.fill_diagonal(d, np.inf)
    nn = np.argsort(d, axis=1, kind="stable")[:, :k]
    src = np.repeat(np.arange(n), k)
    return Graph.from_edges(n, zip(src, nn.ravel()))


def spectral_clusters(g: Graph, n_clusters: int, seed: int = 0) -> np.ndarray:
    """Normalized-Laplacian eigenmap of ``g`` (row-normalized) followed by k-means."""
    a = g.adjacency(weighted=True)
    deg = a.sum(axis=1)
    inv = np.where(deg > 0, 1.0 / np.sqrt(np.where(deg > 0, deg, 1.0)), 0.0)
    lap = np.eye(g.n_nodes) - inv[:, None] * a * inv[None, :]
    _, vecs = np.linalg.eigh(lap)
    u = vecs[:, :n_clusters]
    u = u / np.maximum(np.linalg.norm(u, axis=1, keepdims=True), 1e-300)
    return kmeans(u, n_clusters, seed).labels


def cluster_purity(emb, labels, n_clusters: int | None = None, k: int = 15, seed: int = 0) -> EvalReport:
    """kNN feature graph, spectral k-means on it, purity against ``labels``."""
    labels = np.asarray(labels)
    n_clusters = len(np.unique(labels)) if n_clusters is None else n_clusters
    knn = knn_feature_graph(emb, k)
    assign = spectral_clusters(knn, n_clusters, seed)
    value = purity(assign, labels)
    values = {"purity": value, "knn_components": len(connected_components(knn)), "n_clusters": n_clusters}
    detail = [{"node": i, "cluster": int(c), "label": str(y)} for i, (c, y) in enumerate(zip(assign, labels))]
    return EvalReport("purity", value, values, {"k": k, "seed": seed}, detail, seed)


def pca_project(emb, dims: int = 2) -> EmbeddingMatrix:
    """Project centered rows onto the top ``dims`` principal directions."""
    x = _rows(emb)
    if not 1 <= dims <= x.shape[1]:
        raise ValueError(f"dims must be in [1, {x.shape[1]}]")
    xc = x - x.mean(axis=0)
    _, s, vt = np.linalg.svd(xc, full_matrices=False)
    var = s**2
    rank = int((s > 1e-12 * max(s.max(initial=0.0), 1e-300)).sum())
    vt = fix_rows(vt[:dims])
    proj = xc @ vt.T
    if rank < dims:
        proj[:, rank:] = 0.0
    total = var.sum()
    meta = {
        "method": "pca", "dims": dims,
        "explained_variance": (var[:dims] / max(len(x) - 1, 1)).tolist(),
        "explained_variance_ratio": (var[:dims] / total).tolist() if total > 0 else [0.0] * dims,
        "discarded_sq": float(var[dims:].sum()),
    }
    return EmbeddingMatrix(proj, meta)


def fix_rows(vt):
    pivot = np.argmax(np.abs(vt), axis=1)
    signs = np.sign(vt[np.arange(len(vt)), pivot])
    signs[signs == 0] = 1.0
    return vt * signs[:, None]


# --- failed-edge forecasting --------------------------------------------------


def _failed(lg: LabeledGraph):
    if lg.edge_labels is None:
        raise ValueError("graph carries no edge failure labels")
    failed = np.asarray(lg.edge_labels).astype(bool)
    if not failed.any():
        raise ValueError("no failed edges labeled")
    return failed


def forecast_failed_edges(lg: LabeledGraph, edge_emb, ebc: EbcResult, k: int = 2, seed: int = 0, n_init: int = 100) -> EvalReport:
    """Cluster edge embeddings; the cluster with higher mean EBC is the forecast.

    ``value`` is the fraction of labeled-failed edges inside that cluster.
    """
    failed = _failed(lg)
    res = kmeans(edge_emb, k, seed, n_init=n_init)
    ebc_vals = np.asarray(ebc.values)
    means = np.array([ebc_vals[res.labels == c].mean() for c in range(k)])
    pick = int(np.argmax(means))
    predicted = res.labels == pick
    success = float((predicted & failed).sum() / failed.sum())
    values = {
        "success_rate": success,
        "predicted_size": int(predicted.sum()),
        "precision": float((predicted & failed).sum() / predicted.sum()),
        "cluster_mean_ebc": means.tolist(),
    }
    return EvalReport("forecast_success_rate", success, values, {"k": k, "n_init": n_init}, seed=seed)


def ebc_threshold_baseline(lg: LabeledGraph, ebc: EbcResult) -> EvalReport:
    """Forecast a failure wherever EBC is strictly above the mean EBC."""
    failed = _failed(lg)
    vals = np.asarray(ebc.values)
    predicted = vals > vals.mean()
    success = float((predicted & failed).sum() / failed.sum())
    precision = float((predicted & failed).sum() / predicted.sum()) if predicted.any() else 0.0
    values = {"success_rate": success, "predicted_size": int(predicted.sum()), "precision": precision, "mean_ebc": float(vals.mean())}
    return EvalReport("forecast_success_rate", success, values, {"rule": "ebc > mean"})


def forecast_comparison(lg: LabeledGraph, r: int = 20, t: int = 32, beta: float = -1000.0, rho: float = 1.0, seed: int = 0, symmetric_edges: bool = False) -> EvalReport:
    """FL baseline next to WKS-on-L_BE, GSE and GSSE edge-embedding forecasts."""
    g = lg.graph
    ebc = edge_betweenness(g)
    rows = {"FL": ebc_threshold_baseline(lg, ebc).values}
    for label, method in (("WKS-L_BE", "bcg-wks"), ("GSE", "gse"), ("GSSE", "gsse")):
        cfg = PipelineConfig(method=method, beta=beta, rho=rho, r=r, wks=WksConfig(t=t, r=r))
        node = embed(g, cfg, ebc=ebc)
        rep = forecast_failed_edges(lg, edge_embedding(node, g, symmetric=symmetric_edges), ebc, seed=seed)
        rows[label] = rep.values
    detail = [{"method": m, **{k: v for k, v in vals.items() if not isinstance(v, list)}} for m, vals in rows.items()]
    config = {"r": r, "t": t, "beta": beta, "rho": rho, "seed": seed, "symmetric_edges": symmetric_edges}
    return EvalReport("forecast_success_rate", rows["GSE"]["success_rate"], rows, config, detail, seed)


__all__ = [
    "ClusteringError", "EvalReport", "KMeansResult", "alignment_accuracy", "alignment_benchmark",
    "build_alignment_graph", "cluster_purity", "ebc_threshold_baseline", "forecast_comparison",
    "forecast_failed_edges", "kmeans", "knn_feature_graph", "mirrored_karate_sweep", "pca_project",
    "purity", "remove_edges_connected", "spectral_clusters", "structural_equivalence_accuracy",
]

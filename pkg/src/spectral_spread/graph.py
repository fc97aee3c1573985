"""Graph representation, matrix assembly, generators and edge-list I/O.

Node ids are dense 0-based integers. Edges are stored canonically with
``u < v``, sorted, without duplicates or self-loops.
"""

from __future__ import annotations

import hashlib
import json
import re
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

MAX_NODE_ID = 2**31 - 1


class GraphError(ValueError):
    """Raised for malformed graphs or edge-list files."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected weighted graph with canonical edge storage.

    Parameters
    ----------
    n_nodes
        Number of nodes; ids are ``0 .. n_nodes - 1``.
    edges
        ``(m, 2)`` integer array with ``edges[k, 0] < edges[k, 1]``.
    weights
        ``(m,)`` positive float64 array aligned with ``edges``.
    """

    n_nodes: int
    edges: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        weights = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        if self.n_nodes < 1:
            raise GraphError("graph needs at least one node")
        if len(edges) != len(weights):
            raise GraphError("edges and weights differ in length")
        if len(edges):
            if edges.min() < 0 or edges.max() >= self.n_nodes:
                raise GraphError("node id out of range")
            if np.any(edges[:, 0] >= edges[:, 1]):
                raise GraphError("edges must be canonical (u < v), no self-loops")
            keys = edges[:, 0] * self.n_nodes + edges[:, 1]
            if np.any(np.diff(keys) <= 0):
                raise GraphError("edges must be sorted and unique")
        if np.any(~np.isfinite(weights)) or np.any(weights <= 0):
            raise GraphError("edge weights must be finite and > 0")
        edges.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_edges(cls, n_nodes, edges, weights=None):
        """Build a graph from arbitrary ``(u, v[, w])`` pairs.

        Orientation is canonicalized; exact duplicate edges are merged and
        duplicates with different weights raise :class:`GraphError`.
        """
        edges = list(edges)
        if weights is None:
            weights = [1.0] * len(edges)
        table = {}
        for (u, v), w in zip(edges, weights):
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            key = (u, v) if u < v else (v, u)
            w = float(w)
            if key in table and table[key] != w:
                raise GraphError(f"conflicting weights for edge {key}")
            table[key] = w
        keys = sorted(table)
        arr = np.array(keys, dtype=np.int64).reshape(-1, 2)
        return cls(n_nodes, arr, np.array([table[k] for k in keys], dtype=np.float64))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def edge_index(self) -> dict:
        """Map canonical ``(u, v)`` tuples to row positions in ``edges``."""
        return {(int(u), int(v)): k for k, (u, v) in enumerate(self.edges)}

    def neighbors(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n_nodes)]
        for u, v in self.edges:
            adj[u].append(int(v))
            adj[v].append(int(u))
        return [sorted(a) for a in adj]

    def degrees(self) -> np.ndarray:
        """Unweighted node degrees."""
        return np.bincount(self.edges.ravel(), minlength=self.n_nodes)

    def adjacency(self, weighted: bool = True) -> np.ndarray:
        """Dense symmetric adjacency ``W``."""
        w = np.zeros((self.n_nodes, self.n_nodes))
        vals = self.weights if weighted else np.ones(self.n_edges)
        w[self.edges[:, 0], self.edges[:, 1]] = vals
        w[self.edges[:, 1], self.edges[:, 0]] = vals
        return w

    def sparse_adjacency(self, weighted: bool = False):
        import scipy.sparse as sp

        vals = self.weights if weighted else np.ones(self.n_edges)
        rows = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
        cols = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
        return sp.csr_matrix(
            (np.concatenate([vals, vals]), (rows, cols)), shape=(self.n_nodes, self.n_nodes)
        )

    def relabel(self, perm) -> "Graph":
        """Return the graph with node ``i`` renamed to ``perm[i]``."""
        perm = np.asarray(perm)
        return Graph.from_edges(self.n_nodes, perm[self.edges], self.weights)

    def with_weights(self, weights) -> "Graph":
        return Graph(self.n_nodes, self.edges, weights)

    def digest(self) -> str:
        """SHA-256 over the canonical edge list, stable across runs."""
        h = hashlib.sha256()
        h.update(np.int64(self.n_nodes).tobytes())
        h.update(np.ascontiguousarray(self.edges, dtype="<i8").tobytes())
        h.update(np.ascontiguousarray(self.weights, dtype="<f8").tobytes())
        return h.hexdigest()


@dataclass(frozen=True, eq=False)
class LabeledGraph:
    """A graph plus optional node class labels, edge failure flags and node names."""

    graph: Graph
    node_labels: np.ndarray | None = None
    edge_labels: np.ndarray | None = None
    node_names: tuple | None = field(default=None)

    def __post_init__(self):
        if self.node_labels is not None and len(self.node_labels) != self.graph.n_nodes:
            raise GraphError("node label count must equal n_nodes")
        if self.edge_labels is not None and len(self.edge_labels) != self.graph.n_edges:
            raise GraphError("edge label count must equal edge count")


def matrix_digest(m: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(m, dtype="<f8").tobytes()).hexdigest()


def laplacian_of(w: np.ndarray) -> np.ndarray:
    """Combinatorial Laplacian ``D - W`` of a dense symmetric affinity."""
    return np.diag(w.sum(axis=1)) - w


def build_laplacian(g: Graph, weighted: bool = True) -> np.ndarray:
    """Dense combinatorial Laplacian ``L = D - W`` of ``g``."""
    return laplacian_of(g.adjacency(weighted=weighted))


def connected_components(g: Graph) -> list[set]:
    """BFS components, ordered by their smallest node id."""
    adj = g.neighbors()
    seen = np.zeros(g.n_nodes, dtype=bool)
    comps = []
    for root in range(g.n_nodes):
        if seen[root]:
            continue
        seen[root] = True
        comp = {root}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.add(v)
                    queue.append(v)
        comps.append(comp)
    return comps


def is_connected(g: Graph) -> bool:
    return len(connected_components(g)) == 1


def require_connected(g: Graph) -> None:
    n = len(connected_components(g))
    if n != 1:
        raise GraphError(f"graph must be connected, found {n} components")


# --- generators -------------------------------------------------------------


def generate_barbell(m1: int, m2: int) -> Graph:
    """Two ``K_m1`` cliques joined by a path of ``m2`` handle nodes.

    Numbering: clique ``0..m1-1``, handle ``m1..m1+m2-1``, second clique
    after that. Nodes ``m1-1`` and ``m1+m2`` attach to the handle ends.
    """
    if m1 < 3 or m2 < 1:
        raise GraphError("barbell needs m1 >= 3 and m2 >= 1")
    n = 2 * m1 + m2
    edges = []
    second = m1 + m2
    for a in range(m1):
        for b in range(a + 1, m1):
            edges.append((a, b))
            edges.append((second + a, second + b))
    chain = [m1 - 1, *range(m1, m1 + m2), second]
    edges.extend(zip(chain[:-1], chain[1:]))
    return Graph.from_edges(n, edges)


def generate_mirrored(g: Graph, n_mirror_edges: int, rng_seed: int):
    """Two copies of ``g`` with seeded mirror edges ``i -- i+N``.

    Returns
    -------
    graph, correspondence
        ``correspondence[i]`` is the mirror of node ``i`` (an involution on
        ``0 .. 2N-1``).
    """
    n = g.n_nodes
    if not 1 <= n_mirror_edges <= n:
        raise GraphError(f"n_mirror_edges must be in [1, {n}]")
    rng = np.random.default_rng(rng_seed)
    chosen = np.sort(rng.choice(n, size=n_mirror_edges, replace=False))
    graph = _disjoint_double(g, extra=[(int(i), int(i) + n) for i in chosen])
    corr = np.concatenate([np.arange(n, 2 * n), np.arange(n)])
    return graph, corr


def _disjoint_double(g: Graph, extra=()) -> Graph:
    n = g.n_nodes
    edges = np.concatenate([g.edges, g.edges + n])
    weights = np.concatenate([g.weights, g.weights])
    if len(extra):
        edges = np.concatenate([edges, np.asarray(extra, dtype=np.int64)])
        weights = np.concatenate([weights, np.ones(len(extra))])
    return Graph.from_edges(2 * n, edges, weights)


def disjoint_double(g: Graph) -> Graph:
    """Two unconnected copies of ``g`` (node ``i`` mirrors ``i + N``)."""
    return _disjoint_double(g)


def random_connected_graph(n: int, p: float, rng) -> Graph:
    """Erdos-Renyi sample made connected by joining components along a chain."""
    rng = np.random.default_rng(rng)
    iu = np.triu_indices(n, 1)
    mask = rng.random(len(iu[0])) < p
    g = Graph.from_edges(n, zip(iu[0][mask], iu[1][mask]))
    comps = connected_components(g)
    if len(comps) > 1:
        reps = [int(rng.choice(sorted(c))) for c in comps]
        extra = list(zip(reps[:-1], reps[1:]))
        g = Graph.from_edges(n, [*map(tuple, g.edges), *extra])
    return g


# --- edge-list files --------------------------------------------------------


def _parse_rows(lines):
    rows = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if not 2 <= len(parts) <= 4:
            raise GraphError(f"row {lineno}: expected 'u v [w] [fail]', got {raw!r}")
        try:
            w = float(parts[2]) if len(parts) > 2 else 1.0
            fail = int(parts[3]) if len(parts) > 3 else None
        except ValueError:
            raise GraphError(f"row {lineno}: cannot parse {raw!r}") from None
        if fail is not None and fail not in (0, 1):
            raise GraphError(f"row {lineno}: fail flag must be 0 or 1")
        rows.append((lineno, parts[0], parts[1], w, fail))
    return rows


def load_edge_list(path, remap: bool | None = None) -> LabeledGraph:
    """Read a whitespace-separated ``u v [w] [fail]`` edge list.

    Integer ids are used directly (``n_nodes = max id + 1``) unless a token
    is not a nonnegative integer or ``remap=True``, in which case ids are
    assigned densely in order of first appearance and the original names are
    kept on ``LabeledGraph.node_names``. A ``# n_nodes=N`` header line (as
    written by :func:`write_edge_list`) preserves trailing isolated nodes.
    """
    text = Path(path).read_text(encoding="utf-8")
    rows = _parse_rows(text.splitlines())
    if not rows:
        raise GraphError(f"{path}: no edges")
    tokens = [t for r in rows for t in (r[1], r[2])]
    if remap is None:
        remap = not all(t.isdigit() for t in tokens)
    names = None
    if remap:
        ids = {}
        for t in tokens:
            ids.setdefault(t, len(ids))
        names = tuple(ids)
        to_id = ids.__getitem__
    else:
        to_id = int

    table = {}
    for lineno, a, b, w, fail in rows:
        u, v = to_id(a), to_id(b)
        if u > MAX_NODE_ID or v > MAX_NODE_ID:
            raise GraphError(f"row {lineno}: node id overflow")
        if u == v:
            raise GraphError(f"row {lineno}: self-loop at node {a}")
        if w <= 0 or not np.isfinite(w):
            raise GraphError(f"row {lineno}: nonpositive weight {w}")
        key = (min(u, v), max(u, v))
        if key in table and table[key][:2] != (w, fail):
            raise GraphError(f"row {lineno}: duplicate edge {key} with conflicting values")
        table[key] = (w, fail, lineno)

    n = len(names) if names else max(max(k) for k in table) + 1
    declared = re.search(r"^#\s*n_nodes=(\d+)", text, flags=re.M)
    if declared and not remap:
        if int(declared.group(1)) < n:
            raise GraphError(f"{path}: declared n_nodes smaller than max id + 1")
        n = int(declared.group(1))
    keys = sorted(table)
    graph = Graph(
        n,
        np.array(keys, dtype=np.int64),
        np.array([table[k][0] for k in keys]),
    )
    flags = [table[k][1] for k in keys]
    if all(f is None for f in flags):
        edge_labels = None
    elif any(f is None for f in flags):
        raise GraphError(f"{path}: fail flags must be given on every row or none")
    else:
        edge_labels = np.array(flags, dtype=np.int8)
    return LabeledGraph(graph, edge_labels=edge_labels, node_names=names)


def write_edge_list(path, g, edge_labels=None, node_names=None) -> None:
    """Write a canonical edge list (LF endings, ``%.17g`` weights).

    When ``node_names`` is given the dense-id mapping goes to
    ``<path>.ids.json``.
    """
    if isinstance(g, LabeledGraph):
        edge_labels = g.edge_labels if edge_labels is None else edge_labels
        node_names = g.node_names if node_names is None else node_names
        g = g.graph
    lines = [f"# n_nodes={g.n_nodes} n_edges={g.n_edges}"]
    for k, ((u, v), w) in enumerate(zip(g.edges, g.weights)):
        row = f"{u} {v} {w:.17g}"
        if edge_labels is not None:
            row += f" {int(edge_labels[k])}"
        lines.append(row)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    if node_names is not None:
        Path(str(path) + ".ids.json").write_text(
            json.dumps({"names": list(node_names)}, indent=1), encoding="utf-8"
        )

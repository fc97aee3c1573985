"""Brute-force reference computations used to check the fast paths.

These deliberately share no code with :mod:`spectral_spread.centrality`.
They are slow and meant for small graphs.
"""

from __future__ import annotations

import numpy as np

from .graph import Graph, require_connected


def all_pairs_distances(g: Graph, weighted: bool = False) -> np.ndarray:
    """Floyd-Warshall distance matrix (hop counts unless ``weighted``)."""
    n = g.n_nodes
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0.0)
    lengths = g.weights if weighted else np.ones(g.n_edges)
    d[g.edges[:, 0], g.edges[:, 1]] = lengths
    d[g.edges[:, 1], g.edges[:, 0]] = lengths
    for k in range(n):
        d = np.minimum(d, d[:, k : k + 1] + d[k : k + 1, :])
    return d


def enumerate_shortest_paths(g: Graph, s: int, t: int, dist=None, weighted=False, atol=1e-12):
    """Every shortest ``s -> t`` path as a list of node ids."""
    if dist is None:
        dist = all_pairs_distances(g, weighted)
    length = {}
    for (u, v), w in zip(g.edges, g.weights):
        length[(u, v)] = length[(v, u)] = w if weighted else 1.0
    adj = g.neighbors()
    paths = []

    def walk(path, travelled):
        u = path[-1]
        if u == t:
            paths.append(list(path))
            return
        for v in adj[u]:
            step = travelled + length[(u, v)]
            if abs(step + dist[v, t] - dist[s, t]) <= atol:
                path.append(v)
                walk(path, step)
                path.pop()

    walk([s], 0.0)
    return paths


def brute_force_betweenness(g: Graph, weighted: bool = False):
    """Edge and interior-vertex betweenness by explicit path enumeration.

    Returns ``(ebc, vbc)`` arrays, unordered-pair convention, ``ebc``
    aligned with ``g.edges``.
    """
    require_connected(g)
    n = g.n_nodes
    dist = all_pairs_distances(g, weighted)
    index = g.edge_index()
    ebc = np.zeros(g.n_edges)
    vbc = np.zeros(n)
    for s in range(n):
        for t in range(s + 1, n):
            paths = enumerate_shortest_paths(g, s, t, dist, weighted)
            share = 1.0 / len(paths)
            for p in paths:
                for a, b in zip(p[:-1], p[1:]):
                    ebc[index[(a, b) if a < b else (b, a)]] += share
                for i in p[1:-1]:
                    vbc[i] += share
    return ebc, vbc

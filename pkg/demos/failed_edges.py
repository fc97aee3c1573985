"""Forecasting which edges of a network fail.

A small synthetic network gets failure labels concentrated on its
high-betweenness edges. The edge-threshold rule ("FL") flags every edge
whose betweenness is above the mean. The embedding methods instead cluster
edge features in two and flag the cluster whose members have the higher
mean betweenness.

The labeled network is written in the plain "u v weight failed" edge-list
format, which is the layout the command-line tool reads.

Run:  python3 demos/failed_edges.py
"""
import tempfile
from pathlib import Path

import numpy as np

from spectral_spread import edge_betweenness, load_edge_list
from spectral_spread.graph import random_connected_graph, write_edge_list
from spectral_spread.evaluation import forecast_comparison

rng = np.random.default_rng(7)
g = random_connected_graph(60, 0.08, rng)
ebc = edge_betweenness(g).values
failed = (ebc > np.quantile(ebc, 0.8)) | (rng.random(g.n_edges) < 0.05)

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "grid.el"
    write_edge_list(path, g, edge_labels=failed.astype(np.int8))
    lg = load_edge_list(path)

print(f"{g.n_edges} edges, {int(failed.sum())} labeled failed")
rep = forecast_comparison(lg, r=20, t=32, symmetric_edges=True)
print(f"{'method':>9}  {'success':>7}  {'flagged':>7}  {'precision':>9}")
for method, v in rep.values.items():
    print(f"{method:>9}  {v['success_rate']:7.1%}  {v['predicted_size']:7d}  {v['precision']:9.1%}")

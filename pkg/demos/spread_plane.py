"""Vertex spread against spectral spread.

Every unit signal x on the graph has a spectral spread x'Lx and a vertex
spread x'Wx. The attainable pairs form a bounded region, and for each beta
the smallest eigenvalue of W - beta L gives a supporting line of it. The
script samples random signals, checks them against the bounds, and writes
the sample plus the eigenvector points to a CSV for plotting.

Run:  python3 demos/spread_plane.py [out.csv]
"""
import sys

import numpy as np

from spectral_spread import build_bcg, eigh, karate_club, q_beta
from spectral_spread.graph import laplacian_of
from spectral_spread.spectral import spread_bounds, spread_point

w = build_bcg(karate_club())
l = laplacian_of(w)
eig_l, eig_w = eigh(l), eigh(w)
print(f"s_L in [0, {eig_l.values[-1]:.1f}], s_W in [{eig_w.values[0]:.1f}, {eig_w.values[-1]:.1f}]")

rng = np.random.default_rng(0)
signals = rng.standard_normal((2000, 34))
signals /= np.linalg.norm(signals, axis=1, keepdims=True)
points = np.array([[p.s_L, p.s_W] for p in (spread_point(l, w, x) for x in signals)])
inside = sum(spread_bounds(spread_point(l, w, x), eig_l, eig_w) for x in signals)
print(f"{inside}/{len(signals)} random signals inside the bounds")

# for each beta the whole cloud sits above the line s_W - beta s_L = q(beta)
for beta in (-1000.0, -10.0, -0.2):
    q = q_beta(w, l, beta)
    margin = (points[:, 1] - beta * points[:, 0] - q).min()
    print(f"beta={beta:>8}: q={q:12.2f}, smallest margin over samples {margin:.3g}")

if len(sys.argv) > 1:
    lap_pts = np.array([[p.s_L, p.s_W] for p in (spread_point(l, w, v) for v in eig_l.vectors.T)])
    rows = np.vstack([np.c_[points, np.zeros(len(points))], np.c_[lap_pts, np.ones(len(lap_pts))]])
    np.savetxt(sys.argv[1], rows, delimiter=",", header="s_L,s_W,is_eigenvector", comments="", fmt="%.10g")
    print(f"wrote {len(rows)} points to {sys.argv[1]}")

import networkx as nx
import numpy as np
import pytest

from spectral_spread.centrality import (
    HOP,
    WEIGHTED,
    betweenness,
    build_bcg,
    edge_betweenness,
    vertex_betweenness,
)
from spectral_spread.graph import Graph, GraphError, generate_barbell
from spectral_spread.oracles import brute_force_betweenness, enumerate_shortest_paths

from conftest import complete_graph, path_graph, random_graphs, star_graph


def test_p3_edges():
    assert edge_betweenness(path_graph(3)).values.tolist() == [2.0, 2.0]


def test_k3_edges():
    assert edge_betweenness(complete_graph(3)).values.tolist() == [1.0, 1.0, 1.0]


def test_star_edges():
    assert edge_betweenness(star_graph(3)).values.tolist() == [3.0, 3.0, 3.0]


def test_star_vertices():
    assert vertex_betweenness(star_graph(3)).values.tolist() == [3.0, 0.0, 0.0, 0.0]


def test_p3_middle():
    assert vertex_betweenness(path_graph(3)).values.tolist() == [0.0, 1.0, 0.0]


def test_oracle_enumerates_diamond():
    g = Graph.from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    paths = enumerate_shortest_paths(g, 0, 3)
    assert sorted(paths) == [[0, 1, 3], [0, 2, 3]]


def test_karate_matches_oracle(karate):
    ebc, vbc = betweenness(karate)
    ref_e, ref_v = brute_force_betweenness(karate)
    np.testing.assert_allclose(ebc.values, ref_e, atol=1e-9, rtol=0)
    np.testing.assert_allclose(vbc.values, ref_v, atol=1e-9, rtol=0)
    assert vbc.values[0] == pytest.approx(ref_v[0], abs=1e-9)


def test_karate_weighted_metric_on_unit_weights(karate):
    ebc = edge_betweenness(karate, WEIGHTED)
    np.testing.assert_allclose(ebc.values, edge_betweenness(karate).values, atol=1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_weighted_metric_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    for g in random_graphs(8, 9, seed):
        g = g.with_weights(rng.integers(1, 4, g.n_edges).astype(float))
        ebc, vbc = betweenness(g, WEIGHTED)
        ref_e, ref_v = brute_force_betweenness(g, weighted=True)
        np.testing.assert_allclose(ebc.values, ref_e, atol=1e-9)
        np.testing.assert_allclose(vbc.values, ref_v, atol=1e-9)


def test_matches_networkx_on_karate(karate):
    # networkx normalizes nothing when normalized=False and counts unordered pairs
    nxg = nx.Graph(karate.edges.tolist())
    ref = nx.edge_betweenness_centrality(nxg, normalized=False)
    ours = edge_betweenness(karate).as_dict()
    for (u, v), x in ref.items():
        assert ours[(min(u, v), max(u, v))] == pytest.approx(x, abs=1e-9)


def test_disconnected_rejected():
    with pytest.raises(GraphError, match="connected"):
        edge_betweenness(Graph.from_edges(4, [(0, 1), (2, 3)]))


def test_unknown_metric(karate):
    with pytest.raises(ValueError):
        edge_betweenness(karate, "geodesic")


def test_bcg_p3():
    assert build_bcg(path_graph(3)).tolist() == [[0, 2, 0], [2, 0, 2], [0, 2, 0]]


def test_bcg_k3():
    assert np.array_equal(build_bcg(complete_graph(3)), np.ones((3, 3)) - np.eye(3))


def test_bcg_barbell_handle_dominates(barbell):
    w = build_bcg(barbell)
    handle = [w[i, i + 1] for i in range(4, 15)]
    clique = [w[i, j] for i in range(5) for j in range(i + 1, 5)]
    assert min(handle) > max(clique)


def test_bcg_pattern_matches_adjacency(karate):
    w = build_bcg(karate)
    assert np.array_equal(w > 0, karate.adjacency() > 0)
    assert np.array_equal(w, w.T)


def test_leaf_vertex_zero(karate):
    vbc = vertex_betweenness(karate).values
    leaves = np.flatnonzero(karate.degrees() == 1)
    assert leaves.size and np.all(vbc[leaves] == 0)


def test_handshake_identity_karate(karate):
    ebc, vbc = betweenness(karate)
    w = build_bcg(karate, ebc=ebc)
    np.testing.assert_allclose(w.sum(axis=1), 2 * vbc.values + karate.n_nodes - 1, atol=1e-9)


def test_thread_count_does_not_change_bits():
    g = generate_barbell(40, 100)  # 180 nodes: two source blocks
    a = edge_betweenness(g, HOP, threads=1).values
    b = edge_betweenness(g, HOP, threads=3).values
    assert a.tobytes() == b.tobytes()


def test_weight_scaling_invariant_for_hop(karate):
    scaled = karate.with_weights(np.full(karate.n_edges, 7.5))
    assert np.array_equal(edge_betweenness(scaled).values, edge_betweenness(karate).values)

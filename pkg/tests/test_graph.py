import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectral_spread.graph import (
    Graph,
    GraphError,
    build_laplacian,
    connected_components,
    disjoint_double,
    generate_barbell,
    generate_mirrored,
    load_edge_list,
    write_edge_list,
)

from conftest import complete_graph, path_graph


def write(tmp_path, text, name="g.el"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestLoadEdgeList:
    def test_minimal_path(self, tmp_path):
        lg = load_edge_list(write(tmp_path, "0 1\n1 2"))
        assert lg.graph.n_nodes == 3
        assert lg.graph.edges.tolist() == [[0, 1], [1, 2]]
        assert lg.graph.weights.tolist() == [1.0, 1.0]
        assert lg.edge_labels is None

    def test_self_loop_rejected(self, tmp_path):
        with pytest.raises(GraphError, match="self-loop"):
            load_edge_list(write(tmp_path, "0 1\n3 3 1.0\n"))

    def test_karate_counts(self, karate):
        assert karate.n_nodes == 34
        assert karate.n_edges == 78

    def test_comments_weights_flags(self, tmp_path):
        lg = load_edge_list(write(tmp_path, "# header\n2 0 0.5 1\n1 2 2 0\n"))
        assert lg.graph.edges.tolist() == [[0, 2], [1, 2]]
        assert lg.graph.weights.tolist() == [0.5, 2.0]
        assert lg.edge_labels.tolist() == [1, 0]

    @pytest.mark.parametrize(
        "text, match",
        [
            ("0 1\n1 0 2.0\n", "conflicting"),
            ("0 1 0\n", "nonpositive"),
            ("0 1 -1\n", "nonpositive"),
            ("0 1\nfoo\n", "row 2"),
            ("0 1 x\n", "row 1"),
            ("0 1 1 2\n", "fail flag"),
            ("0 1 1 1\n1 2\n", "every row or none"),
            ("0 99999999999\n", "overflow"),
        ],
    )
    def test_errors(self, tmp_path, text, match):
        with pytest.raises(GraphError, match=match):
            load_edge_list(write(tmp_path, text))

    def test_consistent_duplicate_merged(self, tmp_path):
        lg = load_edge_list(write(tmp_path, "0 1 2.0\n1 0 2.0\n"))
        assert lg.graph.n_edges == 1

    def test_string_ids_remapped(self, tmp_path):
        lg = load_edge_list(write(tmp_path, "alice bob\nbob carol\n"))
        assert lg.node_names == ("alice", "bob", "carol")
        assert lg.graph.edges.tolist() == [[0, 1], [1, 2]]
        out = tmp_path / "out.el"
        write_edge_list(out, lg)
        assert (tmp_path / "out.el.ids.json").exists()

    def test_round_trip_idempotent(self, tmp_path, karate):
        weighted = karate.with_weights(np.linspace(0.1, 3.3, karate.n_edges))
        a = tmp_path / "a.el"
        b = tmp_path / "b.el"
        write_edge_list(a, weighted)
        g1 = load_edge_list(a).graph
        write_edge_list(b, g1)
        g2 = load_edge_list(b).graph
        assert a.read_bytes() == b.read_bytes()
        assert np.array_equal(g2.edges, weighted.edges)
        assert np.array_equal(g2.weights, weighted.weights)

    def test_isolated_trailing_node_preserved(self, tmp_path):
        g = Graph.from_edges(4, [(0, 1)])
        write_edge_list(tmp_path / "g.el", g)
        assert load_edge_list(tmp_path / "g.el").graph.n_nodes == 4


class TestLaplacian:
    def test_p2(self):
        assert build_laplacian(path_graph(2)).tolist() == [[1, -1], [-1, 1]]

    def test_k3(self):
        lap = build_laplacian(complete_graph(3))
        assert np.all(np.diag(lap) == 2)
        assert np.all(lap[~np.eye(3, dtype=bool)] == -1)

    def test_barbell_kernel(self, barbell):
        lap = build_laplacian(barbell)
        assert np.abs(lap.sum(axis=1)).max() <= 1e-12
        vals = np.linalg.eigvalsh(lap)
        assert vals[0] >= -1e-9
        assert np.sum(np.abs(vals) < 1e-9) == 1

    def test_weighted_offdiagonal(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2)], [2.5, 0.5])
        lap = build_laplacian(g)
        assert lap[0, 1] == -2.5 and lap[1, 1] == 3.0


class TestGenerators:
    def test_barbell_5_10(self, barbell):
        assert barbell.n_nodes == 20
        assert barbell.n_edges == 31
        deg = barbell.degrees()
        assert deg[4] == 5 and deg[15] == 5
        assert np.all(deg[5:15] == 2)
        assert np.all(deg[[0, 1, 2, 3, 16, 17, 18, 19]] == 4)

    def test_barbell_3_1(self):
        g = generate_barbell(3, 1)
        assert (g.n_nodes, g.n_edges) == (7, 8)

    @pytest.mark.parametrize("m1, m2", [(2, 3), (5, 0)])
    def test_barbell_range(self, m1, m2):
        with pytest.raises(GraphError):
            generate_barbell(m1, m2)

    @given(st.integers(3, 9), st.integers(1, 12))
    def test_barbell_edge_count(self, m1, m2):
        assert generate_barbell(m1, m2).n_edges == m1 * (m1 - 1) + m2 + 1

    def test_mirrored_counts(self, karate):
        g, corr = generate_mirrored(karate, 1, 0)
        assert (g.n_nodes, g.n_edges) == (68, 157)
        assert np.array_equal(corr[corr], np.arange(68))

    def test_mirrored_zero_rejected(self, karate):
        with pytest.raises(GraphError):
            generate_mirrored(karate, 0, 0)

    def test_mirrored_deterministic(self, karate):
        a, _ = generate_mirrored(karate, 7, 42)
        b, _ = generate_mirrored(karate, 7, 42)
        assert np.array_equal(a.edges, b.edges)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 34), st.integers(0, 10_000))
    def test_mirrored_degrees(self, k, seed):
        from spectral_spread.datasets import karate_club

        base = karate_club()
        g, _ = generate_mirrored(base, k, seed)
        deg = g.degrees()
        bump = np.concatenate([deg[:34], deg[34:]]) - np.tile(base.degrees(), 2)
        assert set(np.unique(bump)) <= {0, 1}
        assert bump[:34].sum() == k
        assert np.array_equal(bump[:34], bump[34:])


class TestComponents:
    def test_p3(self):
        assert connected_components(path_graph(3)) == [{0, 1, 2}]

    def test_two_edges(self):
        assert connected_components(Graph.from_edges(4, [(0, 1), (2, 3)])) == [{0, 1}, {2, 3}]

    def test_disjoint_double_karate(self, karate):
        comps = connected_components(disjoint_double(karate))
        assert [len(c) for c in comps] == [34, 34]


class TestGraphInvariants:
    def test_rejects_bad_arrays(self):
        with pytest.raises(GraphError):
            Graph(3, np.array([[1, 0]]), np.array([1.0]))
        with pytest.raises(GraphError):
            Graph(2, np.array([[0, 1], [0, 1]]), np.array([1.0, 1.0]))
        with pytest.raises(GraphError):
            Graph(2, np.array([[0, 2]]), np.array([1.0]))

    def test_immutable(self, karate):
        with pytest.raises(ValueError):
            karate.edges[0, 0] = 5

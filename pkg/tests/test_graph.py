import numpy as np
import pytest

from mvfuzzy.graph import build_graph, knn_similarity, laplacian
from oracles import pairwise_smoothness


class TestKnnSimilarity:
    def test_coincident_points_get_unit_weight(self):
        x = np.array([[1.0, 2.0], [1.0, 2.0]])
        s = knn_similarity(x, n_neighbors=1)
        assert s[0, 1] == 1.0 and s[1, 0] == 1.0

    def test_collinear_hand_values(self):
        x = np.array([[0.0], [1.0], [100.0]])
        s = knn_similarity(x, n_neighbors=1, bandwidth=1.0)
        np.testing.assert_allclose(s[0, 1], np.exp(-0.5))
        assert s[0, 2] == 0.0 and s[2, 0] == 0.0

    def test_kernel_range(self):
        rng = np.random.default_rng(0)
        s = knn_similarity(rng.normal(size=(40, 5)), n_neighbors=6)
        assert s.max() <= 1.0 and s.min() >= 0.0

    def test_symmetry_and_zero_diagonal(self):
        rng = np.random.default_rng(1)
        s = knn_similarity(rng.normal(size=(30, 4)), n_neighbors=4)
        np.testing.assert_allclose(s, s.T, atol=0)
        np.testing.assert_array_equal(np.diag(s), 0.0)

    def test_neighbor_count_validated(self):
        x = np.zeros((5, 2))
        with pytest.raises(ValueError):
            knn_similarity(x, n_neighbors=5)
        with pytest.raises(ValueError):
            knn_similarity(x, n_neighbors=0)

    def test_bad_bandwidth_rejected(self):
        with pytest.raises(ValueError):
            knn_similarity(np.zeros((4, 2)), n_neighbors=1, bandwidth=-1.0)


class TestLaplacian:
    def test_zero_similarity(self):
        g = laplacian(np.zeros((4, 4)))
        np.testing.assert_array_equal(g.laplacian, 0.0)

    def test_two_node_graph(self):
        g = laplacian(np.array([[0.0, 1.0], [1.0, 0.0]]))
        np.testing.assert_array_equal(g.laplacian,
                                      [[1.0, -1.0], [-1.0, 1.0]])

    def test_trace_identity_against_bruteforce(self):
        rng = np.random.default_rng(2)
        s = rng.random((50, 50))
        s = 0.5 * (s + s.T)
        np.fill_diagonal(s, 0.0)
        g = laplacian(s)
        z = rng.normal(size=(50, 3))
        quad = float(np.trace(z.T @ g.laplacian @ z))
        brute = pairwise_smoothness(s, z)
        assert abs(quad - brute) <= 1e-10 * abs(brute)

    def test_asymmetric_rejected(self):
        s = np.array([[0.0, 1.0], [0.5, 0.0]])
        with pytest.raises(ValueError):
            laplacian(s)

    def test_invariants_on_knn_graphs(self):
        rng = np.random.default_rng(3)
        for n, d, k in ((10, 2, 2), (60, 7, 5), (120, 3, 8)):
            g = build_graph(rng.normal(size=(n, d)), n_neighbors=k)
            assert np.max(np.abs(g.similarity - g.similarity.T)) <= 1e-10
            assert np.max(np.abs(g.laplacian.sum(axis=1))) <= 1e-10
            assert np.linalg.eigvalsh(g.laplacian).min() >= -1e-8

    def test_extra_edge_never_decreases_smoothness(self):
        rng = np.random.default_rng(4)
        s = rng.random((12, 12))
        s = 0.5 * (s + s.T)
        np.fill_diagonal(s, 0.0)
        z = rng.normal(size=(12, 2))
        base = float(np.trace(z.T @ laplacian(s).laplacian @ z))
        bumped = s.copy()
        bumped[2, 7] += 0.5
        bumped[7, 2] += 0.5
        after = float(np.trace(z.T @ laplacian(bumped).laplacian @ z))
        assert after >= base - 1e-12

import numpy as np
import pytest

from mvfuzzy.evaluation import (acc, evaluate_embedding, grid_search, kmeans,
                                nmi, purity)
from mvfuzzy.solver import Hyperparams
from oracles import acc_oracle, kmeans_best_sse, nmi_oracle


def sse_of(points, labels):
    total = 0.0
    for c in np.unique(labels):
        member = points[labels == c]
        total += float(((member - member.mean(axis=0)) ** 2).sum())
    return total


class TestKmeans:
    def test_one_cluster_per_point(self):
        rng = np.random.default_rng(0)
        points = rng.normal(size=(6, 2))
        labels = kmeans(points, 6, restarts=5, seed=1)
        assert len(np.unique(labels)) == 6
        assert sse_of(points, labels) == 0.0

    def test_two_blobs_recovered(self):
        rng = np.random.default_rng(1)
        points = np.vstack([rng.normal(0, 0.1, size=(20, 2)),
                            rng.normal(10, 0.1, size=(20, 2))])
        labels = kmeans(points, 2, restarts=5, seed=2)
        assert len(np.unique(labels[:20])) == 1
        assert len(np.unique(labels[20:])) == 1
        assert labels[0] != labels[-1]

    def test_reaches_exhaustive_optimum(self):
        points = np.array([[0.0], [1.0], [2.0], [10.0], [11.0], [12.0]])
        labels = kmeans(points, 2, restarts=10, seed=3)
        best = kmeans_best_sse(points, 2)
        assert best == 4.0
        assert sse_of(points, labels) == pytest.approx(best)

    def test_cluster_count_validated(self):
        with pytest.raises(ValueError):
            kmeans(np.zeros((3, 1)), 4)

    def test_deterministic(self):
        rng = np.random.default_rng(4)
        points = rng.normal(size=(30, 3))
        a = kmeans(points, 4, restarts=3, seed=7)
        b = kmeans(points, 4, restarts=3, seed=7)
        np.testing.assert_array_equal(a, b)

    def test_empty_cluster_reseeded_at_farthest_point(self):
        from mvfuzzy.evaluation import _lloyd

        points = np.array([[0.0], [0.1], [10.0]])
        # Third center attracts nobody on the first assignment.
        centers = np.array([[0.0], [0.05], [100.0]])
        labels, sse = _lloyd(points, centers)
        assert len(np.unique(labels)) == 3
        assert sse == 0.0


class TestNmi:
    def test_identical_partitions(self):
        assert nmi([0, 0, 1, 1], [0, 0, 1, 1]) == 1.0

    def test_independent_partitions(self):
        assert nmi([0, 1, 0, 1], [0, 0, 1, 1]) == 0.0

    def test_matches_contingency_oracle(self):
        pred = [0, 0, 1, 1]
        true = ["a", "a", "a", "b"]
        assert nmi(pred, true) == pytest.approx(nmi_oracle(pred, true),
                                                abs=1e-12)

    def test_single_cluster_edge_cases(self):
        assert nmi([0, 0, 0], [5, 5, 5]) == 1.0
        assert nmi([0, 0, 0], [0, 1, 2]) == 0.0

    def test_symmetric(self):
        rng = np.random.default_rng(5)
        a = rng.integers(0, 3, size=40)
        b = rng.integers(0, 4, size=40)
        assert nmi(a, b) == pytest.approx(nmi(b, a), abs=1e-12)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            nmi([0, 1], [0, 1, 2])


class TestAcc:
    def test_relabeled_partition_is_perfect(self):
        true = [0, 0, 1, 1, 2, 2]
        pred = [2, 2, 0, 0, 1, 1]
        assert acc(pred, true) == 1.0

    def test_alternating_half(self):
        assert acc([0, 0, 1, 1], ["a", "b", "a", "b"]) == 0.5

    def test_matches_exhaustive_oracle(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            n = int(rng.integers(4, 20))
            pred = rng.integers(0, int(rng.integers(1, 6)), size=n)
            true = rng.integers(0, int(rng.integers(1, 6)), size=n)
            assert acc(pred, true) == acc_oracle(pred.tolist(),
                                                 true.tolist())


class TestPurity:
    def test_renamed_clusters(self):
        assert purity([5, 5, 9, 9], [0, 0, 1, 1]) == 1.0

    def test_hand_counted(self):
        assert purity([1, 1, 1, 2], ["a", "a", "b", "b"]) == 0.75

    def test_dominates_acc(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            n = int(rng.integers(4, 25))
            pred = rng.integers(0, 4, size=n)
            true = rng.integers(0, 4, size=n)
            assert purity(pred, true) >= acc(pred, true) - 1e-15

    def test_metric_range(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            pred = rng.integers(0, 3, size=15)
            true = rng.integers(0, 3, size=15)
            for metric in (nmi, acc, purity):
                assert 0.0 <= metric(pred, true) <= 1.0


class TestPermutationInvariance:
    def test_all_metrics(self):
        rng = np.random.default_rng(9)
        for _ in range(30):
            pred = rng.integers(0, 4, size=30)
            true = rng.integers(0, 3, size=30)
            pred_perm = rng.permutation(4)[pred]
            true_perm = rng.permutation(3)[true]
            for metric in (nmi, acc, purity):
                assert metric(pred, true) == pytest.approx(
                    metric(pred_perm, true_perm), abs=1e-12)


class TestEvaluateEmbedding:
    def test_report_contents(self):
        rng = np.random.default_rng(10)
        z = np.vstack([rng.normal(0, 0.1, size=(15, 2)),
                       rng.normal(8, 0.1, size=(15, 2))])
        truth = np.repeat([0, 1], 15)
        report = evaluate_embedding(z, truth, repeats=5, restarts=3, seed=0)
        assert report.nmi_runs.shape == (5,)
        assert report.nmi == 1.0 and report.acc == 1.0
        assert report.nmi_std == 0.0
        assert report.best_assignment.shape == (30,)
        assert min(report.nmi_runs.min(), report.purity_runs.min()) >= 0.0

    def test_mean_within_run_range(self):
        rng = np.random.default_rng(11)
        z = rng.normal(size=(40, 3))
        truth = rng.integers(0, 3, size=40)
        report = evaluate_embedding(z, truth, repeats=8, restarts=2, seed=1)
        for runs, mean in ((report.nmi_runs, report.nmi),
                           (report.acc_runs, report.acc),
                           (report.purity_runs, report.purity)):
            assert runs.min() <= mean <= runs.max()
            assert runs.std() >= 0.0


class TestGridSearch:
    def test_single_point_equals_direct_evaluation(self, blob_dataset):
        hp = Hyperparams(max_iter=10, seed=6)
        result = grid_search(blob_dataset, [hp], repeats=4, restarts=3,
                             seed=9)
        assert len(result.points) == 1
        assert result.best["nmi"] == 0
        assert result.points[0].report is not None

    def test_argmax_selection(self, blob_dataset):
        good = Hyperparams(max_iter=15, seed=6)
        bad = Hyperparams(max_iter=0, seed=6)
        result = grid_search(blob_dataset, [bad, good], repeats=4,
                             restarts=3, seed=9)
        scores = [p.report.nmi for p in result.points]
        assert result.best["nmi"] == int(np.argmax(scores))

    def test_deterministic_table(self, blob_dataset, tmp_path):
        hp = Hyperparams(max_iter=8, seed=2)
        paths = []
        for tag in ("a", "b"):
            result = grid_search(blob_dataset, [hp], repeats=3, restarts=2,
                                 seed=4)
            path = tmp_path / f"sweep_{tag}.csv"
            result.write_csv(path)
            paths.append(path.read_bytes())
        assert paths[0] == paths[1]

    def test_empty_grid_rejected(self, blob_dataset):
        with pytest.raises(ValueError):
            grid_search(blob_dataset, [])

    def test_refit_per_repeat_runs(self, blob_dataset):
        hp = Hyperparams(max_iter=5, seed=3)
        result = grid_search(blob_dataset, [hp], repeats=2, restarts=2,
                             seed=5, refit_per_repeat=True)
        assert result.points[0].report.nmi_runs.shape == (2,)

    def test_failed_point_marked_without_aborting(self, blob_dataset,
                                                  monkeypatch):
        import mvfuzzy.evaluation as eval_mod
        from mvfuzzy.solver import NumericFailure

        real_fit = eval_mod.fit
        calls = {"n": 0}

        def flaky_fit(dataset, hp):
            calls["n"] += 1
            if calls["n"] == 1:
                raise NumericFailure("singular", view=0, iteration=1)
            return real_fit(dataset, hp)

        monkeypatch.setattr(eval_mod, "fit", flaky_fit)
        grid = [Hyperparams(max_iter=4, seed=1),
                Hyperparams(max_iter=4, seed=2)]
        result = grid_search(blob_dataset, grid, repeats=2, restarts=2,
                             seed=0)
        assert result.points[0].error is not None
        assert result.points[0].report is None
        assert result.points[1].report is not None
        assert result.best["nmi"] == 1

    def test_metric_larger_than_five_clusters(self):
        rng = np.random.default_rng(12)
        pred = rng.integers(0, 8, size=60)
        true = rng.integers(0, 8, size=60)
        value = acc(pred, true)
        assert 0.0 <= value <= 1.0
        assert value >= (pred == true).mean() - 1e-15

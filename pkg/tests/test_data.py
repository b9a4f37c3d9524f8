import numpy as np
import pytest

from mvfuzzy.data import (DataError, MultiViewDataset, load_dataset,
                          make_synthetic, save_dataset, write_matrix_csv)


def write_csv(path, rows):
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(",".join(str(c) for c in row) + "\n")


class TestLoadDataset:
    def test_two_views_with_labels(self, tmp_path):
        rng = np.random.default_rng(0)
        a = rng.normal(size=(100, 3))
        b = rng.normal(size=(100, 5))
        write_matrix_csv(a, tmp_path / "a.csv")
        write_matrix_csv(b, tmp_path / "b.csv")
        write_csv(tmp_path / "y.csv", [[i % 4] for i in range(100)])
        ds = load_dataset([tmp_path / "a.csv", tmp_path / "b.csv"],
                          tmp_path / "y.csv")
        assert ds.n_instances == 100 and ds.n_views == 2
        assert ds.view_dims == [3, 5]
        assert ds.n_classes == 4
        np.testing.assert_allclose(ds.views[0], a)

    def test_row_count_mismatch_names_counts(self, tmp_path):
        write_csv(tmp_path / "a.csv", [[1.0]] * 100)
        write_csv(tmp_path / "b.csv", [[1.0]] * 99)
        with pytest.raises(DataError) as err:
            load_dataset([tmp_path / "a.csv", tmp_path / "b.csv"])
        assert "100" in str(err.value) and "99" in str(err.value)

    def test_non_numeric_cell_reports_position(self, tmp_path):
        write_csv(tmp_path / "a.csv", [[1.0, 2.0], [3.0, "oops"]])
        write_csv(tmp_path / "b.csv", [[1.0], [1.0]])
        with pytest.raises(DataError) as err:
            load_dataset([tmp_path / "a.csv", tmp_path / "b.csv"])
        msg = str(err.value)
        assert "row 2" in msg and "column 2" in msg

    def test_rare_class_is_accepted(self, tmp_path):
        write_csv(tmp_path / "a.csv", [[float(i)] for i in range(10)])
        labels = [[0]] * 9 + [[7]]
        write_csv(tmp_path / "y.csv", labels)
        ds = load_dataset([tmp_path / "a.csv"], tmp_path / "y.csv")
        assert ds.n_classes == 2

    def test_header_skipping(self, tmp_path):
        with open(tmp_path / "a.csv", "w") as fh:
            fh.write("f1,f2\n1.0,2.0\n3.0,4.0\n")
        ds = load_dataset([tmp_path / "a.csv"], header=True)
        assert ds.n_instances == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            load_dataset([tmp_path / "nope.csv"])

    def test_label_length_mismatch(self, tmp_path):
        write_csv(tmp_path / "a.csv", [[1.0], [2.0], [3.0]])
        write_csv(tmp_path / "y.csv", [[0], [1]])
        with pytest.raises(DataError):
            load_dataset([tmp_path / "a.csv"], tmp_path / "y.csv")


class TestDatasetValidation:
    def test_view_row_mismatch(self):
        with pytest.raises(DataError):
            MultiViewDataset(views=[np.zeros((3, 2)), np.zeros((4, 2))])

    def test_non_finite_rejected(self):
        bad = np.zeros((3, 2))
        bad[0, 0] = np.inf
        with pytest.raises(DataError):
            MultiViewDataset(views=[bad])

    def test_too_few_instances(self):
        with pytest.raises(DataError):
            MultiViewDataset(views=[np.zeros((1, 2))])


class TestMakeSynthetic:
    def test_reproducible_files(self, tmp_path):
        for tag in ("one", "two"):
            ds = make_synthetic(n_instances=50, n_views=2, n_clusters=4,
                                noise=0.1, seed=7)
            save_dataset(ds, tmp_path / tag, seed=7)
        for name in ("view_0.csv", "view_1.csv", "labels.csv"):
            a = (tmp_path / "one" / name).read_bytes()
            b = (tmp_path / "two" / name).read_bytes()
            assert a == b

    def test_zero_noise_collapses_clusters(self):
        ds = make_synthetic(n_instances=30, n_views=2, n_clusters=3,
                            noise=0.0, seed=1)
        for view in ds.views:
            for c in range(3):
                member = view[ds.labels == c]
                assert np.ptp(member, axis=0).max() == 0.0

    def test_labels_cover_all_clusters(self):
        ds = make_synthetic(n_instances=25, n_clusters=4, seed=3)
        assert ds.n_classes == 4

    def test_dims_respected(self):
        ds = make_synthetic(n_instances=20, n_views=3, dims=[2, 3, 4],
                            seed=0)
        assert ds.view_dims == [2, 3, 4]

    def test_csv_roundtrip_is_exact(self, tmp_path):
        ds = make_synthetic(n_instances=20, n_views=2, seed=9)
        save_dataset(ds, tmp_path, seed=9)
        loaded = load_dataset([tmp_path / "view_0.csv",
                               tmp_path / "view_1.csv"],
                              tmp_path / "labels.csv")
        for orig, back in zip(ds.views, loaded.views):
            np.testing.assert_array_equal(orig, back)

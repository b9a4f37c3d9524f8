"""Multi-view dataset container, CSV ingestion and synthetic data generation."""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class DataError(ValueError):
    """Raised when input files are missing, malformed or inconsistent."""


@dataclass
class MultiViewDataset:
    """Per-view instance matrices sharing one instance axis.

    views   -- list of (N, d_v) float arrays, one per view
    labels  -- optional (N,) integer class labels
    """

    views: list = field(default_factory=list)
    labels: np.ndarray | None = None

    def __post_init__(self):
        if not self.views:
            raise DataError("dataset needs at least one view")
        self.views = [np.asarray(v, dtype=float) for v in self.views]
        n = self.views[0].shape[0]
        for i, v in enumerate(self.views):
            if v.ndim != 2:
                raise DataError(f"view {i} is not a 2-D matrix")
            if v.shape[0] != n:
                raise DataError(
                    f"view {i} has {v.shape[0]} rows but view 0 has {n}"
                )
            if not np.all(np.isfinite(v)):
                raise DataError(f"view {i} contains non-finite values")
        if n < 2:
            raise DataError("dataset needs at least 2 instances")
        if self.labels is not None:
            self.labels = np.asarray(self.labels)
            if self.labels.shape != (n,):
                raise DataError(
                    f"labels have shape {self.labels.shape}, expected ({n},)"
                )

    @property
    def n_instances(self):
        return self.views[0].shape[0]

    @property
    def n_views(self):
        return len(self.views)

    @property
    def view_dims(self):
        return [v.shape[1] for v in self.views]

    @property
    def n_classes(self):
        if self.labels is None:
            return None
        return int(np.unique(self.labels).size)


def _read_numeric_csv(path, header=False):
    """Parse a numeric CSV into a 2-D float array.

    Reports row/column (1-based, after any skipped header) on the first
    non-numeric cell instead of failing with a bare float() error.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"file not found: {path}")
    rows = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if header:
        lines = lines[1:]
    for r, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        cells = line.split(",")
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise DataError(
                f"{path}: row {r} has {len(cells)} columns, expected {width}"
            )
        parsed = []
        for c, cell in enumerate(cells, start=1):
            try:
                parsed.append(float(cell))
            except ValueError:
                raise DataError(
                    f"{path}: non-numeric cell at row {r}, column {c}: {cell!r}"
                ) from None
        rows.append(parsed)
    if not rows:
        raise DataError(f"{path}: no data rows")
    return np.asarray(rows, dtype=float)


def load_labels(path, header=False):
    """Read a single-column CSV of class identifiers (numeric or strings)."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"file not found: {path}")
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh.read().splitlines()]
    if header:
        lines = lines[1:]
    values = [ln for ln in lines if ln]
    if not values:
        raise DataError(f"{path}: no labels")
    # Map arbitrary class identifiers to dense integer codes.
    _, codes = np.unique(values, return_inverse=True)
    return codes.astype(np.int64)


def load_dataset(view_paths, label_path=None, header=False):
    """Load per-view CSVs (rows = instances) plus an optional label column.

    Raises DataError naming the offending file when row counts disagree
    across views or a cell fails to parse.
    """
    views = []
    for p in view_paths:
        views.append(_read_numeric_csv(p, header=header))
    n = views[0].shape[0]
    for p, v in zip(view_paths, views):
        if v.shape[0] != n:
            raise DataError(
                f"view row counts disagree: {view_paths[0]} has {n} rows, "
                f"{p} has {v.shape[0]}"
            )
    labels = None
    if label_path is not None:
        labels = load_labels(label_path, header=header)
        if labels.shape[0] != n:
            raise DataError(
                f"labels file {label_path} has {labels.shape[0]} rows, "
                f"views have {n}"
            )
    return MultiViewDataset(views=views, labels=labels)


def make_synthetic(n_instances=200, n_views=2, n_clusters=4, noise=0.1,
                   seed=7, dims=None, separation=4.0):
    """Generate a multi-view blob dataset with shared cluster structure.

    One latent cluster assignment is drawn; each view is a distinct random
    linear map of the cluster centers plus per-view Gaussian noise, so the
    views agree on the clustering but differ in realization. noise=0 makes
    all points of a cluster coincide within each view.
    """
    if n_clusters > n_instances:
        raise DataError("more clusters than instances")
    rng = np.random.default_rng(seed)
    if dims is None:
        dims = [8 + 4 * v for v in range(n_views)]
    if len(dims) != n_views:
        raise DataError("dims must list one dimension per view")
    # Round-robin assignment keeps every cluster populated.
    labels = rng.permutation(np.arange(n_instances) % n_clusters)
    latent_dim = max(2, n_clusters)
    centers = rng.normal(size=(n_clusters, latent_dim)) * separation
    views = []
    for d in dims:
        basis = rng.normal(size=(latent_dim, d)) / np.sqrt(latent_dim)
        x = centers[labels] @ basis
        x = x + noise * rng.normal(size=(n_instances, d))
        views.append(x)
    return MultiViewDataset(views=views, labels=labels)


def _format_float(x):
    return repr(float(x))


def write_matrix_csv(matrix, path):
    """Write a 2-D array as a headerless CSV at full round-trip precision."""
    matrix = np.asarray(matrix)
    with open(path, "w", encoding="utf-8") as fh:
        for row in matrix:
            fh.write(",".join(_format_float(x) for x in row))
            fh.write("\n")


def save_dataset(dataset, out_dir, seed=None):
    """Write per-view CSVs, a labels CSV and a manifest; returns file paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    view_files = []
    for i, v in enumerate(dataset.views):
        p = out_dir / f"view_{i}.csv"
        write_matrix_csv(v, p)
        view_files.append(str(p))
    label_file = None
    if dataset.labels is not None:
        p = out_dir / "labels.csv"
        with open(p, "w", encoding="utf-8") as fh:
            for y in dataset.labels:
                fh.write(f"{int(y)}\n")
        label_file = str(p)
    manifest = {
        "n_instances": dataset.n_instances,
        "n_views": dataset.n_views,
        "view_dims": dataset.view_dims,
        "views": view_files,
        "labels": label_file,
        "seed": seed,
    }
    with open(out_dir / "dataset_manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest

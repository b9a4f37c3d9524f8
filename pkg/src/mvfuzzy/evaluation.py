"""Clustering-based evaluation: K-means, NMI/ACC/Purity, grid search."""

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import linear_sum_assignment

from .representation import embed
from .solver import NumericFailure, fit


def _kmeanspp_init(points, k, rng):
    """Seed k centers by squared-distance-proportional sampling; if every
    remaining distance is zero (duplicate points) fall back to the lowest
    unchosen index."""
    n = points.shape[0]
    chosen = [int(rng.integers(n))]
    d2 = ((points - points[chosen[0]]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = d2.sum()
        if total > 0:
            probs = d2 / total
            idx = int(rng.choice(n, p=probs))
        else:
            taken = set(chosen)
            idx = next(i for i in range(n) if i not in taken)
        chosen.append(idx)
        d2 = np.minimum(d2, ((points - points[idx]) ** 2).sum(axis=1))
    return points[chosen].copy()


def _lloyd(points, centers, max_iter=300):
    """Lloyd iterations; an emptied cluster is re-seeded at the point
    farthest from its assigned center."""
    n, k = points.shape[0], centers.shape[0]
    labels = np.full(n, -1)
    for _ in range(max_iter):
        d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_labels = d2.argmin(axis=1)
        own = d2[np.arange(n), new_labels]
        for c in range(k):
            if not np.any(new_labels == c):
                far = int(own.argmax())
                centers[c] = points[far]
                new_labels[far] = c
                own[far] = -np.inf
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for c in range(k):
            centers[c] = points[labels == c].mean(axis=0)
    d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    labels = d2.argmin(axis=1)
    sse = float(d2[np.arange(n), labels].sum())
    return labels, sse


def kmeans(points, n_clusters, restarts=10, seed=0):
    """Best-of-restarts K-means labels, deterministic given the seed.

    Parameters
    ----------
    points : (N, d) array to cluster.
    n_clusters : number of clusters, 1 <= n_clusters <= N.
    restarts : independent k-means++ initializations to try; the run with
        the lowest within-cluster SSE wins (ties keep the earliest run).
    seed : int or SeedSequence feeding a fresh generator.
    """
    points = np.asarray(points, dtype=float)
    n = points.shape[0]
    if not 1 <= n_clusters <= n:
        raise ValueError(f"n_clusters must be in [1, {n}]")
    rng = np.random.default_rng(seed)
    best_labels, best_sse = None, np.inf
    for _ in range(max(1, restarts)):
        centers = _kmeanspp_init(points, n_clusters, rng)
        labels, sse = _lloyd(points, centers)
        if sse < best_sse:
            best_labels, best_sse = labels, sse
    return best_labels


def _contingency(pred, true):
    pred = np.asarray(pred).ravel()
    true = np.asarray(true).ravel()
    if pred.shape[0] != true.shape[0]:
        raise ValueError("label arrays must have equal length")
    if pred.shape[0] == 0:
        raise ValueError("label arrays are empty")
    _, pi = np.unique(pred, return_inverse=True)
    _, ti = np.unique(true, return_inverse=True)
    table = np.zeros((pi.max() + 1, ti.max() + 1), dtype=np.int64)
    np.add.at(table, (pi, ti), 1)
    return table


def nmi(pred, true):
    """Mutual information normalized by the geometric mean of entropies.

    Natural logs. Two identical single-cluster partitions score 1; a
    single-cluster partition against anything else scores 0.
    """
    table = _contingency(pred, true)
    n = table.sum()
    pr = table.sum(axis=1) / n
    pc = table.sum(axis=0) / n
    h_pred = -float((pr * np.log(pr)).sum())
    h_true = -float((pc * np.log(pc)).sum())
    if h_pred == 0.0 and h_true == 0.0:
        return 1.0
    if h_pred == 0.0 or h_true == 0.0:
        return 0.0
    mi = 0.0
    for i in range(table.shape[0]):
        for j in range(table.shape[1]):
            nij = table[i, j]
            if nij:
                p = nij / n
                mi += p * np.log(p / (pr[i] * pc[j]))
    mi = max(mi, 0.0)
    return float(mi / np.sqrt(h_pred * h_true))


def acc(pred, true):
    """Clustering accuracy under the optimal cluster-to-class assignment,
    solved exactly on the (rectangular) contingency matrix."""
    table = _contingency(pred, true)
    rows, cols = linear_sum_assignment(-table)
    return float(table[rows, cols].sum() / table.sum())


def purity(pred, true):
    """Fraction of points lying in their cluster's majority class."""
    table = _contingency(pred, true)
    return float(table.max(axis=1).sum() / table.sum())


@dataclass
class ClusteringReport:
    """Per-repeat clustering metrics plus the best run's assignment."""

    nmi_runs: np.ndarray
    acc_runs: np.ndarray
    purity_runs: np.ndarray
    best_assignment: np.ndarray

    @property
    def nmi(self):
        return float(self.nmi_runs.mean())

    @property
    def acc(self):
        return float(self.acc_runs.mean())

    @property
    def purity(self):
        return float(self.purity_runs.mean())

    @property
    def nmi_std(self):
        return float(self.nmi_runs.std())

    @property
    def acc_std(self):
        return float(self.acc_runs.std())

    @property
    def purity_std(self):
        return float(self.purity_runs.std())

    def to_dict(self):
        return {
            "nmi": {"mean": self.nmi, "std": self.nmi_std,
                    "runs": self.nmi_runs.tolist()},
            "acc": {"mean": self.acc, "std": self.acc_std,
                    "runs": self.acc_runs.tolist()},
            "purity": {"mean": self.purity, "std": self.purity_std,
                       "runs": self.purity_runs.tolist()},
            "best_assignment": self.best_assignment.tolist(),
        }


def evaluate_embedding(z, true_labels, n_clusters=None, repeats=20,
                       restarts=10, seed=0):
    """Cluster an embedding `repeats` times with derived seeds and score
    each run; the best run (highest NMI, earliest on ties) supplies the
    reported assignment."""
    z = np.asarray(z, dtype=float)
    true_labels = np.asarray(true_labels)
    if n_clusters is None:
        n_clusters = int(np.unique(true_labels).size)
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    seeds = seed.spawn(repeats)
    nmis, accs, purities, assignments = [], [], [], []
    for ss in seeds:
        pred = kmeans(z, n_clusters, restarts=restarts, seed=ss)
        nmis.append(nmi(pred, true_labels))
        accs.append(acc(pred, true_labels))
        purities.append(purity(pred, true_labels))
        assignments.append(pred)
    nmis = np.array(nmis)
    best = int(nmis.argmax())
    return ClusteringReport(
        nmi_runs=nmis,
        acc_runs=np.array(accs),
        purity_runs=np.array(purities),
        best_assignment=assignments[best],
    )


@dataclass
class GridPointResult:
    index: int
    hp: object
    report: ClusteringReport | None = None
    error: str | None = None


@dataclass
class GridSearchResult:
    points: list = field(default_factory=list)
    best: dict = field(default_factory=dict)

    def write_csv(self, path):
        header = ("index,alpha,beta,gamma,delta,n_rules,embed_dim,"
                  "nmi_mean,nmi_std,acc_mean,acc_std,"
                  "purity_mean,purity_std,error")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(header + "\n")
            for p in self.points:
                hp = p.hp
                cells = [str(p.index), repr(hp.alpha), repr(hp.beta),
                         repr(hp.gamma), repr(hp.delta), str(hp.n_rules),
                         str(hp.embed_dim)]
                if p.report is not None:
                    r = p.report
                    cells += [repr(r.nmi), repr(r.nmi_std), repr(r.acc),
                              repr(r.acc_std), repr(r.purity),
                              repr(r.purity_std), ""]
                else:
                    cells += [""] * 6 + [p.error or "failed"]
                fh.write(",".join(cells) + "\n")


def grid_search(dataset, grid, repeats=20, restarts=10, seed=0,
                refit_per_repeat=False):
    """Fit and score every grid point; failures are recorded, not fatal.

    Each point fits once and re-clusters `repeats` times with derived
    seeds (set refit_per_repeat to also redraw the model initialization
    per repeat). The best point is chosen independently per metric by the
    highest mean, earliest index on ties.
    """
    grid = list(grid)
    if not grid:
        raise ValueError("grid must not be empty")
    if dataset.labels is None:
        raise ValueError("grid search needs ground-truth labels")
    master = np.random.SeedSequence(seed)
    children = master.spawn(len(grid))
    result = GridSearchResult()
    for gi, hp in enumerate(grid):
        try:
            if refit_per_repeat:
                report = _refit_report(dataset, hp, repeats, restarts,
                                       children[gi])
            else:
                state, _ = fit(dataset, hp)
                z = embed(dataset, state).data
                report = evaluate_embedding(
                    z, dataset.labels, repeats=repeats, restarts=restarts,
                    seed=children[gi])
            result.points.append(GridPointResult(gi, hp, report=report))
        except (NumericFailure, ValueError) as err:
            result.points.append(GridPointResult(gi, hp, error=str(err)))
    for metric in ("nmi", "acc", "purity"):
        scored = [(getattr(p.report, metric), p.index)
                  for p in result.points if p.report is not None]
        if scored:
            best_value = max(s[0] for s in scored)
            result.best[metric] = min(i for s, i in scored
                                      if s == best_value)
    return result


def _refit_report(dataset, hp, repeats, restarts, seed_seq):
    seeds = seed_seq.spawn(repeats)
    nmis, accs, purities, assignments = [], [], [], []
    for ss in seeds:
        fit_seed, km_seed = ss.spawn(2)
        hp_r = replace(hp, seed=int(fit_seed.generate_state(1)[0]))
        state, _ = fit(dataset, hp_r)
        z = embed(dataset, state).data
        pred = kmeans(z, dataset.n_classes, restarts=restarts, seed=km_seed)
        nmis.append(nmi(pred, dataset.labels))
        accs.append(acc(pred, dataset.labels))
        purities.append(purity(pred, dataset.labels))
        assignments.append(pred)
    nmis = np.array(nmis)
    best = int(nmis.argmax())
    return ClusteringReport(
        nmi_runs=nmis,
        acc_runs=np.array(accs),
        purity_runs=np.array(purities),
        best_assignment=assignments[best],
    )

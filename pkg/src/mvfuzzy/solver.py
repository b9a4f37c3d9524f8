"""Joint objective and alternating optimization of the multi-view model.

State per view: a common consequent matrix and a specific consequent
matrix acting on the fuzzy design matrix, plus one shared consistency map
and a softmax-weighted view importance vector. Row-sparsity terms are
handled by iteratively reweighted least squares: each update freezes the
diagonal reweighting, solves a linear system, and moves on.
"""

import time
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg

from .antecedent import Standardizer, fit_antecedents, fuzzy_map
from .graph import build_graph

VARIANTS = ("full", "common_only", "no_consistency")
B_UPDATE_MODES = ("paper", "exact")

RIDGE = 1e-10


class NumericFailure(RuntimeError):
    """A linear solve failed even after the ridge retry."""

    def __init__(self, message, view=None, iteration=None):
        super().__init__(message)
        self.view = view
        self.iteration = iteration


@dataclass
class Hyperparams:
    """Regularization weights and run controls.

    embed_dim=None defers to the number of label classes at fit time.
    b_update "paper" uses the one-shot diagonal closed form for the
    consistency map; "exact" solves its stationarity system outright.
    """

    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 1.0
    delta: float = 1.0
    n_rules: int = 3
    embed_dim: int | None = None
    max_iter: int = 100
    n_neighbors: int = 5
    bandwidth: object = "auto"
    eps_irls: float = 1e-8
    tol_stop: float = 1e-6
    seed: int = 0
    b_update: str = "paper"
    variant: str = "full"

    def __post_init__(self):
        if min(self.alpha, self.beta, self.gamma) < 0:
            raise ValueError("alpha, beta, gamma must be non-negative")
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.n_rules < 1:
            raise ValueError("n_rules must be >= 1")
        if self.embed_dim is not None and self.embed_dim < 1:
            raise ValueError("embed_dim must be >= 1")
        if self.max_iter < 0:
            raise ValueError("max_iter must be >= 0")
        if self.b_update not in B_UPDATE_MODES:
            raise ValueError(f"b_update must be one of {B_UPDATE_MODES}")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")


@dataclass
class ModelState:
    """Everything a fitted model needs to embed new data."""

    hp: Hyperparams
    standardizers: list
    banks: list
    p_common: list
    p_specific: list
    consistency: np.ndarray
    view_weights: np.ndarray

    @property
    def n_views(self):
        return len(self.p_common)

    @property
    def embed_dim(self):
        return self.p_common[0].shape[1]


TERM_NAMES = ("graph", "orthogonality", "consistency", "b_sparsity",
              "pc_sparsity", "ps_sparsity", "entropy")


@dataclass
class ObjectiveTerms:
    graph: float
    orthogonality: float
    consistency: float
    b_sparsity: float
    pc_sparsity: float
    ps_sparsity: float
    entropy: float

    @property
    def total(self):
        return sum(getattr(self, name) for name in TERM_NAMES)

    def as_dict(self):
        return {name: getattr(self, name) for name in TERM_NAMES}


@dataclass
class TraceEntry:
    iteration: int
    terms: ObjectiveTerms
    weights: np.ndarray
    elapsed: float

    @property
    def total(self):
        return self.terms.total


@dataclass
class FitTrace:
    """Per-iteration objective breakdown; entry 0 is the initialization."""

    entries: list = field(default_factory=list)
    surrogate_audit: list = field(default_factory=list)

    def totals(self):
        return np.array([e.total for e in self.entries])

    def term_values(self, name):
        return np.array([getattr(e.terms, name) for e in self.entries])

    def write_csv(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("iteration,total," + ",".join(TERM_NAMES) + "\n")
            for e in self.entries:
                cells = [str(e.iteration), repr(e.total)]
                cells += [repr(getattr(e.terms, n)) for n in TERM_NAMES]
                fh.write(",".join(cells) + "\n")


def l21_norm(m):
    """Sum of Euclidean row norms."""
    return float(np.sqrt((np.asarray(m) ** 2).sum(axis=1)).sum())


def irls_diag(m, eps=1e-8):
    """Diagonal of the row reweighting matrix: 1 / max(row norm, eps)."""
    norms = np.sqrt((np.asarray(m, dtype=float) ** 2).sum(axis=1))
    return 1.0 / np.maximum(norms, eps)


def solve_reg(a, rhs, view=None):
    """Direct symmetric solve with a single ridge retry.

    Never forms an explicit inverse. A solve whose relative residual
    betrays a singular or inconsistent system gets one shot with RIDGE
    added to the diagonal before NumericFailure is raised.
    """
    def attempt(mat):
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
                out = scipy.linalg.solve(mat, rhs, assume_a="sym")
        except (scipy.linalg.LinAlgError, np.linalg.LinAlgError, ValueError):
            return None
        if not np.all(np.isfinite(out)):
            return None
        # Backward-error test: flags finite-but-meaningless output from a
        # numerically singular factorization.
        residual = float(np.abs(mat @ out - rhs).max())
        scale = float(np.abs(rhs).max(initial=0.0)
                      + np.abs(mat).max() * np.abs(out).max(initial=0.0))
        if residual > 1e-6 * max(scale, 1e-30):
            return None
        return out

    out = attempt(a)
    if out is None:
        ridged = a + RIDGE * np.eye(a.shape[0])
        out = attempt(ridged)
    if out is None:
        raise NumericFailure("linear system is singular", view=view)
    return out


def graph_traces(state, design, graphs):
    """Per-view smoothness tr((Zc+Zs)^T L (Zc+Zs)) of the current state."""
    values = np.empty(state.n_views)
    for v in range(state.n_views):
        z = design[v] @ (state.p_common[v] + state.p_specific[v])
        values[v] = float((z * (graphs[v].laplacian @ z)).sum())
    return values


def objective(state, design, graphs, hp=None):
    """Evaluate the joint objective term by term.

    Frobenius terms are squared; the row-sparsity terms are plain L2,1
    norms; 0*ln(0) counts as 0. In the no_consistency variant the map
    residual and its sparsity term are absent from the objective and are
    reported as exact zeros.
    """
    hp = hp or state.hp
    if len(design) != state.n_views or len(graphs) != state.n_views:
        raise ValueError("design/graph count does not match the state")
    for v in range(state.n_views):
        if design[v].shape[1] != state.p_common[v].shape[0]:
            raise ValueError(f"view {v}: design width mismatch")

    w = state.view_weights
    graph_term = float(w @ graph_traces(state, design, graphs))

    orth = 0.0
    for v in range(state.n_views):
        zc = design[v] @ state.p_common[v]
        zs = design[v] @ state.p_specific[v]
        orth += float(((zc.T @ zs) ** 2).sum())
    orth *= hp.alpha

    if hp.variant == "no_consistency":
        consist = 0.0
        b_sparse = 0.0
    else:
        m = state.embed_dim
        eye = np.eye(m)
        consist = 0.0
        for v in range(state.n_views):
            zc = design[v] @ state.p_common[v]
            consist += float(((state.consistency @ zc - eye) ** 2).sum())
        consist *= hp.beta
        b_sparse = hp.gamma * l21_norm(state.consistency)

    pc_sparse = hp.gamma * sum(l21_norm(p) for p in state.p_common)
    ps_sparse = hp.gamma * sum(l21_norm(p) for p in state.p_specific)

    wpos = w[w > 0]
    entropy = hp.delta * float((wpos * np.log(wpos)).sum())

    return ObjectiveTerms(graph=graph_term, orthogonality=orth,
                          consistency=consist, b_sparsity=b_sparse,
                          pc_sparsity=pc_sparse, ps_sparsity=ps_sparse,
                          entropy=entropy)


def _xlx(design, graphs, view):
    x = design[view]
    return x.T @ (graphs[view].laplacian @ x)


def update_common(state, view, design, graphs, f_diag=None, xlx=None):
    """Closed-form update of one view's common consequent matrix with the
    row reweighting frozen at the current iterate."""
    hp = state.hp
    x = design[view]
    wv = state.view_weights[view]
    ps = state.p_specific[view]
    if f_diag is None:
        f_diag = irls_diag(state.p_common[view], hp.eps_irls)
    if xlx is None:
        xlx = _xlx(design, graphs, view)

    a = wv * xlx + hp.gamma * np.diag(f_diag)
    gram = x.T @ x
    gps = gram @ ps
    a = a + hp.alpha * (gps @ gps.T)
    rhs = -wv * (xlx @ ps)
    if hp.variant != "no_consistency":
        bx = state.consistency @ x
        a = a + hp.beta * (bx.T @ bx)
        rhs = rhs + hp.beta * bx.T
    return solve_reg(a, rhs, view=view)


def update_specific(state, view, design, graphs, f_diag=None, xlx=None):
    """Closed-form update of one view's specific consequent matrix; the
    common_only variant never calls this (the matrix stays zero)."""
    hp = state.hp
    x = design[view]
    wv = state.view_weights[view]
    pc = state.p_common[view]
    if f_diag is None:
        f_diag = irls_diag(state.p_specific[view], hp.eps_irls)
    if xlx is None:
        xlx = _xlx(design, graphs, view)

    gram = x.T @ x
    gpc = gram @ pc
    a = wv * xlx + hp.alpha * (gpc @ gpc.T) + hp.gamma * np.diag(f_diag)
    rhs = -wv * (xlx @ pc)
    return solve_reg(a, rhs, view=view)


def update_consistency(state, design, f_diag=None):
    """Update the consistency map.

    "paper" mode keeps the cheap diagonal closed form, which is the true
    minimizer only when the summed common representations have identity
    covariance. "exact" mode solves the stationarity condition of the
    frozen-reweighting surrogate row by row.
    """
    hp = state.hp
    m = state.embed_dim
    if f_diag is None:
        f_diag = irls_diag(state.consistency, hp.eps_irls)
    zcs = [design[v] @ state.p_common[v] for v in range(state.n_views)]
    stacked = sum(z.T for z in zcs)  # (m, N)

    if hp.b_update == "paper":
        return stacked / (1.0 + hp.gamma * f_diag)[:, None]

    n = stacked.shape[1]
    gram = sum(z @ z.T for z in zcs)  # (N, N)
    b = np.empty((m, n))
    for i in range(m):
        a = gram + (hp.gamma * f_diag[i]) * np.eye(n)
        b[i] = solve_reg(a, stacked[i])
    return b


def update_view_weights(state, design, graphs):
    """Entropy-regularized softmax over the per-view smoothness traces,
    computed with max subtraction so huge traces cannot overflow."""
    traces = graph_traces(state, design, graphs)
    logits = -traces / state.hp.delta
    logits -= logits.max()
    w = np.exp(logits)
    return w / w.sum()


def common_surrogate(p, state, view, design, graphs, f_diag):
    """Smooth objective minimized by update_common at frozen reweighting."""
    hp = state.hp
    x = design[view]
    z = x @ (p + state.p_specific[view])
    value = state.view_weights[view] * float(
        (z * (graphs[view].laplacian @ z)).sum())
    zc = x @ p
    zs = x @ state.p_specific[view]
    value += hp.alpha * float(((zc.T @ zs) ** 2).sum())
    if hp.variant != "no_consistency":
        resid = state.consistency @ zc - np.eye(state.embed_dim)
        value += hp.beta * float((resid ** 2).sum())
    value += hp.gamma * float((f_diag[:, None] * p * p).sum())
    return value


def specific_surrogate(p, state, view, design, graphs, f_diag):
    """Smooth objective minimized by update_specific at frozen reweighting."""
    hp = state.hp
    x = design[view]
    z = x @ (state.p_common[view] + p)
    value = state.view_weights[view] * float(
        (z * (graphs[view].laplacian @ z)).sum())
    zc = x @ state.p_common[view]
    zs = x @ p
    value += hp.alpha * float(((zc.T @ zs) ** 2).sum())
    value += hp.gamma * float((f_diag[:, None] * p * p).sum())
    return value


def consistency_surrogate(b, state, design, f_diag):
    """Smooth objective minimized by the exact consistency-map update."""
    hp = state.hp
    eye = np.eye(state.embed_dim)
    value = 0.0
    for v in range(state.n_views):
        zc = design[v] @ state.p_common[v]
        value += float(((b @ zc - eye) ** 2).sum())
    value += hp.gamma * float((f_diag[:, None] * b * b).sum())
    return value


def prepare_inputs(dataset, hp):
    """Standardize, estimate antecedents, map to fuzzy space, build graphs.

    These are the deterministic preprocessing steps shared by every
    variant; the graphs are built once here and held fixed afterwards.
    """
    standardizers = [Standardizer.fit(v) for v in dataset.views]
    xs = [s.transform(v) for s, v in zip(standardizers, dataset.views)]
    banks = [fit_antecedents(x, hp.n_rules) for x in xs]
    design = [fuzzy_map(x, bank) for x, bank in zip(xs, banks)]
    graphs = [build_graph(xg, hp.n_neighbors, hp.bandwidth) for xg in design]
    return standardizers, banks, design, graphs


def _resolve_embed_dim(dataset, hp):
    if hp.embed_dim is not None:
        return hp.embed_dim
    if dataset.labels is None:
        raise ValueError(
            "embed_dim not set and dataset has no labels to infer it from")
    return dataset.n_classes


def fit(dataset, hp=None, audit_surrogates=False):
    """Run the full alternating optimization.

    Per iteration: consistency map first, then per view the common and
    specific consequents (fresh values feed forward within the iteration),
    then the view weights. Stops early once the relative objective change
    stays below tol_stop for 5 consecutive iterations. Returns the fitted
    state and the per-iteration trace.
    """
    hp = hp or Hyperparams()
    m = _resolve_embed_dim(dataset, hp)
    hp = replace(hp, embed_dim=m)

    standardizers, banks, design, graphs = prepare_inputs(dataset, hp)
    n = dataset.n_instances
    rng = np.random.default_rng(hp.seed)

    p_common = []
    p_specific = []
    for xg in design:
        dg = xg.shape[1]
        p_common.append(rng.normal(size=(dg, m)) / np.sqrt(dg))
    for xg in design:
        dg = xg.shape[1]
        if hp.variant == "common_only":
            p_specific.append(np.zeros((dg, m)))
        else:
            p_specific.append(rng.normal(size=(dg, m)) / np.sqrt(dg))

    state = ModelState(
        hp=hp,
        standardizers=standardizers,
        banks=banks,
        p_common=p_common,
        p_specific=p_specific,
        consistency=np.zeros((m, n)),
        view_weights=np.full(dataset.n_views, 1.0 / dataset.n_views),
    )
    if hp.variant != "no_consistency":
        # The map does not exist yet; its first update uses unit reweighting.
        state.consistency = update_consistency(state, design,
                                               f_diag=np.ones(m))

    xlx_cache = [_xlx(design, graphs, v) for v in range(state.n_views)]
    trace = FitTrace()
    start = time.perf_counter()
    trace.entries.append(TraceEntry(
        iteration=0,
        terms=objective(state, design, graphs),
        weights=state.view_weights.copy(),
        elapsed=time.perf_counter() - start,
    ))

    for t in range(1, hp.max_iter + 1):
        audit = {}
        try:
            if hp.variant != "no_consistency":
                f_b = irls_diag(state.consistency, hp.eps_irls)
                new_b = update_consistency(state, design, f_diag=f_b)
                if audit_surrogates:
                    audit["consistency"] = (
                        consistency_surrogate(state.consistency, state,
                                              design, f_b),
                        consistency_surrogate(new_b, state, design, f_b),
                    )
                state.consistency = new_b

            for v in range(state.n_views):
                f_c = irls_diag(state.p_common[v], hp.eps_irls)
                new_pc = update_common(state, v, design, graphs,
                                       f_diag=f_c, xlx=xlx_cache[v])
                if audit_surrogates:
                    audit[f"common_{v}"] = (
                        common_surrogate(state.p_common[v], state, v,
                                         design, graphs, f_c),
                        common_surrogate(new_pc, state, v, design,
                                         graphs, f_c),
                    )
                state.p_common[v] = new_pc

                if hp.variant != "common_only":
                    f_s = irls_diag(state.p_specific[v], hp.eps_irls)
                    new_ps = update_specific(state, v, design, graphs,
                                             f_diag=f_s, xlx=xlx_cache[v])
                    if audit_surrogates:
                        audit[f"specific_{v}"] = (
                            specific_surrogate(state.p_specific[v], state,
                                               v, design, graphs, f_s),
                            specific_surrogate(new_ps, state, v, design,
                                               graphs, f_s),
                        )
                    state.p_specific[v] = new_ps

            state.view_weights = update_view_weights(state, design, graphs)
        except NumericFailure as err:
            err.iteration = t
            raise

        trace.entries.append(TraceEntry(
            iteration=t,
            terms=objective(state, design, graphs),
            weights=state.view_weights.copy(),
            elapsed=time.perf_counter() - start,
        ))
        if audit_surrogates:
            trace.surrogate_audit.append(audit)

        if hp.tol_stop > 0 and t >= 5:
            totals = trace.totals()
            prev = totals[-6:-1]
            curr = totals[-5:]
            rel = np.abs(curr - prev) / np.maximum(np.abs(prev), 1e-12)
            if np.all(rel < hp.tol_stop):
                break

    return state, trace

"""Embedding assembly and interpretable rule export of a fitted model."""

from dataclasses import dataclass

import numpy as np

from .antecedent import AntecedentBank, firing_levels, fuzzy_map

LEVEL_NAMES_3 = ("Low", "Middle", "High")


@dataclass
class Embedding:
    """Stacked representation: one weighted common block followed by one
    weighted specific block per view, each embed_dim columns wide."""

    data: np.ndarray
    block_layout: list


@dataclass
class FuzzyRule:
    """One IF-THEN rule: per-feature clauses plus two affine consequent
    tables of shape (embed_dim, n_features + 1), column 0 the intercept."""

    antecedent: list
    common: np.ndarray
    specific: np.ndarray


@dataclass
class ViewRules:
    view: int
    weight: float
    mean: np.ndarray
    scale: np.ndarray
    rules: list


@dataclass
class RuleBaseExport:
    views: list
    n_rules: int
    embed_dim: int


def _check_fitted(state, dataset=None):
    if not state.p_common:
        raise ValueError("model state holds no fitted parameters")
    if dataset is not None:
        if dataset.n_views != state.n_views:
            raise ValueError(
                f"dataset has {dataset.n_views} views, model expects "
                f"{state.n_views}")
        for v, bank in enumerate(state.banks):
            if dataset.views[v].shape[1] != bank.n_features:
                raise ValueError(f"view {v}: feature count mismatch")


def view_design_matrices(dataset, state):
    """Standardize each view with the training statistics and map it into
    the fuzzy feature space of the fitted rule banks."""
    _check_fitted(state, dataset)
    out = []
    for v in range(state.n_views):
        x = state.standardizers[v].transform(dataset.views[v])
        out.append(fuzzy_map(x, state.banks[v]))
    return out


def embed(dataset, state):
    """Assemble the final representation.

    Column blocks: the view-weight-averaged common representation, then
    each view's weighted specific representation.
    """
    design = view_design_matrices(dataset, state)
    w = state.view_weights
    common = sum(w[v] * (design[v] @ state.p_common[v])
                 for v in range(state.n_views))
    blocks = [common]
    layout = ["common"]
    for v in range(state.n_views):
        blocks.append(w[v] * (design[v] @ state.p_specific[v]))
        layout.append(f"specific_{v + 1}")
    return Embedding(data=np.hstack(blocks), block_layout=layout)


def _linguistic_labels(centers_column):
    """Label each rule's fuzzy set on one feature by its center's rank.

    Three rules get Low/Middle/High in ascending center order; any other
    rule count gets ordinal "Level k" names. Equal centers rank by rule
    index, so the labels always form a permutation.
    """
    k = len(centers_column)
    if k == 3:
        names = LEVEL_NAMES_3
    else:
        names = tuple(f"Level {i + 1}" for i in range(k))
    order = np.argsort(centers_column, kind="stable")
    labels = [""] * k
    for rank, rule in enumerate(order):
        labels[int(rule)] = names[rank]
    return labels


def export_rules(state):
    """Serialize the fitted model as per-view fuzzy rule bases.

    The consequent matrices are re-blocked rule by rule so every rule
    carries its own affine table per output dimension; nothing is rounded
    here, so the export reproduces the model exactly.
    """
    _check_fitted(state)
    views = []
    for v in range(state.n_views):
        bank = state.banks[v]
        k, d = bank.centers.shape
        labels = np.empty((k, d), dtype=object)
        for j in range(d):
            labels[:, j] = _linguistic_labels(bank.centers[:, j])
        rules = []
        for r in range(k):
            clauses = [
                {
                    "feature": j,
                    "label": labels[r, j],
                    "center": float(bank.centers[r, j]),
                    "width": float(bank.widths[r, j]),
                }
                for j in range(d)
            ]
            block = slice(r * (d + 1), (r + 1) * (d + 1))
            rules.append(FuzzyRule(
                antecedent=clauses,
                common=state.p_common[v][block].T.copy(),
                specific=state.p_specific[v][block].T.copy(),
            ))
        views.append(ViewRules(
            view=v,
            weight=float(state.view_weights[v]),
            mean=state.standardizers[v].mean.copy(),
            scale=state.standardizers[v].scale.copy(),
            rules=rules,
        ))
    return RuleBaseExport(views=views, n_rules=state.hp.n_rules,
                          embed_dim=state.embed_dim)


def _affine_text(coefs):
    """Render an affine form with 4-decimal coefficients: c0+c1*x_1+..."""
    parts = [f"{coefs[0]:.4f}"]
    for j, c in enumerate(coefs[1:], start=1):
        parts.append(f"{c:+.4f}x_{j}")
    return "".join(parts)


def _rule_section(rule, table, indent="    "):
    lines = []
    clauses = rule.antecedent
    for i, c in enumerate(clauses):
        tail = " and" if i < len(clauses) - 1 else "."
        lead = "IF: " if i == 0 else indent
        lines.append(f"{lead}the {c['feature'] + 1}th feature is "
                     f"{c['label']}{tail}")
    for t in range(table.shape[0]):
        tail = " and" if t < table.shape[0] - 1 else ""
        lead = "Then: " if t == 0 else indent
        lines.append(f"{lead}the {t + 1}th output is "
                     f"{_affine_text(table[t])}{tail}")
    return lines


def rules_to_text(export):
    """Human-readable rule listing, one common and one specific rule base
    per view, coefficients rounded to 4 decimals."""
    lines = []
    for vr in export.views:
        header = f"View {vr.view + 1} (weight {vr.weight:.4f})"
        lines += [header, "=" * len(header), ""]
        for part, attr in (("common", "common"), ("specific", "specific")):
            title = (f"The rule base of the TSK fuzzy system for the "
                     f"{part} representation")
            lines += [title, "-" * len(title), ""]
            for r, rule in enumerate(vr.rules):
                lines.append(f"Rule {r + 1}:")
                lines += _rule_section(rule, getattr(rule, attr))
                lines.append("")
    return "\n".join(lines) + "\n"


def rules_to_dict(export):
    """JSON-ready structure carrying exact (unrounded) coefficients."""
    return {
        "n_rules": export.n_rules,
        "embed_dim": export.embed_dim,
        "views": [
            {
                "view": vr.view,
                "weight": vr.weight,
                "mean": vr.mean.tolist(),
                "scale": vr.scale.tolist(),
                "rules": [
                    {
                        "antecedent": rule.antecedent,
                        "common": rule.common.tolist(),
                        "specific": rule.specific.tolist(),
                    }
                    for rule in vr.rules
                ],
            }
            for vr in export.views
        ],
    }


def rules_from_dict(doc):
    views = []
    for vd in doc["views"]:
        rules = [
            FuzzyRule(
                antecedent=rd["antecedent"],
                common=np.asarray(rd["common"], dtype=float),
                specific=np.asarray(rd["specific"], dtype=float),
            )
            for rd in vd["rules"]
        ]
        views.append(ViewRules(
            view=vd["view"],
            weight=float(vd["weight"]),
            mean=np.asarray(vd["mean"], dtype=float),
            scale=np.asarray(vd["scale"], dtype=float),
            rules=rules,
        ))
    return RuleBaseExport(views=views, n_rules=doc["n_rules"],
                          embed_dim=doc["embed_dim"])


def rules_predict(export, views):
    """Run the exported rule bases as a multi-output fuzzy system.

    Each view standardizes its input with the exported statistics, fires
    every rule, evaluates the per-rule affine consequents and combines
    them by the normalized firing levels, then the blocks are assembled
    exactly like embed. Agreement with embed certifies that the export is
    a faithful serialization rather than a summary.
    """
    if len(views) != len(export.views):
        raise ValueError("view count does not match the exported rule base")
    common_total = None
    specific_blocks = []
    for vr, raw in zip(export.views, views):
        x = (np.asarray(raw, dtype=float) - vr.mean) / vr.scale
        centers = np.vstack([
            [c["center"] for c in rule.antecedent] for rule in vr.rules])
        widths = np.vstack([
            [c["width"] for c in rule.antecedent] for rule in vr.rules])
        bank = AntecedentBank(centers=centers, widths=widths)
        levels = firing_levels(x, bank)
        affine = np.concatenate([np.ones((x.shape[0], 1)), x], axis=1)
        y_common = np.zeros((x.shape[0], export.embed_dim))
        y_specific = np.zeros_like(y_common)
        for k, rule in enumerate(vr.rules):
            mu = levels[:, [k]]
            y_common += mu * (affine @ rule.common.T)
            y_specific += mu * (affine @ rule.specific.T)
        weighted_common = vr.weight * y_common
        common_total = (weighted_common if common_total is None
                        else common_total + weighted_common)
        specific_blocks.append(vr.weight * y_specific)
    layout = ["common"] + [f"specific_{v + 1}" for v in range(len(views))]
    return Embedding(data=np.hstack([common_total] + specific_blocks),
                     block_layout=layout)

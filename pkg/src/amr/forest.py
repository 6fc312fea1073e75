"""Random forest classifier built from scratch on encoded cohort matrices.

Trees are grown on bootstrap bags with Gini-impurity splits over a random
column subset per node (mtry, default ceil(sqrt(p))). Prediction is the
fraction of trees voting resistant. Out-of-bag permutation importance
reports whole clinical features: all encoded columns that one feature
produced (for example the one-hot block of ``organism``) are permuted
together, so the ranking speaks about features, not columns.

Determinism: every stochastic step runs on a sub-seed derived from the
forest seed and the tree index, with split ties broken by lowest column
index then lowest threshold.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._rng import rng_for
from .data.encoding import EncodedColumn, EncodedMatrix
from .errors import NoOobSamples, SingleClassInput, WidthMismatch


@dataclass(frozen=True)
class Leaf:
    positive_fraction: float
    n_samples: int


@dataclass(frozen=True)
class Split:
    column: int
    threshold: float
    left: "TreeNode"
    right: "TreeNode"


TreeNode = Leaf | Split


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 100
    mtry: int | None = None  # None -> ceil(sqrt(p))
    max_depth: int | None = None
    min_samples_split: int = 2
    seed: int = 0

    def resolved_mtry(self, p: int) -> int:
        m = self.mtry if self.mtry is not None else math.ceil(math.sqrt(p))
        if not 1 <= m <= p:
            raise ValueError(f"mtry {m} outside [1, {p}]")
        return m


@dataclass(frozen=True)
class Forest:
    trees: tuple[TreeNode, ...]
    bag_indices: tuple[tuple[int, ...], ...]
    oob_indices: tuple[tuple[int, ...], ...]
    params: ForestParams
    columns: tuple[EncodedColumn, ...]


def best_split(
    X: np.ndarray, y: np.ndarray, idx: np.ndarray, candidates: Sequence[int]
) -> tuple[int, float, float] | None:
    """Minimum weighted-Gini split over candidate columns, or None.

    Thresholds are midpoints between consecutive distinct sorted values;
    rows go left when value <= threshold. Ties pick the lowest column index,
    then the lowest threshold (columns are scanned in ascending order with
    strict improvement only; within a column thresholds ascend and argmin
    takes the first minimum).
    """
    n = idx.size
    node_y = y[idx]
    best: tuple[int, float, float] | None = None
    for col in sorted(candidates):
        values = X[idx, col]
        order = np.argsort(values, kind="stable")
        sorted_vals = values[order]
        valid = sorted_vals[:-1] != sorted_vals[1:]
        if not valid.any():
            continue
        pos_prefix = np.cumsum(node_y[order])[:-1][valid]
        n_left = np.arange(1, n)[valid]
        n_right = n - n_left
        total_pos = float(node_y.sum())
        q_left = pos_prefix / n_left
        q_right = (total_pos - pos_prefix) / n_right
        score = (
            n_left * 2.0 * q_left * (1.0 - q_left)
            + n_right * 2.0 * q_right * (1.0 - q_right)
        ) / n
        i = int(np.argmin(score))
        if best is None or score[i] < best[2]:
            threshold = (sorted_vals[:-1][valid][i] + sorted_vals[1:][valid][i]) / 2.0
            best = (col, float(threshold), float(score[i]))
    return best


def _grow(
    X: np.ndarray,
    y: np.ndarray,
    idx: np.ndarray,
    depth: int,
    mtry: int,
    params: ForestParams,
    rng: np.random.Generator,
) -> TreeNode:
    pos = float(y[idx].sum())
    n = idx.size
    pure = pos == 0.0 or pos == n
    depth_capped = params.max_depth is not None and depth >= params.max_depth
    if pure or depth_capped or n < params.min_samples_split:
        return Leaf(pos / n, n)
    candidates = rng.choice(X.shape[1], size=mtry, replace=False)
    found = best_split(X, y, idx, [int(c) for c in candidates])
    if found is None:
        return Leaf(pos / n, n)
    col, threshold, _ = found
    mask = X[idx, col] <= threshold
    left = _grow(X, y, idx[mask], depth + 1, mtry, params, rng)
    right = _grow(X, y, idx[~mask], depth + 1, mtry, params, rng)
    return Split(col, threshold, left, right)


def train_forest(X: EncodedMatrix, y: Sequence[int], params: ForestParams = ForestParams()) -> Forest:
    """Grow ``params.n_trees`` bagged Gini trees on the encoded matrix."""
    rows = X.rows
    labels = np.asarray(y, dtype=float)
    if labels.shape[0] != rows.shape[0]:
        raise WidthMismatch(f"{labels.shape[0]} labels for {rows.shape[0]} rows")
    n = rows.shape[0]
    if n < 2 or np.unique(labels).size < 2:
        raise SingleClassInput("training labels must contain both classes")
    mtry = params.resolved_mtry(rows.shape[1])

    trees, bags, oobs = [], [], []
    for t in range(params.n_trees):
        rng = rng_for(params.seed, "tree", t)
        bag = rng.integers(0, n, size=n)
        oob = np.setdiff1d(np.arange(n), bag)
        trees.append(_grow(rows, labels, np.sort(bag), 0, mtry, params, rng))
        bags.append(tuple(int(i) for i in np.sort(bag)))
        oobs.append(tuple(int(i) for i in oob))
    return Forest(tuple(trees), tuple(bags), tuple(oobs), params, X.columns)


def tree_votes(node: TreeNode, rows: np.ndarray) -> np.ndarray:
    """Per-row 0/1 vote of one tree (leaf positive fraction > 0.5)."""
    out = np.empty(rows.shape[0], dtype=int)
    _fill_votes(node, rows, np.arange(rows.shape[0]), out)
    return out


def _fill_votes(node: TreeNode, rows: np.ndarray, idx: np.ndarray, out: np.ndarray) -> None:
    if isinstance(node, Leaf):
        out[idx] = 1 if node.positive_fraction > 0.5 else 0
        return
    mask = rows[idx, node.column] <= node.threshold
    _fill_votes(node.left, rows, idx[mask], out)
    _fill_votes(node.right, rows, idx[~mask], out)


def predict_forest(forest: Forest, row: Sequence[float]) -> float:
    """Fraction of trees voting resistant; classify resistant at >= 0.5."""
    x = np.asarray(row, dtype=float)
    if x.shape != (len(forest.columns),):
        raise WidthMismatch(f"row width {x.shape} vs {len(forest.columns)} columns")
    votes = sum(int(tree_votes(tree, x[None, :])[0]) for tree in forest.trees)
    return votes / len(forest.trees)


def predict_forest_rows(forest: Forest, rows: np.ndarray) -> np.ndarray:
    """Vote fractions for a batch of encoded rows."""
    rows = np.asarray(rows, dtype=float)
    if rows.ndim != 2 or rows.shape[1] != len(forest.columns):
        raise WidthMismatch(f"rows shape {rows.shape} vs {len(forest.columns)} columns")
    total = np.zeros(rows.shape[0], dtype=float)
    for tree in forest.trees:
        total += tree_votes(tree, rows)
    return total / len(forest.trees)


@dataclass(frozen=True)
class FeatureImportance:
    feature: str
    importance: float
    normalized: float


def _tree_accuracy(tree: TreeNode, rows: np.ndarray, labels: np.ndarray) -> float:
    return float((tree_votes(tree, rows) == labels).mean())


def oob_importance(
    forest: Forest,
    X: EncodedMatrix,
    y: Sequence[int],
    seed: int = 0,
    n_repeats: int = 5,
) -> list[FeatureImportance]:
    """Mean out-of-bag accuracy drop when a feature's columns are shuffled.

    For each tree and source feature, all encoded columns of that feature
    are permuted together across the tree's out-of-bag rows; the importance
    is the accuracy drop averaged over ``n_repeats`` permutations and over
    trees. Output is sorted by descending importance, with a max-normalized
    value for display. A feature no tree splits on scores exactly 0.
    """
    rows = X.rows
    labels = np.asarray(y, dtype=float)
    features = []
    for col in forest.columns:
        if col.feature not in features:
            features.append(col.feature)
    col_groups = {f: X.feature_columns(f) for f in features}

    active = [t for t in range(len(forest.trees)) if forest.oob_indices[t]]
    if not active:
        raise NoOobSamples("every tree saw every row in its bag")
    never_oob = set(range(rows.shape[0])) - {i for t in active for i in forest.oob_indices[t]}
    if never_oob:
        warnings.warn(f"{len(never_oob)} rows are in-bag for every tree", stacklevel=2)

    per_feature = {f: [] for f in features}
    for t in active:
        oob = np.array(forest.oob_indices[t], dtype=int)
        tree = forest.trees[t]
        base = _tree_accuracy(tree, rows[oob], labels[oob])
        for f in features:
            cols = col_groups[f]
            rng = rng_for(seed, "importance", t, f)
            drops = []
            for _ in range(n_repeats):
                perm = rng.permutation(oob.size)
                shuffled = rows[oob].copy()
                shuffled[:, cols] = shuffled[np.ix_(perm, cols)]
                drops.append(base - _tree_accuracy(tree, shuffled, labels[oob]))
            per_feature[f].append(float(np.mean(drops)))

    raw = {f: float(np.mean(vals)) for f, vals in per_feature.items()}
    top = max(raw.values())
    order = sorted(features, key=lambda f: (-raw[f], features.index(f)))
    return [
        FeatureImportance(f, raw[f], raw[f] / top if top > 0 else 0.0)
        for f in order
    ]

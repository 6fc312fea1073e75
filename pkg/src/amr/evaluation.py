"""Classifier metrics and the cross-validation harness.

Metrics treat resistant as the positive class and threshold scores at 0.5
(score >= threshold predicts resistant). The F-beta score runs at beta=2 by
default, weighting recall over precision because a resistant isolate called
susceptible is the costly mistake. AUC uses the rank (Mann-Whitney)
formulation with half credit for ties, which equals the trapezoidal area
under the threshold-swept ROC curve.

:func:`cross_validate` runs the full protocol per fold: drop records with a
missing label for the family, fit the encoder on the training rows only,
oversample the training minority class to parity, train the model, score
the untouched test rows. Metrics whose denominator is undefined in a fold
are excluded from that metric's mean (with the exclusion count reported)
rather than coerced to zero. Single-class training folds reseed the fold
plan, up to 100 attempts.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._rng import derive_seed
from .data.encoding import encode
from .data.folds import FoldMode, FoldPlan, bootstrap_balance, plan_folds
from .data.io import emit_csv
from .data.schema import Dataset
from .errors import (
    AllFoldsDegenerate,
    Empty,
    LengthMismatch,
    SingleClassFold,
    SingleClassLabels,
    TooFewRecords,
    UndefinedMetric,
)
from .forest import ForestParams, predict_forest_rows, train_forest
from .neuralnet import TrainConfig, cnn_spec, forward_batch, mlp_spec, train

MODEL_KINDS = ("rf", "mlp", "cnn")
DEFAULT_THRESHOLD = 0.5
METRIC_NAMES = ("recall", "precision", "f2", "auc")


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


def confusion(
    scores: Sequence[float], labels: Sequence[int], threshold: float = DEFAULT_THRESHOLD
) -> ConfusionCounts:
    s = np.asarray(scores, dtype=float)
    y = np.asarray(labels, dtype=int)
    if s.shape != y.shape:
        raise LengthMismatch(f"{s.shape} vs {y.shape}")
    if s.size == 0:
        raise Empty("no scored rows")
    pred = s >= threshold
    pos = y == 1
    return ConfusionCounts(
        tp=int((pred & pos).sum()),
        fp=int((pred & ~pos).sum()),
        tn=int((~pred & ~pos).sum()),
        fn=int((~pred & pos).sum()),
    )


def recall(c: ConfusionCounts) -> float:
    if c.tp + c.fn == 0:
        raise UndefinedMetric("no positive labels")
    return c.tp / (c.tp + c.fn)


def precision(c: ConfusionCounts) -> float:
    if c.tp + c.fp == 0:
        raise UndefinedMetric("no positive predictions")
    return c.tp / (c.tp + c.fp)


def f_beta(precision_value: float, recall_value: float, beta: float = 2.0) -> float:
    """F-beta from precision and recall; beta=2 doubles recall's weight."""
    denom = beta * beta * precision_value + recall_value
    if denom == 0:
        raise UndefinedMetric("precision and recall are both zero")
    return (1 + beta * beta) * precision_value * recall_value / denom


def f_beta_counts(c: ConfusionCounts, beta: float = 2.0) -> float:
    return f_beta(precision(c), recall(c), beta)


def auc_roc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """Rank-based AUC with midrank tie handling.

    Equals the probability that a random resistant row outscores a random
    susceptible row, counting ties as half.
    """
    s = np.asarray(scores, dtype=float)
    y = np.asarray(labels, dtype=int)
    if s.shape != y.shape:
        raise LengthMismatch(f"{s.shape} vs {y.shape}")
    n_pos = int((y == 1).sum())
    n_neg = int((y == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise SingleClassLabels("AUC needs both classes")
    order = np.argsort(s, kind="stable")
    ranks = np.empty(s.size, dtype=float)
    i = 0
    while i < s.size:
        j = i
        while j + 1 < s.size and s[order[j + 1]] == s[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    rank_sum = float(ranks[y == 1].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


@dataclass(frozen=True)
class FoldMetrics:
    recall: float | None
    precision: float | None
    f2: float | None
    auc: float | None

    def as_dict(self) -> dict:
        return {
            "recall": self.recall,
            "precision": self.precision,
            "f2": self.f2,
            "auc": self.auc,
        }


@dataclass(frozen=True)
class MetricSet:
    """Per-fold metric quadruples plus their arithmetic means.

    An aggregate is the exact mean of the folds where the metric was
    defined; ``excluded`` counts the skipped folds per metric.
    """

    recall: float | None
    precision: float | None
    f2: float | None
    auc: float | None
    per_fold: tuple[FoldMetrics, ...]
    excluded: dict[str, int]

    def as_dict(self) -> dict:
        return {
            "recall": self.recall,
            "precision": self.precision,
            "f2": self.f2,
            "auc": self.auc,
            "per_fold": [f.as_dict() for f in self.per_fold],
            "excluded_folds": dict(self.excluded),
        }


def _aggregate(per_fold: list[FoldMetrics]) -> MetricSet:
    means: dict[str, float | None] = {}
    excluded: dict[str, int] = {}
    for name in METRIC_NAMES:
        values = [getattr(f, name) for f in per_fold if getattr(f, name) is not None]
        excluded[name] = len(per_fold) - len(values)
        means[name] = float(np.mean(values)) if values else None
    return MetricSet(
        means["recall"], means["precision"], means["f2"], means["auc"],
        tuple(per_fold), excluded,
    )


def fold_metrics(
    scores: Sequence[float], labels: Sequence[int], threshold: float = DEFAULT_THRESHOLD
) -> FoldMetrics:
    """All four metrics for one scored fold, None where undefined."""
    c = confusion(scores, labels, threshold)
    out: dict[str, float | None] = {}
    for name, fn in (("recall", recall), ("precision", precision), ("f2", f_beta_counts)):
        try:
            out[name] = fn(c)
        except UndefinedMetric:
            out[name] = None
    try:
        out["auc"] = auc_roc(scores, labels)
    except SingleClassLabels:
        out["auc"] = None
    return FoldMetrics(out["recall"], out["precision"], out["f2"], out["auc"])


def _train_and_score(model_kind, Xtr, ytr, Xte, seed, train_config, forest_params):
    if model_kind == "rf":
        params = forest_params or ForestParams()
        forest = train_forest(Xtr, ytr, ForestParams(
            n_trees=params.n_trees, mtry=params.mtry, max_depth=params.max_depth,
            min_samples_split=params.min_samples_split, seed=seed,
        ))
        return predict_forest_rows(forest, Xte.rows)
    config = train_config or TrainConfig()
    config = TrainConfig(
        learning_rate=config.learning_rate, momentum=config.momentum,
        epochs=config.epochs, batch_size=config.batch_size, seed=seed,
    )
    spec = mlp_spec(Xtr.width) if model_kind == "mlp" else cnn_spec(Xtr.width)
    params = train(spec, Xtr.rows, np.asarray(ytr, dtype=float), config)
    return forward_batch(params, spec, Xte.rows)


@dataclass(frozen=True)
class FoldTrace:
    """Inputs one fold actually used; handed to ``fold_observer`` callbacks."""

    fold_no: int
    train_indices: tuple[int, ...]
    test_indices: tuple[int, ...]
    balanced_indices: tuple[int, ...]
    train_labels: tuple[int, ...]
    fit_stats: dict[str, tuple[float, float]]


def cross_validate(
    dataset: Dataset,
    family: str,
    model_kind: str,
    fold_mode: FoldMode | FoldPlan,
    seed: int,
    train_config: TrainConfig | None = None,
    forest_params: ForestParams | None = None,
    threshold: float = DEFAULT_THRESHOLD,
    max_plan_retries: int = 100,
    fold_observer=None,
) -> MetricSet:
    """Cross-validated metrics for one (family, model kind) pair.

    Accepts a prepared FoldPlan (used as the first attempt) or a FoldMode;
    plans producing a single-class training fold are reseeded either way.
    ``fold_observer`` receives a FoldTrace per completed fold, for audits.
    """
    if model_kind not in MODEL_KINDS:
        raise ValueError(f"model kind must be one of {MODEL_KINDS}, got {model_kind!r}")
    labels = dataset.labels(family)
    y = np.array([1 if lab else 0 for lab in labels], dtype=int)
    present = np.array([lab is not None for lab in labels])
    if int(y[present].sum()) < 2 or int((1 - y[present]).sum()) < 2:
        raise TooFewRecords(f"family {family!r} needs at least 2 records of each class")

    first_plan = fold_mode if isinstance(fold_mode, FoldPlan) else None
    mode = fold_mode.mode if isinstance(fold_mode, FoldPlan) else fold_mode
    for attempt in range(max_plan_retries):
        if attempt == 0 and first_plan is not None:
            plan = first_plan
        else:
            plan = plan_folds(len(dataset), mode, derive_seed(seed, "plan", attempt))
        try:
            per_fold = _run_plan(
                dataset, family, model_kind, plan, y, present, seed,
                train_config, forest_params, threshold, fold_observer,
            )
        except SingleClassFold:
            continue
        return _aggregate(per_fold)
    raise AllFoldsDegenerate(
        f"no fold plan without a single-class training fold in {max_plan_retries} attempts"
    )


def _run_plan(
    dataset, family, model_kind, plan, y, present, seed,
    train_config, forest_params, threshold, fold_observer=None,
) -> list[FoldMetrics]:
    per_fold: list[FoldMetrics] = []
    for fold_no, (train_idx, test_idx) in enumerate(plan.folds):
        train_idx = [i for i in train_idx if present[i]]
        test_idx = [i for i in test_idx if present[i]]
        if not train_idx:
            raise SingleClassFold(f"fold {fold_no} has no labeled training rows")
        if not test_idx:
            # Nothing to score; every metric is excluded for this fold.
            per_fold.append(FoldMetrics(None, None, None, None))
            continue
        balanced = bootstrap_balance(
            train_idx, y[train_idx], derive_seed(seed, "balance", family, fold_no)
        )
        # Leakage guards: oversampling stays inside the training fold.
        assert set(balanced) <= set(train_idx)
        assert not set(balanced) & set(test_idx)

        matrix = encode(dataset, fit_on=train_idx)
        if fold_observer is not None:
            fold_observer(FoldTrace(
                fold_no, tuple(train_idx), tuple(test_idx), tuple(balanced),
                tuple(int(v) for v in y[balanced]), dict(matrix.fit_stats),
            ))
        scores = _train_and_score(
            model_kind,
            matrix.subset(balanced),
            y[balanced],
            matrix.subset(test_idx),
            derive_seed(seed, "model", family, model_kind, fold_no),
            train_config,
            forest_params,
        )
        per_fold.append(fold_metrics(scores, y[test_idx], threshold))
    return per_fold


@dataclass(frozen=True)
class EvalRow:
    family: str
    model: str
    metrics: MetricSet


@dataclass(frozen=True)
class EvalReport:
    rows: tuple[EvalRow, ...]
    dataset_fingerprint: str
    plan: str
    seed: int

    def as_dict(self) -> dict:
        return {
            "rows": [
                {"family": r.family, "model": r.model, **r.metrics.as_dict()}
                for r in self.rows
            ],
            "dataset_fingerprint": self.dataset_fingerprint,
            "plan": self.plan,
            "seed": self.seed,
        }


def dataset_fingerprint(dataset: Dataset) -> str:
    return hashlib.sha256(emit_csv(dataset).encode()).hexdigest()[:16]


def evaluate_all(
    dataset: Dataset,
    fold_mode: FoldMode,
    seed: int,
    model_kinds: Sequence[str] = MODEL_KINDS,
    families: Sequence[str] | None = None,
    train_config: TrainConfig | None = None,
    forest_params: ForestParams | None = None,
    skipped: list | None = None,
) -> EvalReport:
    """Cross-validate every (family, model kind) pair that has both classes.

    Families without two records of each class are skipped; pass ``skipped``
    to collect (family, reason) pairs for warning output.
    """
    rows: list[EvalRow] = []
    for family in families if families is not None else dataset.schema.targets:
        for kind in model_kinds:
            try:
                metrics = cross_validate(
                    dataset, family, kind, fold_mode, seed,
                    train_config=train_config, forest_params=forest_params,
                )
            except (TooFewRecords, AllFoldsDegenerate) as exc:
                if skipped is not None:
                    skipped.append((family, kind, str(exc)))
                continue
            rows.append(EvalRow(family, kind, metrics))
    return EvalReport(tuple(rows), dataset_fingerprint(dataset), fold_mode.describe(), seed)

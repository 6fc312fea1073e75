"""Synthetic cohort generation from per-feature marginal distributions.

Feature values are drawn independently: level-valued features from their
level probabilities, numeric features from a normal truncated to the
declared range and rounded to whole years. Labels come from a pluggable
rule so planted-signal experiments are reproducible:

* IndependentBernoulli(p)  - every family flips an independent p-coin
* PlantedLogistic          - threshold a linear score over encoded columns,
                             then flip each label with a noise rate
* IntrinsicRule            - one organism forces one family's label,
                             everything else is Bernoulli(p)

All draws run on sub-streams derived from the master seed, one per feature
and one per family, so output is bit-identical across runs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._rng import rng_for
from ..errors import BadProbabilities, SchemaError
from .encoding import encode
from .schema import Dataset, FeatureSchema, PatientRecord

_PROB_TOL = 1e-9


@dataclass(frozen=True)
class IndependentBernoulli:
    p: float = 0.5


@dataclass(frozen=True)
class PlantedLogistic:
    """Label = [sigmoid(w . x + intercept) >= 0.5], then noise flips.

    Weights are keyed by encoded column name (for example ``"age"`` or
    ``"organism=Klebsiella spp"``); the encoding is fit on the full
    synthetic cohort. The same rule labels every family, with independent
    flip noise per family.
    """

    weights: dict[str, float]
    intercept: float = 0.0
    flip_rate: float = 0.0


@dataclass(frozen=True)
class IntrinsicRule:
    """Force ``family``'s label whenever ``feature`` equals ``level``.

    Mirrors species-level intrinsic resistance: matching records always get
    ``forced_resistant``; all other labels (including other families) are
    Bernoulli(base_p).
    """

    family: str
    level: str
    feature: str = "organism"
    forced_resistant: bool = True
    base_p: float = 0.1


LabelRule = IndependentBernoulli | PlantedLogistic | IntrinsicRule


def _check_probabilities(name: str, probs: dict[str, float]) -> None:
    total = sum(probs.values())
    if abs(total - 1.0) > _PROB_TOL:
        raise BadProbabilities(f"probabilities for {name!r} sum to {total}, not 1")
    if any(p < 0 for p in probs.values()):
        raise BadProbabilities(f"negative probability for {name!r}")


def _sample_feature(marginal, n: int, rng: np.random.Generator):
    if "mean" in marginal:
        lo, hi = float(marginal["min"]), float(marginal["max"])
        values = np.empty(n)
        remaining = np.arange(n)
        while remaining.size:
            draw = rng.normal(marginal["mean"], marginal["std"], size=remaining.size)
            ok = (draw >= lo) & (draw <= hi)
            values[remaining[ok]] = draw[ok]
            remaining = remaining[~ok]
        return [float(v) for v in np.round(values)]
    levels = list(marginal)
    probs = np.array([marginal[lev] for lev in levels])
    picks = rng.choice(len(levels), size=n, p=probs / probs.sum())
    return [levels[int(i)] for i in picks]


def synthesize(
    schema: FeatureSchema,
    marginals: dict[str, dict],
    label_rule: LabelRule,
    n: int,
    seed: int,
) -> Dataset:
    """Generate ``n`` records matching ``marginals`` and label them by rule."""
    if n < 1:
        raise BadProbabilities(f"cohort size must be >= 1, got {n}")
    column_values: dict[str, list] = {}
    for name, kind in schema.features:
        if name not in marginals:
            raise SchemaError(f"no marginal distribution for feature {name!r}")
        marginal = marginals[name]
        if kind.is_numeric:
            if "mean" not in marginal:
                raise SchemaError(f"numeric feature {name!r} needs mean/std/min/max")
        else:
            _check_probabilities(name, marginal)
            unknown = set(marginal) - set(kind.levels)
            if unknown:
                raise SchemaError(f"marginal for {name!r} names unknown levels {sorted(unknown)}")
        column_values[name] = _sample_feature(marginal, n, rng_for(seed, "feature", name))

    records = [
        PatientRecord({name: column_values[name][i] for name in schema.feature_names}, {})
        for i in range(n)
    ]
    unlabeled = Dataset(schema, tuple(records))
    labels = _apply_rule(unlabeled, label_rule, seed)
    labeled = tuple(
        PatientRecord(rec.values, {fam: labels[fam][i] for fam in schema.targets})
        for i, rec in enumerate(records)
    )
    return Dataset(schema, labeled)


def _apply_rule(dataset: Dataset, rule: LabelRule, seed: int) -> dict[str, list[bool]]:
    schema = dataset.schema
    n = len(dataset)
    out: dict[str, list[bool]] = {}

    if isinstance(rule, IndependentBernoulli):
        for fam in schema.targets:
            draws = rng_for(seed, "label", fam).random(n)
            out[fam] = [bool(d < rule.p) for d in draws]
        return out

    if isinstance(rule, PlantedLogistic):
        matrix = encode(dataset, range(n))
        names = matrix.column_names
        unknown = set(rule.weights) - set(names)
        if unknown:
            raise SchemaError(f"planted weights name unknown columns {sorted(unknown)}")
        w = np.array([rule.weights.get(name, 0.0) for name in names])
        score = matrix.rows @ w + rule.intercept
        base = score >= 0.0
        for fam in schema.targets:
            flips = rng_for(seed, "label", fam).random(n) < rule.flip_rate
            out[fam] = [bool(b ^ f) for b, f in zip(base, flips)]
        return out

    if rule.family not in schema.targets:
        raise SchemaError(f"intrinsic rule names unknown family {rule.family!r}")
    kind = schema.kind_of(rule.feature)
    if rule.level not in kind.levels:
        raise SchemaError(f"intrinsic rule names unknown level {rule.level!r}")
    for fam in schema.targets:
        draws = rng_for(seed, "label", fam).random(n)
        labels = [bool(d < rule.base_p) for d in draws]
        if fam == rule.family:
            for i, rec in enumerate(dataset.records):
                if rec.values.get(rule.feature) == rule.level:
                    labels[i] = rule.forced_resistant
        out[fam] = labels
    return out

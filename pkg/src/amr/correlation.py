"""Mixed-type association statistics between clinical features and labels.

The statistic is chosen by feature kind: Pearson's r for numeric features
against the 0/1 resistance label, Spearman's rank correlation for ordinal
features, and Cramer's V (from the chi-square statistic of the contingency
table) for binary and categorical features. Significance comes from seeded
permutation tests rather than analytic distributions, so p-values are exact
to the resampling scheme and fully reproducible.

:func:`association_report` assembles the full feature-by-family matrix,
expanding categorical features into one row per level (member vs non-member
indicator against the label). For 2x2 tables a signed phi coefficient is
attached alongside the nonnegative Cramer's V so displays can show the
direction of the association.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._rng import derive_seed, rng_for
from .data.schema import BINARY, CATEGORICAL, NUMERIC, ORDINAL, Dataset, FeatureKind
from .errors import (
    DegenerateTable,
    LengthMismatch,
    TooFewSamples,
    ZeroVariance,
)

SIGNIFICANCE_LEVEL = 0.05
DEFAULT_PERMUTATIONS = 2000


class AssociationMethod(enum.Enum):
    PEARSON = "pearson"
    SPEARMAN = "spearman"
    CRAMERS_V = "cramers_v"


# ---------------------------------------------------------------------------
# core statistics
# ---------------------------------------------------------------------------

def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson's r via the computational sum formula.

    r = (n*Sxy - Sx*Sy) / sqrt((n*Sxx - Sx^2) * (n*Syy - Sy^2))
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise LengthMismatch(f"{x.shape} vs {y.shape}")
    n = x.size
    if n < 3:
        raise TooFewSamples(f"need at least 3 samples, got {n}")
    sx, sy = x.sum(), y.sum()
    vx = n * (x * x).sum() - sx * sx
    vy = n * (y * y).sum() - sy * sy
    if vx <= 0 or vy <= 0:
        raise ZeroVariance("a vector is constant")
    r = (n * (x * y).sum() - sx * sy) / math.sqrt(vx * vy)
    return float(min(1.0, max(-1.0, r)))


def midranks(x: Sequence[float]) -> np.ndarray:
    """1-based ranks with ties sharing their average rank."""
    x = np.asarray(x, dtype=float)
    order = np.argsort(x, kind="stable")
    ranks = np.empty(x.size, dtype=float)
    i = 0
    while i < x.size:
        j = i
        while j + 1 < x.size and x[order[j + 1]] == x[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman's rank correlation with midrank tie handling.

    Without ties this is the closed form 1 - 6*sum(d^2)/(n*(n^2-1)); with
    ties it falls back to Pearson's r of the midranks (the two agree when
    there are no ties).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise LengthMismatch(f"{x.shape} vs {y.shape}")
    n = x.size
    if n < 3:
        raise TooFewSamples(f"need at least 3 samples, got {n}")
    if np.unique(x).size == 1 or np.unique(y).size == 1:
        raise ZeroVariance("a vector is constant")
    rx, ry = midranks(x), midranks(y)
    if np.unique(x).size == n and np.unique(y).size == n:
        d = rx - ry
        return float(1.0 - 6.0 * float(d @ d) / (n * (n * n - 1)))
    return pearson(rx, ry)


@dataclass(frozen=True)
class ContingencyTable:
    """Observed cross-counts of two level-valued variables."""

    observed: np.ndarray

    def __post_init__(self):
        obs = np.asarray(self.observed, dtype=float)
        if obs.ndim != 2:
            raise DegenerateTable("contingency table must be 2-D")
        if (obs < 0).any() or not np.isfinite(obs).all():
            raise DegenerateTable("counts must be finite and nonnegative")
        object.__setattr__(self, "observed", obs)

    @property
    def total(self) -> float:
        return float(self.observed.sum())

    def trimmed(self) -> np.ndarray:
        """Observed counts with all-zero rows and columns dropped."""
        obs = self.observed
        obs = obs[obs.sum(axis=1) > 0][:, obs.sum(axis=0) > 0]
        if obs.shape[0] < 2 or obs.shape[1] < 2:
            raise DegenerateTable(
                f"need at least 2x2 non-empty cells, got {obs.shape[0]}x{obs.shape[1]}"
            )
        return obs


def crosstab(x_codes: Sequence[int], y_codes: Sequence[int]) -> ContingencyTable:
    """Contingency table of two integer-coded level vectors."""
    x = np.asarray(x_codes, dtype=int)
    y = np.asarray(y_codes, dtype=int)
    if x.shape != y.shape:
        raise LengthMismatch(f"{x.shape} vs {y.shape}")
    obs = np.zeros((int(x.max()) + 1, int(y.max()) + 1))
    np.add.at(obs, (x, y), 1.0)
    return ContingencyTable(obs)


def chi_square(table: ContingencyTable) -> float:
    """Pearson chi-square: sum over cells of (observed - expected)^2 / expected."""
    obs = table.trimmed()
    row = obs.sum(axis=1, keepdims=True)
    col = obs.sum(axis=0, keepdims=True)
    expected = row @ col / obs.sum()
    return float(((obs - expected) ** 2 / expected).sum())


def cramers_v(table: ContingencyTable) -> float:
    """Cramer's V: sqrt(chi2 / (N * (k - 1))), k the smaller side of the table."""
    obs = table.trimmed()
    k = min(obs.shape)
    v = math.sqrt(chi_square(table) / (obs.sum() * (k - 1)))
    return float(min(1.0, v))


def signed_phi(table: ContingencyTable) -> float:
    """Signed phi coefficient of a 2x2 table; |phi| equals Cramer's V there.

    Positive when the second row co-occurs with the second column.
    """
    obs = table.trimmed()
    if obs.shape != (2, 2):
        raise DegenerateTable("phi is defined for 2x2 tables only")
    a, b, c, d = obs[0, 0], obs[0, 1], obs[1, 0], obs[1, 1]
    denom = math.sqrt((a + b) * (c + d) * (a + c) * (b + d))
    return float((a * d - b * c) / denom)


def select_method(kind_x: FeatureKind, kind_y: FeatureKind) -> AssociationMethod:
    """Statistic for a feature of ``kind_x`` against a target of ``kind_y``.

    Numeric pairs with Pearson (binary target coded 0/1), ordinal with
    Spearman (target ranked), binary and categorical with Cramer's V.
    """
    del kind_y  # targets are binary labels; the feature kind decides
    if kind_x.kind == NUMERIC:
        return AssociationMethod.PEARSON
    if kind_x.kind == ORDINAL:
        return AssociationMethod.SPEARMAN
    return AssociationMethod.CRAMERS_V


def _statistic(method: AssociationMethod, x: np.ndarray, y: np.ndarray) -> float:
    if method is AssociationMethod.PEARSON:
        return pearson(x, y)
    if method is AssociationMethod.SPEARMAN:
        return spearman(x, y)
    return cramers_v(crosstab(x.astype(int), y.astype(int)))


def permutation_p_value(
    method: AssociationMethod,
    x: Sequence[float],
    y: Sequence[float],
    n_perm: int = DEFAULT_PERMUTATIONS,
    seed: int = 0,
) -> float:
    """Permutation p-value with the add-one correction.

    p = (1 + #{permutations at least as extreme}) / (1 + n_perm); two-sided
    (absolute value) for Pearson and Spearman, right-tailed for Cramer's V.
    Fewer than a few hundred permutations gives a coarse p-value grid; 2000
    is the default.
    """
    if n_perm < 1:
        raise TooFewSamples(f"need at least 1 permutation, got {n_perm}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    observed = _statistic(method, x, y)
    two_sided = method is not AssociationMethod.CRAMERS_V
    target = abs(observed) if two_sided else observed
    rng = rng_for(seed, "perm", method.value)
    hits = 0
    for _ in range(n_perm):
        stat = _statistic(method, x, rng.permutation(y))
        if two_sided:
            stat = abs(stat)
        if stat >= target:
            hits += 1
    return (1 + hits) / (1 + n_perm)


# ---------------------------------------------------------------------------
# feature x family association report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AssociationCell:
    """One (feature row, antibiotic family) entry of the association matrix.

    ``level`` is set for categorical features, which get one row per level.
    Cells without enough complete pairs, or with a degenerate statistic,
    carry ``available=False`` and a reason instead of numbers.
    """

    feature: str
    family: str
    level: str | None = None
    method: AssociationMethod | None = None
    coefficient: float | None = None
    p_value: float | None = None
    significant: bool | None = None
    n_used: int = 0
    signed_phi: float | None = None
    available: bool = True
    reason: str | None = None


@dataclass(frozen=True)
class AssociationReport:
    row_keys: tuple[tuple[str, str | None], ...]  # (feature, level) display order
    families: tuple[str, ...]
    cells: tuple[AssociationCell, ...]

    def cell(self, feature: str, level: str | None, family: str) -> AssociationCell:
        for c in self.cells:
            if (c.feature, c.level, c.family) == (feature, level, family):
                return c
        raise KeyError((feature, level, family))


def _complete_pairs(values, labels):
    xs, ys = [], []
    for v, lab in zip(values, labels):
        if v is None or lab is None:
            continue
        xs.append(v)
        ys.append(1 if lab else 0)
    return xs, ys


def _unavailable(feature, family, level, method, n_used, reason):
    return AssociationCell(
        feature, family, level, method, n_used=n_used, available=False, reason=reason
    )


def _make_cell(feature, level, family, method, x, y, n_perm, seed):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    if n < 3:
        return _unavailable(feature, family, level, method, n, "fewer than 3 complete pairs")
    try:
        coeff = _statistic(method, x, y)
        phi = None
        if method is AssociationMethod.CRAMERS_V:
            table = crosstab(x.astype(int), y.astype(int))
            if table.trimmed().shape == (2, 2):
                phi = signed_phi(table)
        p = permutation_p_value(method, x, y, n_perm=n_perm, seed=seed)
    except (ZeroVariance, DegenerateTable, TooFewSamples) as exc:
        return _unavailable(feature, family, level, method, n, str(exc))
    return AssociationCell(
        feature, family, level, method, coeff, p, p < SIGNIFICANCE_LEVEL, n, phi
    )


def association_report(
    dataset: Dataset, n_perm: int = DEFAULT_PERMUTATIONS, seed: int = 0
) -> AssociationReport:
    """Association matrix over every (feature row, family) pair.

    Categorical features contribute one row per level via a member/non-member
    indicator; the other kinds contribute a single row. Records missing the
    feature value or the family label are excluded pairwise per cell.
    """
    schema = dataset.schema
    row_keys: list[tuple[str, str | None]] = []
    for name, kind in schema.features:
        if kind.kind == CATEGORICAL:
            row_keys.extend((name, level) for level in kind.levels)
        else:
            row_keys.append((name, None))

    cells: list[AssociationCell] = []
    for feature, level in row_keys:
        kind = schema.kind_of(feature)
        values = dataset.feature_values(feature)
        for family in schema.targets:
            raw_x, y = _complete_pairs(values, dataset.labels(family))
            cell_seed = derive_seed(seed, "cell", feature, level, family)
            if kind.kind == NUMERIC:
                method, x = AssociationMethod.PEARSON, raw_x
            elif kind.kind == ORDINAL:
                method, x = AssociationMethod.SPEARMAN, [kind.rank(v) for v in raw_x]
            elif kind.kind == BINARY:
                method, x = AssociationMethod.CRAMERS_V, [kind.rank(v) for v in raw_x]
            else:
                method, x = AssociationMethod.CRAMERS_V, [1 if v == level else 0 for v in raw_x]
            cells.append(_make_cell(feature, level, family, method, x, y, n_perm, cell_seed))
    return AssociationReport(tuple(row_keys), schema.targets, tuple(cells))


def whole_feature_statistic(dataset: Dataset, feature: str, family: str) -> float:
    """Single-statistic view of a feature against one family.

    Categorical features are treated as one k-level variable (Cramer's V on
    the full k x 2 table) instead of per-level indicator rows.
    """
    kind = dataset.schema.kind_of(feature)
    values = dataset.feature_values(feature)
    raw_x, y = _complete_pairs(values, dataset.labels(family))
    if kind.kind == NUMERIC:
        return pearson(raw_x, y)
    if kind.kind == ORDINAL:
        return spearman([kind.rank(v) for v in raw_x], y)
    return cramers_v(crosstab([kind.rank(v) for v in raw_x], y))

"""Design-matrix construction: scaling, rank coding and one-hot expansion.

Encoding rules per feature kind:

* numeric     -> one column, min-max scaled to [0, 1] on the fit rows and
                 clamped outside that range on other rows
* binary      -> one column, 0 for the first declared level, 1 for the second
* ordinal     -> one column, level rank / (k - 1)
* categorical -> k one-hot columns in declared level order

Missing cells encode as all zeros across the feature's columns. Column order
follows schema feature order. Statistics (per-numeric min/max) are captured
from the fit rows only, so a matrix fit on a training fold never leaks test
information.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..errors import EmptyFitSet
from .schema import BINARY, NUMERIC, ORDINAL, Dataset, FeatureSchema, PatientRecord

ROLE_SCALED = "scaled-numeric"
ROLE_BINARY = "binary"
ROLE_ORDINAL = "ordinal-rank"
ROLE_ONEHOT = "one-hot"


class ConstantFeatureWarning(UserWarning):
    """Numeric feature constant on the fit rows; encoded as 0.5."""


@dataclass(frozen=True)
class EncodedColumn:
    """Provenance of one matrix column."""

    feature: str
    role: str
    level: str | None = None

    @property
    def name(self) -> str:
        return self.feature if self.level is None else f"{self.feature}={self.level}"


@dataclass(frozen=True)
class EncodedMatrix:
    """Numeric design matrix with column provenance and encoder fit stats."""

    rows: np.ndarray
    columns: tuple[EncodedColumn, ...]
    fit_stats: dict[str, tuple[float, float]]

    @property
    def width(self) -> int:
        return len(self.columns)

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(col.name for col in self.columns)

    def feature_columns(self, feature: str) -> list[int]:
        """Indices of every column derived from ``feature``."""
        return [i for i, col in enumerate(self.columns) if col.feature == feature]

    def subset(self, indices: Sequence[int]) -> "EncodedMatrix":
        """Row subset (duplicates allowed) sharing columns and fit stats."""
        return EncodedMatrix(self.rows[np.asarray(indices, dtype=int)], self.columns, self.fit_stats)


def layout_columns(schema: FeatureSchema) -> tuple[EncodedColumn, ...]:
    """Column layout implied by the schema, independent of any data."""
    cols: list[EncodedColumn] = []
    for name, kind in schema.features:
        if kind.kind == NUMERIC:
            cols.append(EncodedColumn(name, ROLE_SCALED))
        elif kind.kind == BINARY:
            cols.append(EncodedColumn(name, ROLE_BINARY))
        elif kind.kind == ORDINAL:
            cols.append(EncodedColumn(name, ROLE_ORDINAL))
        else:
            cols.extend(EncodedColumn(name, ROLE_ONEHOT, lev) for lev in kind.levels)
    return tuple(cols)


def fit_numeric_stats(
    schema: FeatureSchema, records: Sequence[PatientRecord], fit_on: Iterable[int]
) -> dict[str, tuple[float, float]]:
    """Per-numeric-feature (min, max) over present values in the fit rows."""
    fit_idx = list(fit_on)
    if not fit_idx:
        raise EmptyFitSet("fit index set is empty")
    stats: dict[str, tuple[float, float]] = {}
    for name, kind in schema.features:
        if kind.kind != NUMERIC:
            continue
        present = [records[i].values.get(name) for i in fit_idx]
        present = [v for v in present if v is not None]
        if not present:
            raise EmptyFitSet(f"numeric feature {name!r} has no present value in the fit set")
        lo, hi = float(min(present)), float(max(present))
        if lo == hi:
            warnings.warn(
                f"numeric feature {name!r} is constant ({lo}) on the fit rows; encoding as 0.5",
                ConstantFeatureWarning,
                stacklevel=2,
            )
        stats[name] = (lo, hi)
    return stats


def encode_records(
    schema: FeatureSchema,
    fit_stats: dict[str, tuple[float, float]],
    records: Sequence[PatientRecord],
) -> np.ndarray:
    """Encode records into a (n, p) float matrix using pre-fit numeric stats."""
    columns = layout_columns(schema)
    out = np.zeros((len(records), len(columns)), dtype=float)
    col = 0
    for name, kind in schema.features:
        if kind.kind == NUMERIC:
            lo, hi = fit_stats[name]
            for i, rec in enumerate(records):
                v = rec.values.get(name)
                if v is None:
                    continue
                if lo == hi:
                    out[i, col] = 0.5
                else:
                    out[i, col] = min(1.0, max(0.0, (float(v) - lo) / (hi - lo)))
            col += 1
        elif kind.kind in (BINARY, ORDINAL):
            k = len(kind.levels)
            for i, rec in enumerate(records):
                v = rec.values.get(name)
                if v is not None:
                    # A one-level ordinal is constant; 0.5 keeps the [0, 1] bounds.
                    out[i, col] = kind.rank(v) / (k - 1) if k > 1 else 0.5
            col += 1
        else:
            for i, rec in enumerate(records):
                v = rec.values.get(name)
                if v is not None:
                    out[i, col + kind.rank(v)] = 1.0
            col += len(kind.levels)
    return out


def encode(dataset: Dataset, fit_on: Iterable[int]) -> EncodedMatrix:
    """Encode every record of ``dataset``, fitting numeric stats on ``fit_on``."""
    stats = fit_numeric_stats(dataset.schema, dataset.records, fit_on)
    rows = encode_records(dataset.schema, stats, dataset.records)
    return EncodedMatrix(rows, layout_columns(dataset.schema), stats)

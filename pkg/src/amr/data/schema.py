"""Cohort schema: typed features, binary resistance targets, patient records.

A :class:`FeatureSchema` declares each clinical feature with one of four
kinds (numeric, binary, ordinal, categorical) plus the ordered list of
antibiotic families whose resistant/susceptible labels the cohort carries.
Two schemas for gram-positive and gram-negative cohorts ship as package
resources and can be loaded with :func:`load_builtin_schema`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources

from ..errors import BadNumeric, SchemaError, UnknownLevel

NUMERIC = "numeric"
BINARY = "binary"
ORDINAL = "ordinal"
CATEGORICAL = "categorical"

_KINDS = (NUMERIC, BINARY, ORDINAL, CATEGORICAL)

# Cell value of a single feature: number, level name, or missing.
Cell = float | str | None
# Resistance label: True = resistant, False = susceptible, None = missing.
Label = bool | None


@dataclass(frozen=True)
class FeatureKind:
    """Kind tag plus, for level-valued kinds, the ordered level names."""

    kind: str
    levels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise SchemaError(f"unknown feature kind {self.kind!r}")
        if self.kind == NUMERIC:
            if self.levels:
                raise SchemaError("numeric features carry no levels")
            return
        if not self.levels:
            raise SchemaError(f"{self.kind} feature needs a non-empty level list")
        if len(set(self.levels)) != len(self.levels):
            raise SchemaError(f"duplicate levels in {self.levels!r}")
        if self.kind == BINARY and len(self.levels) != 2:
            raise SchemaError("binary features need exactly two levels")

    @classmethod
    def numeric(cls) -> "FeatureKind":
        return cls(NUMERIC)

    @classmethod
    def binary(cls, low: str, high: str) -> "FeatureKind":
        return cls(BINARY, (low, high))

    @classmethod
    def ordinal(cls, *levels: str) -> "FeatureKind":
        """Levels ordered low to high."""
        return cls(ORDINAL, tuple(levels))

    @classmethod
    def categorical(cls, *levels: str) -> "FeatureKind":
        return cls(CATEGORICAL, tuple(levels))

    @property
    def is_numeric(self) -> bool:
        return self.kind == NUMERIC

    def rank(self, level: str) -> int:
        return self.levels.index(level)


@dataclass(frozen=True)
class FeatureSchema:
    """Ordered feature declarations plus antibiotic-family target names."""

    features: tuple[tuple[str, FeatureKind], ...]
    targets: tuple[str, ...]

    def __post_init__(self):
        if not self.features or not self.targets:
            raise SchemaError("schema needs at least one feature and one target")
        names = [n for n, _ in self.features] + list(self.targets)
        if len(set(names)) != len(names):
            raise SchemaError("feature/target names must be unique")

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.features)

    def kind_of(self, feature: str) -> FeatureKind:
        for name, kind in self.features:
            if name == feature:
                return kind
        raise SchemaError(f"no such feature: {feature!r}")

    def to_json(self) -> dict:
        feats = []
        for name, kind in self.features:
            entry: dict = {"name": name, "kind": kind.kind}
            if kind.levels:
                entry["levels"] = list(kind.levels)
            feats.append(entry)
        return {"features": feats, "targets": list(self.targets)}

    @classmethod
    def from_json(cls, doc: dict) -> "FeatureSchema":
        try:
            feats = tuple(
                (f["name"], FeatureKind(f["kind"], tuple(f.get("levels", ()))))
                for f in doc["features"]
            )
            targets = tuple(doc["targets"])
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"malformed schema document: {exc}") from exc
        return cls(feats, targets)


@dataclass(frozen=True)
class PatientRecord:
    """One patient's feature cells and per-family resistance labels."""

    values: dict[str, Cell]
    labels: dict[str, Label] = field(default_factory=dict)

    def validate(self, schema: FeatureSchema, row: int = -1) -> None:
        for name in self.values:
            if name not in schema.feature_names:
                raise SchemaError(f"row {row}: value for unknown feature {name!r}")
        for name in self.labels:
            if name not in schema.targets:
                raise SchemaError(f"row {row}: label for unknown family {name!r}")
        for name, kind in schema.features:
            cell = self.values.get(name)
            if cell is None:
                continue
            if kind.is_numeric:
                if not isinstance(cell, (int, float)) or not math.isfinite(cell):
                    raise BadNumeric(row, name, repr(cell))
            elif cell not in kind.levels:
                raise UnknownLevel(row, name, str(cell))


@dataclass(frozen=True)
class Dataset:
    """Validated cohort: a schema plus its patient records."""

    schema: FeatureSchema
    records: tuple[PatientRecord, ...]

    def __post_init__(self):
        for i, rec in enumerate(self.records):
            rec.validate(self.schema, row=i)

    def __len__(self) -> int:
        return len(self.records)

    def feature_values(self, name: str) -> list[Cell]:
        return [rec.values.get(name) for rec in self.records]

    def labels(self, family: str) -> list[Label]:
        if family not in self.schema.targets:
            raise SchemaError(f"no such target family: {family!r}")
        return [rec.labels.get(family) for rec in self.records]

    def labeled_indices(self, family: str) -> list[int]:
        """Record indices whose label for ``family`` is present."""
        return [i for i, lab in enumerate(self.labels(family)) if lab is not None]


def load_schema_file(path: str) -> FeatureSchema:
    with open(path, encoding="utf-8") as fh:
        return FeatureSchema.from_json(json.load(fh))


def _resource_text(filename: str) -> str:
    return resources.files("amr.data").joinpath("resources", filename).read_text("utf-8")


def load_builtin_schema(name: str) -> FeatureSchema:
    """Load a bundled schema by short name, ``"gpc"`` or ``"gnb"``."""
    return FeatureSchema.from_json(json.loads(_resource_text(f"{name}.schema.json")))


def load_builtin_marginals(name: str) -> dict:
    """Load bundled per-feature marginal distributions, ``"gpc"`` or ``"gnb"``."""
    return json.loads(_resource_text(f"{name}.marginals.json"))

"""Cohort CSV parsing and writing.

Format: one header row naming every schema feature and target column, then
one row per patient. Label cells are "R", "S" or empty; feature cells are
numbers, level names or empty. Quoting follows RFC 4180 via the csv module.
"""

from __future__ import annotations

import csv
import io
import math

from ..errors import BadNumeric, MissingColumn, UnknownColumn, UnknownLevel
from .schema import Dataset, FeatureSchema, PatientRecord

_LABEL_IN = {"R": True, "S": False, "": None}
_LABEL_OUT = {True: "R", False: "S", None: ""}


def parse_csv(text: str, schema: FeatureSchema) -> Dataset:
    """Parse a cohort CSV against ``schema``, preserving row order.

    Raises UnknownColumn/MissingColumn for header problems and
    BadNumeric/UnknownLevel (with 1-based data row numbers) for bad cells.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise MissingColumn("empty CSV: no header row") from None

    known = set(schema.feature_names) | set(schema.targets)
    for col in header:
        if col not in known:
            raise UnknownColumn(f"column {col!r} is not in the schema")
    for col in known:
        if col not in header:
            raise MissingColumn(f"schema column {col!r} missing from header")
    position = {col: i for i, col in enumerate(header)}

    records = []
    for row_no, row in enumerate(reader, start=1):
        if len(row) != len(header):
            raise MissingColumn(f"row {row_no}: expected {len(header)} cells, got {len(row)}")
        values: dict = {}
        for name, kind in schema.features:
            cell = row[position[name]]
            if cell == "":
                values[name] = None
            elif kind.is_numeric:
                try:
                    num = float(cell)
                except ValueError:
                    raise BadNumeric(row_no, name, cell) from None
                if not math.isfinite(num):
                    raise BadNumeric(row_no, name, cell)
                values[name] = num
            elif cell in kind.levels:
                values[name] = cell
            else:
                raise UnknownLevel(row_no, name, cell)
        labels: dict = {}
        for family in schema.targets:
            cell = row[position[family]]
            if cell not in _LABEL_IN:
                raise UnknownLevel(row_no, family, cell)
            labels[family] = _LABEL_IN[cell]
        records.append(PatientRecord(values, labels))
    return Dataset(schema, tuple(records))


def emit_csv(dataset: Dataset) -> str:
    """Write a Dataset back to CSV text; inverse of :func:`parse_csv`."""
    schema = dataset.schema
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(list(schema.feature_names) + list(schema.targets))
    for rec in dataset.records:
        row = []
        for name, _ in schema.features:
            cell = rec.values.get(name)
            row.append("" if cell is None else (repr(cell) if isinstance(cell, float) else str(cell)))
        for family in schema.targets:
            row.append(_LABEL_OUT[rec.labels.get(family)])
        writer.writerow(row)
    return out.getvalue()


def read_cohort(path: str, schema: FeatureSchema) -> Dataset:
    with open(path, encoding="utf-8") as fh:
        return parse_csv(fh.read(), schema)


def write_cohort(path: str, dataset: Dataset) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit_csv(dataset))

"""Serializers for association, evaluation and importance reports.

All writers are pure functions of their inputs, so a fixed seed and fixed
cohort produce byte-identical artifacts (no timestamps, no machine state).
"""

from __future__ import annotations

import csv
import io
import json

from .correlation import AssociationReport
from .evaluation import EvalReport
from .forest import FeatureImportance


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# association matrix
# ---------------------------------------------------------------------------

def association_to_json(report: AssociationReport) -> str:
    rows = []
    for cell in report.cells:
        row = {
            "feature": cell.feature,
            "family": cell.family,
            "method": cell.method.value if cell.method else None,
            "coefficient": cell.coefficient,
            "p_value": cell.p_value,
            "significant": cell.significant,
            "n_used": cell.n_used,
        }
        if cell.level is not None:
            row["level"] = cell.level
        if cell.signed_phi is not None:
            row["signed_phi"] = cell.signed_phi
        if not cell.available:
            row["unavailable_reason"] = cell.reason
        rows.append(row)
    return _dump({"rows": rows})


def association_to_csv(report: AssociationReport) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(
        ["feature", "level", "family", "method", "coefficient",
         "p_value", "significant", "n_used", "signed_phi"]
    )
    for cell in report.cells:
        writer.writerow([
            cell.feature,
            cell.level or "",
            cell.family,
            cell.method.value if cell.method else "",
            "" if cell.coefficient is None else repr(cell.coefficient),
            "" if cell.p_value is None else repr(cell.p_value),
            "" if cell.significant is None else str(cell.significant).lower(),
            cell.n_used,
            "" if cell.signed_phi is None else repr(cell.signed_phi),
        ])
    return out.getvalue()


def association_to_text(report: AssociationReport) -> str:
    """Aligned coefficient matrix; ``*`` marks p < 0.05, ``--`` unavailable.

    Binary and categorical rows show the signed phi when the table was 2x2,
    so direction is visible even though Cramer's V itself is nonnegative.
    """
    index = {(c.feature, c.level, c.family): c for c in report.cells}
    labels = [feat if level is None else f"{feat}={level}" for feat, level in report.row_keys]
    left = max(len(s) for s in labels) + 2
    col_width = max(max(len(f) for f in report.families) + 2, 9)
    lines = ["".ljust(left) + "".join(f.rjust(col_width) for f in report.families)]
    for (feature, level), label in zip(report.row_keys, labels):
        cells = []
        for family in report.families:
            cell = index[(feature, level, family)]
            if not cell.available:
                cells.append("--".rjust(col_width))
                continue
            shown = cell.signed_phi if cell.signed_phi is not None else cell.coefficient
            mark = "*" if cell.significant else " "
            cells.append(f"{shown:+.2f}{mark}".rjust(col_width))
        lines.append(label.ljust(left) + "".join(cells))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# evaluation report
# ---------------------------------------------------------------------------

def eval_report_to_json(report: EvalReport) -> str:
    return _dump(report.as_dict())


def eval_report_to_csv(report: EvalReport) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["family", "model", "recall", "precision", "f2", "auc"])
    for row in report.rows:
        m = row.metrics
        writer.writerow([
            row.family, row.model,
            *("" if v is None else repr(v) for v in (m.recall, m.precision, m.f2, m.auc)),
        ])
    return out.getvalue()


def eval_report_to_text(report: EvalReport) -> str:
    lines = [f"{'family':<28}{'model':<7}{'recall':>8}{'precision':>11}{'f2':>8}{'auc':>8}"]
    for row in report.rows:
        m = row.metrics
        vals = "".join(
            (f"{v:.2f}" if v is not None else "--").rjust(w)
            for v, w in ((m.recall, 8), (m.precision, 11), (m.f2, 8), (m.auc, 8))
        )
        lines.append(f"{row.family:<28}{row.model:<7}" + vals)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# feature importance
# ---------------------------------------------------------------------------

def importance_to_json(per_family: dict[str, list[FeatureImportance]], top: int = 10) -> str:
    return _dump({
        "families": {
            family: [
                {"feature": fi.feature, "importance": fi.importance, "normalized": fi.normalized}
                for fi in ranking[:top]
            ]
            for family, ranking in per_family.items()
        }
    })


def importance_to_text(per_family: dict[str, list[FeatureImportance]], top: int = 10) -> str:
    lines = []
    for family, ranking in per_family.items():
        lines.append(f"{family}")
        width = max(len(fi.feature) for fi in ranking[:top]) + 2
        for fi in ranking[:top]:
            bar = "#" * max(0, round(20 * fi.normalized))
            lines.append(f"  {fi.feature.ljust(width)}{fi.importance:+.4f}  {bar}")
        lines.append("")
    return "\n".join(lines)

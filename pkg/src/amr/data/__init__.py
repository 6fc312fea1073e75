"""Cohort data model: schemas, CSV ingestion, encoding, folds, synthesis."""

from .encoding import (
    ConstantFeatureWarning,
    EncodedColumn,
    EncodedMatrix,
    encode,
    encode_records,
    fit_numeric_stats,
    layout_columns,
)
from .folds import (
    DEFAULT_MODE,
    FoldPlan,
    KFold,
    MonteCarlo,
    bootstrap_balance,
    parse_fold_mode,
    plan_folds,
)
from .io import emit_csv, parse_csv, read_cohort, write_cohort
from .schema import (
    BINARY,
    CATEGORICAL,
    NUMERIC,
    ORDINAL,
    Dataset,
    FeatureKind,
    FeatureSchema,
    PatientRecord,
    load_builtin_marginals,
    load_builtin_schema,
    load_schema_file,
)
from .synthesis import IndependentBernoulli, IntrinsicRule, PlantedLogistic, synthesize

__all__ = [
    "BINARY",
    "CATEGORICAL",
    "NUMERIC",
    "ORDINAL",
    "ConstantFeatureWarning",
    "Dataset",
    "DEFAULT_MODE",
    "EncodedColumn",
    "EncodedMatrix",
    "FeatureKind",
    "FeatureSchema",
    "FoldPlan",
    "IndependentBernoulli",
    "IntrinsicRule",
    "KFold",
    "MonteCarlo",
    "PatientRecord",
    "PlantedLogistic",
    "bootstrap_balance",
    "emit_csv",
    "encode",
    "encode_records",
    "fit_numeric_stats",
    "layout_columns",
    "load_builtin_marginals",
    "load_builtin_schema",
    "load_schema_file",
    "parse_csv",
    "parse_fold_mode",
    "plan_folds",
    "read_cohort",
    "synthesize",
    "write_cohort",
]

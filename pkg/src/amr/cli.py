"""Command-line entry point: analyze, train, importance, synth, serve.

Every command takes an explicit --seed and writes deterministic artifacts;
re-running with the same inputs and seed reproduces the outputs byte for
byte. Validation and I/O problems exit with status 2 and a diagnostic on
stderr. The AMR_LOG environment variable (DEBUG/INFO/WARNING/ERROR)
controls log verbosity.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import bundle as bundle_mod
from . import service
from .correlation import association_report
from .data import (
    IndependentBernoulli,
    IntrinsicRule,
    PlantedLogistic,
    load_builtin_marginals,
    load_builtin_schema,
    load_schema_file,
    parse_fold_mode,
    read_cohort,
    synthesize,
    write_cohort,
)
from .data.encoding import EncodedMatrix, encode_records, layout_columns
from .errors import AmrError
from .evaluation import MODEL_KINDS, evaluate_all
from .forest import ForestParams, oob_importance
from .neuralnet import TrainConfig
from .reports import (
    association_to_csv,
    association_to_json,
    association_to_text,
    eval_report_to_csv,
    eval_report_to_json,
    eval_report_to_text,
    importance_to_json,
    importance_to_text,
)

logger = logging.getLogger(__name__)

BUILTIN_SCHEMAS = ("gpc", "gnb")


def _load_schema(spec: str):
    if spec in BUILTIN_SCHEMAS:
        return load_builtin_schema(spec)
    return load_schema_file(spec)


def _load_marginals(spec: str) -> dict:
    if spec in BUILTIN_SCHEMAS:
        return load_builtin_marginals(spec)
    with open(spec, encoding="utf-8") as fh:
        return json.load(fh)


def _parse_rule(spec: str):
    if spec.startswith("bernoulli:"):
        return IndependentBernoulli(float(spec.split(":", 1)[1]))
    with open(spec, encoding="utf-8") as fh:
        doc = json.load(fh)
    kind = doc.get("kind")
    if kind == "bernoulli":
        return IndependentBernoulli(float(doc["p"]))
    if kind == "planted_logistic":
        return PlantedLogistic(
            weights={k: float(v) for k, v in doc["weights"].items()},
            intercept=float(doc.get("intercept", 0.0)),
            flip_rate=float(doc.get("flip_rate", 0.0)),
        )
    if kind == "intrinsic":
        return IntrinsicRule(
            family=doc["family"],
            level=doc["level"],
            feature=doc.get("feature", "organism"),
            forced_resistant=bool(doc.get("forced_resistant", True)),
            base_p=float(doc.get("base_p", 0.1)),
        )
    raise AmrError(f"unknown label rule kind {kind!r} in {spec}")


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info("wrote %s", path)


def cmd_analyze(args) -> int:
    schema = _load_schema(args.schema)
    dataset = read_cohort(args.cohort, schema)
    report = association_report(dataset, n_perm=args.permutations, seed=args.seed)
    out = Path(args.out)
    _write(out / "association.json", association_to_json(report))
    _write(out / "association.csv", association_to_csv(report))
    matrix = association_to_text(report)
    _write(out / "association.txt", matrix)
    print(matrix, end="")
    return 0


def cmd_train(args) -> int:
    schema = _load_schema(args.schema)
    dataset = read_cohort(args.cohort, schema)
    mode = parse_fold_mode(args.folds)
    kinds = tuple(k.strip() for k in args.models.split(","))
    for kind in kinds:
        if kind not in MODEL_KINDS:
            raise AmrError(f"unknown model kind {kind!r}; choose from {','.join(MODEL_KINDS)}")
    train_config = TrainConfig(
        learning_rate=args.learning_rate, epochs=args.epochs, batch_size=args.batch_size,
    )
    forest_params = ForestParams(n_trees=args.trees)

    skipped: list = []
    report = evaluate_all(
        dataset, mode, args.seed, model_kinds=kinds,
        train_config=train_config, forest_params=forest_params, skipped=skipped,
    )
    for family, kind, reason in skipped:
        logger.warning("skipped %s/%s: %s", family, kind, reason)
    out = Path(args.out)
    _write(out / "eval_report.json", eval_report_to_json(report))
    _write(out / "eval_report.csv", eval_report_to_csv(report))
    trained = bundle_mod.train_bundle(
        dataset, report, args.seed, model_kinds=kinds,
        train_config=train_config, forest_params=forest_params,
    )
    out.mkdir(parents=True, exist_ok=True)
    bundle_mod.save_bundle(str(out / "bundle.json"), trained)
    logger.info("wrote %s", out / "bundle.json")
    print(eval_report_to_text(report), end="")
    return 0


def cmd_importance(args) -> int:
    trained = bundle_mod.load_bundle(args.bundle)
    dataset = read_cohort(args.cohort, trained.schema)
    per_family = {}
    for family, (forest, training_rows) in bundle_mod.forests_in(trained).items():
        if training_rows is None:
            raise AmrError(f"bundle lacks training rows for family {family!r}")
        records = [dataset.records[i] for i in training_rows]
        rows = encode_records(trained.schema, trained.fit_stats, records)
        matrix = EncodedMatrix(rows, layout_columns(trained.schema), trained.fit_stats)
        labels = dataset.labels(family)
        y = np.array([1 if labels[i] else 0 for i in training_rows], dtype=int)
        per_family[family] = oob_importance(forest, matrix, y, seed=args.seed, n_repeats=args.repeats)
    out = Path(args.out)
    _write(out / "importance.json", importance_to_json(per_family))
    text = importance_to_text(per_family)
    _write(out / "importance.txt", text)
    print(text, end="")
    return 0


def cmd_synth(args) -> int:
    schema = _load_schema(args.schema)
    marginals = _load_marginals(args.marginals)
    rule = _parse_rule(args.rule)
    dataset = synthesize(schema, marginals, rule, n=args.n, seed=args.seed)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    write_cohort(args.out, dataset)
    logger.info("wrote %s (%d records)", args.out, len(dataset))
    return 0


def cmd_serve(args) -> int:
    service.serve(args.bundle, args.bind)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="amr", description="Antimicrobial-resistance prediction pipeline"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="feature-family association matrix")
    analyze.add_argument("--schema", required=True, help="gpc, gnb, or a schema JSON path")
    analyze.add_argument("--cohort", required=True, help="cohort CSV path")
    analyze.add_argument("--out", required=True, help="output directory")
    analyze.add_argument("--seed", required=True, type=int)
    analyze.add_argument("--permutations", type=int, default=2000)
    analyze.set_defaults(func=cmd_analyze)

    trn = sub.add_parser("train", help="cross-validate and build a model bundle")
    trn.add_argument("--schema", required=True)
    trn.add_argument("--cohort", required=True)
    trn.add_argument("--out", required=True)
    trn.add_argument("--seed", required=True, type=int)
    trn.add_argument("--folds", default="mc:10:0.8", help="kfold:K or mc:N:FRACTION")
    trn.add_argument("--models", default="rf,mlp,cnn")
    trn.add_argument("--trees", type=int, default=100)
    trn.add_argument("--epochs", type=int, default=300)
    trn.add_argument("--batch-size", type=int, default=16)
    trn.add_argument("--learning-rate", type=float, default=0.01)
    trn.set_defaults(func=cmd_train)

    imp = sub.add_parser("importance", help="per-family feature importance from the forest")
    imp.add_argument("--bundle", required=True)
    imp.add_argument("--cohort", required=True)
    imp.add_argument("--out", required=True)
    imp.add_argument("--seed", required=True, type=int)
    imp.add_argument("--repeats", type=int, default=5)
    imp.set_defaults(func=cmd_importance)

    synth = sub.add_parser("synth", help="generate a synthetic cohort CSV")
    synth.add_argument("--schema", required=True)
    synth.add_argument("--marginals", required=True, help="gpc, gnb, or a marginals JSON path")
    synth.add_argument("--rule", required=True, help="bernoulli:P or a rule JSON path")
    synth.add_argument("--n", required=True, type=int)
    synth.add_argument("--seed", required=True, type=int)
    synth.add_argument("--out", required=True, help="output CSV path")
    synth.set_defaults(func=cmd_synth)

    srv = sub.add_parser("serve", help="serve predictions over HTTP")
    srv.add_argument("--bundle", required=True)
    srv.add_argument("--bind", default="127.0.0.1:8000")
    srv.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(
        level=getattr(logging, os.environ.get("AMR_LOG", "WARNING").upper(), logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (AmrError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Trained-model bundles: persistence and single-record prediction.

A bundle holds everything the prediction service needs: the schema, the
encoder's numeric fit statistics, and per antibiotic family one trained
model per requested kind plus the kind chosen for serving (highest
cross-validated AUC). Persistence is versioned JSON throughout - weights as
shape-tagged flat arrays (row-major), trees as nested leaf/split records -
so bundles are human-diffable and reload bit-exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ._rng import derive_seed
from .data.encoding import encode, encode_records, layout_columns
from .data.folds import bootstrap_balance
from .data.schema import Dataset, FeatureSchema, PatientRecord
from .errors import BundleError, NoForestInBundle, UnknownLevel
from .evaluation import DEFAULT_THRESHOLD, EvalReport, MODEL_KINDS
from .forest import Forest, ForestParams, Leaf, Split, predict_forest, train_forest
from .neuralnet import (
    Conv1D,
    Dense,
    Flatten,
    LayerParams,
    NetworkParams,
    TrainConfig,
    cnn_spec,
    forward,
    mlp_spec,
    train,
)

FORMAT_VERSION = "1"


@dataclass(frozen=True)
class NeuralModel:
    spec: tuple
    params: NetworkParams
    config: TrainConfig


@dataclass(frozen=True)
class FamilyModels:
    serving_kind: str
    models: dict[str, object]  # kind -> Forest | NeuralModel
    rf_training_rows: tuple[int, ...] | None = None


@dataclass(frozen=True)
class TrainedModelBundle:
    schema: FeatureSchema
    fit_stats: dict[str, tuple[float, float]]
    families: dict[str, FamilyModels]
    training_meta: dict
    threshold: float = DEFAULT_THRESHOLD
    format_version: str = FORMAT_VERSION

    def __post_init__(self):
        numeric = {n for n, k in self.schema.features if k.is_numeric}
        if not numeric <= set(self.fit_stats):
            raise BundleError(f"encoder stats missing for {sorted(numeric - set(self.fit_stats))}")
        unknown = set(self.families) - set(self.schema.targets)
        if unknown:
            raise BundleError(f"models for unknown families {sorted(unknown)}")


# ---------------------------------------------------------------------------
# training the full-cohort bundle
# ---------------------------------------------------------------------------

def train_bundle(
    dataset: Dataset,
    eval_report: EvalReport,
    seed: int,
    model_kinds=MODEL_KINDS,
    train_config: TrainConfig | None = None,
    forest_params: ForestParams | None = None,
) -> TrainedModelBundle:
    """Refit every evaluated (family, kind) on the full balanced cohort.

    The encoder is fit once on all records. Per family, the serving kind is
    the evaluated kind with the highest cross-validated AUC.
    """
    matrix = encode(dataset, fit_on=range(len(dataset)))
    families: dict[str, FamilyModels] = {}
    evaluated = {(r.family, r.model): r.metrics for r in eval_report.rows}

    for family in dataset.schema.targets:
        kinds = [k for k in model_kinds if (family, k) in evaluated]
        if not kinds:
            continue
        labeled = dataset.labeled_indices(family)
        y = np.array([1 if lab else 0 for lab in dataset.labels(family)], dtype=int)
        balanced = bootstrap_balance(
            labeled, y[labeled], derive_seed(seed, "bundle-balance", family)
        )
        Xtr = matrix.subset(balanced)
        ytr = y[balanced]
        models: dict[str, object] = {}
        rf_rows = None
        for kind in kinds:
            model_seed = derive_seed(seed, "bundle-model", family, kind)
            if kind == "rf":
                base = forest_params or ForestParams()
                models[kind] = train_forest(Xtr, ytr, ForestParams(
                    n_trees=base.n_trees, mtry=base.mtry, max_depth=base.max_depth,
                    min_samples_split=base.min_samples_split, seed=model_seed,
                ))
                rf_rows = tuple(balanced)
            else:
                base = train_config or TrainConfig()
                config = TrainConfig(
                    learning_rate=base.learning_rate, momentum=base.momentum,
                    epochs=base.epochs, batch_size=base.batch_size, seed=model_seed,
                )
                spec = mlp_spec(Xtr.width) if kind == "mlp" else cnn_spec(Xtr.width)
                params = train(spec, Xtr.rows, ytr.astype(float), config)
                models[kind] = NeuralModel(tuple(spec), params, config)
        scored = [(k, evaluated[(family, k)].auc) for k in kinds]
        with_auc = [(k, a) for k, a in scored if a is not None]
        serving = max(with_auc, key=lambda ka: ka[1])[0] if with_auc else kinds[0]
        families[family] = FamilyModels(serving, models, rf_rows)

    meta = {
        "seed": seed,
        "plan": eval_report.plan,
        "dataset_fingerprint": eval_report.dataset_fingerprint,
        "metrics": [
            {
                "family": r.family,
                "model": r.model,
                "recall": r.metrics.recall,
                "precision": r.metrics.precision,
                "f2": r.metrics.f2,
                "auc": r.metrics.auc,
            }
            for r in eval_report.rows
        ],
    }
    return TrainedModelBundle(dataset.schema, matrix.fit_stats, families, meta)


# ---------------------------------------------------------------------------
# prediction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyPrediction:
    family: str
    model: str
    probability: float
    predicted: str  # "R" | "S"
    threshold: float


def record_from_features(schema: FeatureSchema, features: dict) -> tuple[PatientRecord, list[str]]:
    """Build a validated record from a name->value map; returns missing names.

    Unknown feature names and unknown levels raise UnknownLevel with the
    offending field; null/omitted values count as missing.
    """
    known = set(schema.feature_names)
    for name in features:
        if name not in known:
            raise UnknownLevel(-1, name, "not a schema feature")
    values: dict = {}
    missing: list[str] = []
    for name, kind in schema.features:
        raw = features.get(name)
        if raw is None or raw == "":
            values[name] = None
            missing.append(name)
        elif kind.is_numeric:
            try:
                values[name] = float(raw)
            except (TypeError, ValueError):
                raise UnknownLevel(-1, name, str(raw)) from None
        else:
            if not isinstance(raw, str) or raw not in kind.levels:
                raise UnknownLevel(-1, name, str(raw))
            values[name] = raw
    record = PatientRecord(values, {})
    record.validate(schema)
    return record, missing


def predict_record(
    bundle: TrainedModelBundle, features: dict, model_kind: str | None = None
) -> tuple[list[FamilyPrediction], list[str]]:
    """Per-family predictions for one feature map, in schema target order."""
    record, missing = record_from_features(bundle.schema, features)
    row = encode_records(bundle.schema, bundle.fit_stats, [record])[0]
    out: list[FamilyPrediction] = []
    for family in bundle.schema.targets:
        entry = bundle.families.get(family)
        if entry is None:
            continue
        kind = model_kind or entry.serving_kind
        model = entry.models.get(kind)
        if model is None:
            raise BundleError(f"family {family!r} has no {kind!r} model")
        if isinstance(model, Forest):
            prob = predict_forest(model, row)
        else:
            prob = forward(model.params, list(model.spec), row)
        out.append(FamilyPrediction(
            family, kind, float(prob),
            "R" if prob >= bundle.threshold else "S", bundle.threshold,
        ))
    return out, missing


def forests_in(bundle: TrainedModelBundle) -> dict[str, tuple[Forest, tuple[int, ...]]]:
    """Per-family random forest and its training row multiset."""
    out = {}
    for family, entry in bundle.families.items():
        forest = entry.models.get("rf")
        if isinstance(forest, Forest):
            out[family] = (forest, entry.rf_training_rows)
    if not out:
        raise NoForestInBundle("bundle contains no random-forest models")
    return out


# ---------------------------------------------------------------------------
# JSON codec
# ---------------------------------------------------------------------------

def _node_to_json(node) -> dict:
    if isinstance(node, Leaf):
        return {"leaf": {"p": node.positive_fraction, "n": node.n_samples}}
    return {"split": {
        "col": node.column, "thr": node.threshold,
        "l": _node_to_json(node.left), "r": _node_to_json(node.right),
    }}


def _node_from_json(doc: dict):
    if "leaf" in doc:
        return Leaf(doc["leaf"]["p"], doc["leaf"]["n"])
    s = doc["split"]
    return Split(s["col"], s["thr"], _node_from_json(s["l"]), _node_from_json(s["r"]))


def _forest_to_json(forest: Forest) -> dict:
    return {
        "kind": "rf",
        "params": {
            "n_trees": forest.params.n_trees,
            "mtry": forest.params.mtry,
            "max_depth": forest.params.max_depth,
            "min_samples_split": forest.params.min_samples_split,
            "seed": forest.params.seed,
        },
        "trees": [_node_to_json(t) for t in forest.trees],
        "bags": [list(b) for b in forest.bag_indices],
        "oobs": [list(o) for o in forest.oob_indices],
    }


def _forest_from_json(doc: dict, schema: FeatureSchema) -> Forest:
    return Forest(
        tuple(_node_from_json(t) for t in doc["trees"]),
        tuple(tuple(b) for b in doc["bags"]),
        tuple(tuple(o) for o in doc["oobs"]),
        ForestParams(**doc["params"]),
        layout_columns(schema),
    )


def _array_to_json(arr: np.ndarray) -> dict:
    return {"shape": list(arr.shape), "data": [float(v) for v in arr.ravel(order="C")]}


def _array_from_json(doc: dict) -> np.ndarray:
    return np.array(doc["data"], dtype=float).reshape(doc["shape"], order="C")


_LAYER_TAGS = {"dense": Dense, "conv1d": Conv1D, "flatten": Flatten}


def _spec_to_json(spec) -> list:
    out = []
    for layer in spec:
        if isinstance(layer, Dense):
            out.append({"dense": {"out": layer.out_width, "activation": layer.activation}})
        elif isinstance(layer, Conv1D):
            out.append({"conv1d": {
                "filters": layer.n_filters, "size": layer.filter_size,
                "activation": layer.activation,
            }})
        else:
            out.append({"flatten": {}})
    return out


def _spec_from_json(doc: list) -> tuple:
    spec = []
    for entry in doc:
        ((tag, body),) = entry.items()
        if tag == "dense":
            spec.append(Dense(body["out"], body["activation"]))
        elif tag == "conv1d":
            spec.append(Conv1D(body["filters"], body["size"], body["activation"]))
        elif tag == "flatten":
            spec.append(Flatten())
        else:
            raise BundleError(f"unknown layer tag {tag!r}")
    return tuple(spec)


def _neural_to_json(model: NeuralModel, kind: str) -> dict:
    return {
        "kind": kind,
        "spec": _spec_to_json(model.spec),
        "config": {
            "learning_rate": model.config.learning_rate,
            "momentum": model.config.momentum,
            "epochs": model.config.epochs,
            "batch_size": model.config.batch_size,
            "seed": model.config.seed,
        },
        "layers": [
            {
                "weights": None if lp.weights is None else _array_to_json(lp.weights),
                "bias": None if lp.bias is None else _array_to_json(lp.bias),
            }
            for lp in model.params.layers
        ],
    }


def _neural_from_json(doc: dict) -> NeuralModel:
    params = NetworkParams([
        LayerParams(
            None if layer["weights"] is None else _array_from_json(layer["weights"]),
            None if layer["bias"] is None else _array_from_json(layer["bias"]),
        )
        for layer in doc["layers"]
    ])
    return NeuralModel(_spec_from_json(doc["spec"]), params, TrainConfig(**doc["config"]))


def bundle_to_json(bundle: TrainedModelBundle) -> dict:
    return {
        "format_version": bundle.format_version,
        "schema": bundle.schema.to_json(),
        "encoder": {"fit_stats": {k: list(v) for k, v in bundle.fit_stats.items()}},
        "threshold": bundle.threshold,
        "families": {
            family: {
                "serving_kind": entry.serving_kind,
                "rf_training_rows": (
                    None if entry.rf_training_rows is None else list(entry.rf_training_rows)
                ),
                "models": {
                    kind: (
                        _forest_to_json(m) if isinstance(m, Forest) else _neural_to_json(m, kind)
                    )
                    for kind, m in entry.models.items()
                },
            }
            for family, entry in bundle.families.items()
        },
        "training": bundle.training_meta,
    }


def bundle_from_json(doc: dict) -> TrainedModelBundle:
    if not isinstance(doc, dict) or "format_version" not in doc:
        raise BundleError("missing format_version")
    if doc["format_version"] != FORMAT_VERSION:
        raise BundleError(f"unsupported format_version {doc['format_version']!r}")
    schema = FeatureSchema.from_json(doc["schema"])
    fit_stats = {k: (float(v[0]), float(v[1])) for k, v in doc["encoder"]["fit_stats"].items()}
    families = {}
    for family, entry in doc["families"].items():
        models = {}
        for kind, mdoc in entry["models"].items():
            models[kind] = (
                _forest_from_json(mdoc, schema) if mdoc["kind"] == "rf" else _neural_from_json(mdoc)
            )
        rows = entry.get("rf_training_rows")
        families[family] = FamilyModels(
            entry["serving_kind"], models, None if rows is None else tuple(rows)
        )
    return TrainedModelBundle(
        schema, fit_stats, families, doc.get("training", {}),
        doc.get("threshold", DEFAULT_THRESHOLD), doc["format_version"],
    )


def save_bundle(path: str, bundle: TrainedModelBundle) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(bundle_to_json(bundle), fh, indent=2)
        fh.write("\n")


def load_bundle(path: str) -> TrainedModelBundle:
    with open(path, encoding="utf-8") as fh:
        return bundle_from_json(json.load(fh))

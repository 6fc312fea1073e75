"""Regenerate the fixture bundle the round-trip test serves.

Run from the repository root (requires the amr package installed):

    python3 frontend/test/fixtures/generate.py

Deterministic: same seeds, same bundle bytes.
"""

from pathlib import Path

from amr.bundle import save_bundle, train_bundle
from amr.data import MonteCarlo, PlantedLogistic, load_builtin_marginals, load_builtin_schema, synthesize
from amr.evaluation import evaluate_all
from amr.forest import ForestParams
from amr.neuralnet import TrainConfig

HERE = Path(__file__).parent

schema = load_builtin_schema("gpc")
rule = PlantedLogistic(weights={"mrsa_screening_test": 8.0}, intercept=-4.0, flip_rate=0.1)
cohort = synthesize(schema, load_builtin_marginals("gpc"), rule, n=80, seed=2301)
config = TrainConfig(epochs=40)
forest = ForestParams(n_trees=12)
report = evaluate_all(cohort, MonteCarlo(3, 0.8), seed=2301,
                      model_kinds=("rf", "mlp"), families=("Gentamicin", "Cefoxitin", "Erythromycin"),
                      train_config=config, forest_params=forest)
bundle = train_bundle(cohort, report, seed=2301, model_kinds=("rf", "mlp"),
                      train_config=config, forest_params=forest)
save_bundle(str(HERE / "bundle.json"), bundle)
print("wrote", HERE / "bundle.json")

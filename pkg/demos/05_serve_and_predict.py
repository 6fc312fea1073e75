"""Train a small bundle, serve it over HTTP, and query it like the console.

The service exposes /schema (drives the clinician form), /predict,
/metrics and /health. This demo spins the server up on a loopback port,
posts one patient, and prints the per-family resistance probabilities.
"""

import json
import threading
import urllib.request

from amr.bundle import train_bundle
from amr.data import MonteCarlo, PlantedLogistic, load_builtin_marginals, load_builtin_schema, synthesize
from amr.evaluation import evaluate_all
from amr.neuralnet import TrainConfig
from amr.service import make_server

schema = load_builtin_schema("gpc")
rule = PlantedLogistic(weights={"mrsa_screening_test": 8.0}, intercept=-4.0, flip_rate=0.1)
cohort = synthesize(schema, load_builtin_marginals("gpc"), rule, n=80, seed=13)

report = evaluate_all(
    cohort, MonteCarlo(2, 0.8), seed=13, model_kinds=("rf", "mlp"),
    families=("Gentamicin", "Cefoxitin"), train_config=TrainConfig(epochs=60),
)
bundle = train_bundle(cohort, report, seed=13, model_kinds=("rf", "mlp"),
                      train_config=TrainConfig(epochs=60))

server = make_server(bundle, "127.0.0.1", 0)
threading.Thread(target=server.serve_forever, daemon=True).start()
base = "http://{}:{}".format(*server.server_address)
print(f"service at {base}")

patient = {
    "age": 52,
    "sex": "F",
    "mrsa_screening_test": "Positive",
    "inducible_clindamycin_resistance": "Negative",
    "organism": "Staphylococcus aureus",
    "diagnosis": "Cellulitis",
}
request = urllib.request.Request(
    base + "/predict",
    data=json.dumps({"features": patient}).encode(),
    headers={"Content-Type": "application/json"},
)
with urllib.request.urlopen(request) as resp:
    result = json.load(resp)

for entry in result["families"]:
    print(f"  {entry['family']:<14} {entry['predicted']}  "
          f"p(resistant) = {entry['probability']:.2f}  (model: {entry['model']})")

server.shutdown()
server.server_close()

"""Generate synthetic patient cohorts that match the published marginals.

Two cohort schemas ship with the package: gram-positive cocci (six
antibiotic families) and gram-negative bacilli (nine families). Records are
sampled feature by feature from bundled marginal distributions; labels come
from a configurable rule, here independent coin flips.
"""

from collections import Counter

from amr.data import IndependentBernoulli, load_builtin_marginals, load_builtin_schema, synthesize

for name, n in (("gpc", 103), ("gnb", 107)):
    schema = load_builtin_schema(name)
    marginals = load_builtin_marginals(name)
    cohort = synthesize(schema, marginals, IndependentBernoulli(0.3), n=n, seed=7)

    print(f"=== {name.upper()} cohort: {len(cohort)} patients ===")
    ages = [r.values["age"] for r in cohort.records]
    print(f"age: min {min(ages):.0f}, max {max(ages):.0f}, "
          f"mean {sum(ages) / len(ages):.1f}")
    organisms = Counter(r.values["organism"] for r in cohort.records)
    for organism, count in organisms.most_common(3):
        print(f"  {organism}: {count} ({100 * count / n:.1f}%)")
    resistant = sum(1 for lab in cohort.labels(schema.targets[0]) if lab)
    print(f"{schema.targets[0]}: {resistant}/{n} resistant\n")

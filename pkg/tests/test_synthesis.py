import numpy as np
import pytest

from amr.data import (
    IndependentBernoulli,
    IntrinsicRule,
    PlantedLogistic,
    load_builtin_marginals,
    load_builtin_schema,
    synthesize,
)
from amr.errors import BadProbabilities, SchemaError

GPC = load_builtin_schema("gpc")
GPC_MARGINALS = load_builtin_marginals("gpc")
GNB = load_builtin_schema("gnb")
GNB_MARGINALS = load_builtin_marginals("gnb")


class TestMarginals:
    def test_staph_aureus_fraction(self):
        ds = synthesize(GPC, GPC_MARGINALS, IndependentBernoulli(0.3), n=10000, seed=42)
        frac = np.mean([r.values["organism"] == "Staphylococcus aureus" for r in ds.records])
        assert abs(frac - 0.8252) < 0.02

    def test_klebsiella_fraction(self):
        ds = synthesize(GNB, GNB_MARGINALS, IndependentBernoulli(0.3), n=10000, seed=42)
        frac = np.mean([r.values["organism"] == "Klebsiella spp" for r in ds.records])
        assert abs(frac - 0.2804) < 0.02

    def test_age_within_declared_range(self):
        ds = synthesize(GNB, GNB_MARGINALS, IndependentBernoulli(0.3), n=2000, seed=1)
        ages = [r.values["age"] for r in ds.records]
        assert min(ages) >= 11.0 and max(ages) <= 89.0
        assert abs(np.mean(ages) - 44.13) < 1.5

    def test_ages_are_whole_years(self):
        ds = synthesize(GPC, GPC_MARGINALS, IndependentBernoulli(0.3), n=50, seed=9)
        assert all(float(r.values["age"]).is_integer() for r in ds.records)

    def test_bad_probabilities(self):
        marginals = dict(GPC_MARGINALS)
        marginals["sex"] = {"M": 0.7, "F": 0.4}
        with pytest.raises(BadProbabilities):
            synthesize(GPC, marginals, IndependentBernoulli(0.3), n=10, seed=0)

    def test_zero_size_cohort(self):
        with pytest.raises(BadProbabilities):
            synthesize(GPC, GPC_MARGINALS, IndependentBernoulli(0.3), n=0, seed=0)


class TestLabelRules:
    def test_bernoulli_zero_is_all_susceptible(self):
        ds = synthesize(GPC, GPC_MARGINALS, IndependentBernoulli(0.0), n=200, seed=3)
        for fam in GPC.targets:
            assert all(lab is False for lab in ds.labels(fam))

    def test_bernoulli_one_is_all_resistant(self):
        ds = synthesize(GPC, GPC_MARGINALS, IndependentBernoulli(1.0), n=50, seed=3)
        assert all(lab is True for lab in ds.labels("Cefoxitin"))

    def test_intrinsic_rule_forces_matching_records(self):
        rule = IntrinsicRule(family="Colistin", level="Proteus spp", base_p=0.1)
        ds = synthesize(GNB, GNB_MARGINALS, rule, n=1000, seed=7)
        for rec in ds.records:
            if rec.values["organism"] == "Proteus spp":
                assert rec.labels["Colistin"] is True

    def test_intrinsic_rule_unknown_family(self):
        with pytest.raises(SchemaError):
            synthesize(GNB, GNB_MARGINALS, IntrinsicRule(family="Nope", level="Proteus spp"), 10, 0)

    def test_planted_logistic_thresholds_encoded_score(self):
        rule = PlantedLogistic(
            weights={"mrsa_screening_test": 8.0}, intercept=-4.0, flip_rate=0.0
        )
        ds = synthesize(GPC, GPC_MARGINALS, rule, n=400, seed=11)
        for rec in ds.records:
            expect = rec.values["mrsa_screening_test"] in ("Not applicable", "Positive")
            assert rec.labels["Gentamicin"] is expect

    def test_planted_logistic_flip_rate(self):
        clean = PlantedLogistic(weights={"mrsa_screening_test": 8.0}, intercept=-4.0)
        noisy = PlantedLogistic(
            weights={"mrsa_screening_test": 8.0}, intercept=-4.0, flip_rate=0.1
        )
        a = synthesize(GPC, GPC_MARGINALS, clean, n=2000, seed=13)
        b = synthesize(GPC, GPC_MARGINALS, noisy, n=2000, seed=13)
        flips = np.mean(
            [x.labels["Cefoxitin"] != y.labels["Cefoxitin"] for x, y in zip(a.records, b.records)]
        )
        assert abs(flips - 0.1) < 0.03

    def test_planted_logistic_unknown_column(self):
        rule = PlantedLogistic(weights={"not_a_column": 1.0})
        with pytest.raises(SchemaError):
            synthesize(GPC, GPC_MARGINALS, rule, n=10, seed=0)


class TestDeterminism:
    def test_bit_identical_given_seed(self):
        a = synthesize(GPC, GPC_MARGINALS, IndependentBernoulli(0.25), n=103, seed=99)
        b = synthesize(GPC, GPC_MARGINALS, IndependentBernoulli(0.25), n=103, seed=99)
        assert a == b

    def test_different_seed_differs(self):
        a = synthesize(GPC, GPC_MARGINALS, IndependentBernoulli(0.25), n=103, seed=99)
        b = synthesize(GPC, GPC_MARGINALS, IndependentBernoulli(0.25), n=103, seed=100)
        assert a != b

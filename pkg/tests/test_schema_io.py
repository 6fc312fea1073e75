import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from amr.data import (
    Dataset,
    FeatureKind,
    FeatureSchema,
    PatientRecord,
    emit_csv,
    load_builtin_marginals,
    load_builtin_schema,
    parse_csv,
)
from amr.errors import BadNumeric, MissingColumn, SchemaError, UnknownColumn, UnknownLevel


def tiny_schema() -> FeatureSchema:
    return FeatureSchema(
        features=(
            ("age", FeatureKind.numeric()),
            ("sex", FeatureKind.binary("M", "F")),
            ("screen", FeatureKind.ordinal("Negative", "Not applicable", "Positive")),
            ("organism", FeatureKind.categorical("Staph", "Strep", "Entero")),
        ),
        targets=("Gentamicin", "Cefoxitin"),
    )


class TestFeatureKind:
    def test_duplicate_levels_rejected(self):
        with pytest.raises(SchemaError):
            FeatureKind.categorical("A", "A")

    def test_empty_levels_rejected(self):
        with pytest.raises(SchemaError):
            FeatureKind.ordinal()

    def test_binary_needs_two_levels(self):
        with pytest.raises(SchemaError):
            FeatureKind("binary", ("only",))

    def test_numeric_has_no_levels(self):
        with pytest.raises(SchemaError):
            FeatureKind("numeric", ("a",))


class TestSchema:
    def test_names_unique_across_features_and_targets(self):
        with pytest.raises(SchemaError):
            FeatureSchema((("x", FeatureKind.numeric()),), ("x",))

    def test_json_round_trip(self):
        schema = tiny_schema()
        assert FeatureSchema.from_json(json.loads(json.dumps(schema.to_json()))) == schema

    @pytest.mark.parametrize("name,n_features,n_targets", [("gpc", 6, 6), ("gnb", 6, 9)])
    def test_builtin_schemas(self, name, n_features, n_targets):
        schema = load_builtin_schema(name)
        assert len(schema.features) == n_features
        assert len(schema.targets) == n_targets

    @pytest.mark.parametrize("name", ["gpc", "gnb"])
    def test_builtin_marginals_cover_schema(self, name):
        schema = load_builtin_schema(name)
        marginals = load_builtin_marginals(name)
        for feat, kind in schema.features:
            assert feat in marginals
            if kind.is_numeric:
                assert {"mean", "std", "min", "max"} <= set(marginals[feat])
            else:
                assert set(marginals[feat]) == set(kind.levels)
                assert sum(marginals[feat].values()) == pytest.approx(1.0, abs=1e-9)


class TestParseCsv:
    def test_single_row(self):
        text = (
            "age,sex,screen,organism,Gentamicin,Cefoxitin\n"
            "40.0,M,Positive,Staph,R,S\n"
        )
        ds = parse_csv(text, tiny_schema())
        assert len(ds) == 1
        rec = ds.records[0]
        assert rec.values["age"] == 40.0
        assert rec.labels["Gentamicin"] is True
        assert rec.labels["Cefoxitin"] is False

    def test_unknown_level_rejected(self):
        text = "age,sex,screen,organism,Gentamicin,Cefoxitin\n40,X,Positive,Staph,R,S\n"
        with pytest.raises(UnknownLevel) as err:
            parse_csv(text, tiny_schema())
        assert err.value.column == "sex"
        assert err.value.row == 1

    def test_empty_label_cell_is_missing(self):
        text = "age,sex,screen,organism,Gentamicin,Cefoxitin\n40,M,Positive,Staph,,S\n"
        ds = parse_csv(text, tiny_schema())
        assert ds.records[0].labels["Gentamicin"] is None

    def test_empty_feature_cell_is_missing(self):
        text = "age,sex,screen,organism,Gentamicin,Cefoxitin\n,M,Positive,Staph,R,S\n"
        assert parse_csv(text, tiny_schema()).records[0].values["age"] is None

    def test_unknown_column(self):
        text = "age,sex,screen,organism,Gentamicin,Cefoxitin,extra\n"
        with pytest.raises(UnknownColumn):
            parse_csv(text, tiny_schema())

    def test_missing_column(self):
        text = "age,sex,screen,organism,Gentamicin\n"
        with pytest.raises(MissingColumn):
            parse_csv(text, tiny_schema())

    def test_bad_numeric(self):
        text = "age,sex,screen,organism,Gentamicin,Cefoxitin\nforty,M,Positive,Staph,R,S\n"
        with pytest.raises(BadNumeric):
            parse_csv(text, tiny_schema())

    def test_column_order_independent(self):
        text = "Cefoxitin,organism,age,screen,sex,Gentamicin\nS,Strep,61,Negative,F,R\n"
        rec = parse_csv(text, tiny_schema()).records[0]
        assert rec.values["organism"] == "Strep"
        assert rec.values["age"] == 61.0


@st.composite
def cohorts(draw):
    schema = tiny_schema()
    n = draw(st.integers(min_value=0, max_value=12))
    records = []
    for _ in range(n):
        age = draw(st.one_of(st.none(), st.floats(0, 120, allow_nan=False).map(lambda v: round(v, 3))))
        sex = draw(st.sampled_from([None, "M", "F"]))
        screen = draw(st.sampled_from([None, "Negative", "Not applicable", "Positive"]))
        organism = draw(st.sampled_from([None, "Staph", "Strep", "Entero"]))
        labels = {
            fam: draw(st.sampled_from([None, True, False])) for fam in schema.targets
        }
        records.append(
            PatientRecord(
                {"age": age, "sex": sex, "screen": screen, "organism": organism}, labels
            )
        )
    return Dataset(schema, tuple(records))


class TestRoundTrip:
    @settings(max_examples=60, deadline=None)
    @given(cohorts())
    def test_parse_inverts_emit(self, dataset):
        again = parse_csv(emit_csv(dataset), dataset.schema)
        assert again == dataset

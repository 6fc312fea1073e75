import numpy as np
import pytest

from amr.data.encoding import EncodedColumn, EncodedMatrix
from amr.errors import SingleClassInput, WidthMismatch
from amr.forest import (
    Forest,
    ForestParams,
    Leaf,
    Split,
    best_split,
    oob_importance,
    predict_forest,
    predict_forest_rows,
    train_forest,
    tree_votes,
)

from .oracles import gini_best_split_exact


def matrix_from(rows, feature_names=None):
    rows = np.asarray(rows, dtype=float)
    names = feature_names or [f"f{i}" for i in range(rows.shape[1])]
    cols = tuple(EncodedColumn(name, "binary") for name in names)
    return EncodedMatrix(rows, cols, {})


class TestBestSplit:
    def test_matches_exact_scan(self):
        rng = np.random.default_rng(2718)
        for trial in range(300):
            n = int(rng.integers(4, 50))
            p = int(rng.integers(1, 7))
            # mix of continuous and coarse columns to provoke ties
            X = np.round(rng.random((n, p)), 1)
            y = rng.integers(0, 2, size=n)
            if y.min() == y.max():
                continue
            got = best_split(X, y.astype(float), np.arange(n), range(p))
            candidates, _ = gini_best_split_exact(X, y)
            if not candidates:
                assert got is None
                continue
            assert got is not None
            col, thr, _ = got
            assert (col, thr) in candidates

    def test_column_tie_breaks_low(self):
        x = np.array([0.0, 0.0, 1.0, 1.0])
        X = np.column_stack([x, x])  # identical columns: exact float tie
        y = np.array([0.0, 0.0, 1.0, 1.0])
        col, thr, score = best_split(X, y, np.arange(4), [0, 1])
        assert (col, thr, score) == (0, 0.5, 0.0)

    def test_threshold_tie_breaks_low(self):
        X = np.array([[0.0], [1.0], [2.0]])
        y = np.array([0.0, 1.0, 0.0])
        col, thr, _ = best_split(X, y, np.arange(3), [0])
        assert (col, thr) == (0, 0.5)

    def test_no_valid_threshold(self):
        X = np.ones((5, 2))
        y = np.array([0.0, 1.0, 0.0, 1.0, 0.0])
        assert best_split(X, y, np.arange(5), [0, 1]) is None


class TestTrainForest:
    def test_perfect_single_column_gives_pure_split(self):
        X = matrix_from([[0], [0], [1], [1]])
        forest = train_forest(X, [0, 0, 1, 1], ForestParams(n_trees=1, mtry=1, seed=4))
        tree = forest.trees[0]
        assert isinstance(tree, Split)
        assert tree.column == 0 and tree.threshold == 0.5
        assert isinstance(tree.left, Leaf) and tree.left.positive_fraction == 0.0
        assert isinstance(tree.right, Leaf) and tree.right.positive_fraction == 1.0

    def test_single_class_rejected(self):
        X = matrix_from([[0], [1], [0]])
        with pytest.raises(SingleClassInput):
            train_forest(X, [1, 1, 1])

    def test_xor_pattern_learned_at_depth_two(self):
        # replicate the 4 XOR corners so every bootstrap bag sees all of them
        corners = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float)
        labels = np.array([0, 1, 1, 0])
        X = matrix_from(np.tile(corners, (15, 1)))
        y = np.tile(labels, 15)
        forest = train_forest(X, y, ForestParams(n_trees=25, mtry=2, seed=8))
        preds = predict_forest_rows(forest, X.rows) >= 0.5
        assert (preds == y.astype(bool)).all()

    def test_in_bag_accuracy_is_perfect_on_distinct_rows(self):
        rng = np.random.default_rng(99)
        X = matrix_from(rng.random((40, 3)))
        y = rng.integers(0, 2, size=40)
        y[0], y[1] = 0, 1
        forest = train_forest(X, y, ForestParams(n_trees=10, mtry=3, seed=3))
        for tree, bag in zip(forest.trees, forest.bag_indices):
            rows = X.rows[list(bag)]
            votes = tree_votes(tree, rows)
            assert (votes == y[list(bag)]).all()

    def test_bag_oob_partition(self):
        X = matrix_from(np.random.default_rng(1).random((30, 2)))
        y = np.random.default_rng(2).integers(0, 2, size=30)
        y[:2] = [0, 1]
        forest = train_forest(X, y, ForestParams(n_trees=5, seed=11))
        for bag, oob in zip(forest.bag_indices, forest.oob_indices):
            assert len(bag) == 30  # drawn with replacement, one per training row
            assert set(bag) | set(oob) == set(range(30))
            assert not set(bag) & set(oob)

    def test_deterministic_retraining(self):
        X = matrix_from(np.random.default_rng(5).random((25, 3)))
        y = np.random.default_rng(6).integers(0, 2, size=25)
        y[:2] = [0, 1]
        params = ForestParams(n_trees=8, seed=21)
        assert train_forest(X, y, params) == train_forest(X, y, params)


class TestPredictForest:
    def _voting_forest(self, fractions):
        cols = (EncodedColumn("f0", "binary"),)
        trees = tuple(Leaf(f, 5) for f in fractions)
        return Forest(trees, ((0,),) * len(trees), ((1,),) * len(trees),
                      ForestParams(n_trees=len(trees)), cols)

    def test_majority_fraction(self):
        forest = self._voting_forest([0.9, 0.8, 0.2])
        assert predict_forest(forest, [0.0]) == pytest.approx(2 / 3)

    def test_all_negative(self):
        forest = self._voting_forest([0.1, 0.0, 0.4])
        assert predict_forest(forest, [0.0]) == 0.0

    def test_width_mismatch(self):
        forest = self._voting_forest([0.9])
        with pytest.raises(WidthMismatch):
            predict_forest(forest, [0.0, 1.0])

    def test_invariant_to_tree_order(self):
        rng = np.random.default_rng(14)
        X = matrix_from(rng.random((30, 2)))
        y = rng.integers(0, 2, size=30)
        y[:2] = [0, 1]
        forest = train_forest(X, y, ForestParams(n_trees=9, seed=2))
        reversed_forest = Forest(
            forest.trees[::-1], forest.bag_indices[::-1], forest.oob_indices[::-1],
            forest.params, forest.columns,
        )
        row = rng.random(2)
        assert predict_forest(forest, row) == predict_forest(reversed_forest, row)


class TestOobImportance:
    def _planted_matrix(self, n=120, seed=0):
        rng = np.random.default_rng(seed)
        signal = rng.integers(0, 2, size=n).astype(float)
        noise = rng.random(n)
        constant = np.zeros(n)
        rows = np.column_stack([signal, noise, constant])
        X = matrix_from(rows, ["signal", "noise", "constant"])
        y = signal.astype(int)
        return X, y

    def test_unused_constant_feature_scores_exactly_zero(self):
        X, y = self._planted_matrix()
        forest = train_forest(X, y, ForestParams(n_trees=20, mtry=3, seed=5))
        ranking = oob_importance(forest, X, y, seed=1)
        by_name = {fi.feature: fi for fi in ranking}
        assert by_name["constant"].importance == 0.0
        assert by_name["constant"].normalized == 0.0

    def test_planted_feature_ranks_first(self):
        for seed in range(3):
            X, y = self._planted_matrix(seed=seed)
            forest = train_forest(X, y, ForestParams(n_trees=30, mtry=2, seed=seed))
            ranking = oob_importance(forest, X, y, seed=seed)
            assert ranking[0].feature == "signal"
            assert ranking[0].normalized == 1.0

    def test_importance_bounded(self):
        X, y = self._planted_matrix(seed=3)
        forest = train_forest(X, y, ForestParams(n_trees=10, seed=1))
        for fi in oob_importance(forest, X, y, seed=2):
            assert -1.0 <= fi.importance <= 1.0

    def test_importance_leaves_inputs_untouched(self):
        X, y = self._planted_matrix(seed=4)
        forest = train_forest(X, y, ForestParams(n_trees=10, seed=1))
        before = X.rows.copy()
        oob_accs = [
            float((tree_votes(t, X.rows[list(o)]) == y[list(o)]).mean())
            for t, o in zip(forest.trees, forest.oob_indices) if o
        ]
        oob_importance(forest, X, y, seed=2)
        np.testing.assert_array_equal(X.rows, before)
        after = [
            float((tree_votes(t, X.rows[list(o)]) == y[list(o)]).mean())
            for t, o in zip(forest.trees, forest.oob_indices) if o
        ]
        assert oob_accs == after

    def test_grouped_one_hot_permutation(self):
        # two one-hot columns of one source feature must move together
        rng = np.random.default_rng(8)
        member = rng.integers(0, 2, size=100)
        rows = np.column_stack([member, 1 - member, rng.random(100)])
        cols = (
            EncodedColumn("organism", "one-hot", "A"),
            EncodedColumn("organism", "one-hot", "B"),
            EncodedColumn("age", "scaled-numeric"),
        )
        X = EncodedMatrix(rows.astype(float), cols, {"age": (0.0, 1.0)})
        y = member
        forest = train_forest(X, y, ForestParams(n_trees=15, mtry=3, seed=9))
        ranking = oob_importance(forest, X, y, seed=3)
        assert ranking[0].feature == "organism"
        names = [fi.feature for fi in ranking]
        assert names.count("organism") == 1  # reported per source feature

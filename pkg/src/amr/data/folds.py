"""Cross-validation fold plans and minority-class bootstrap balancing.

Two plan modes are supported: classic k-fold (shuffled indices cut into k
near-equal test blocks) and Monte-Carlo splitting (repeated independent
shuffles, each cut once at a train fraction, 0.8 by default). Monte-Carlo
with 10 iterations at 0.8/0.2 is the package default.

Balancing happens inside each training fold only, after the split, so
oversampled duplicates can never reach a test set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .._rng import derive_seed
from ..errors import LengthMismatch, SingleClassFold, TooFewRecords


@dataclass(frozen=True)
class KFold:
    k: int = 10

    def describe(self) -> str:
        return f"kfold:{self.k}"


@dataclass(frozen=True)
class MonteCarlo:
    iterations: int = 10
    train_fraction: float = 0.8

    def describe(self) -> str:
        return f"mc:{self.iterations}:{self.train_fraction}"


FoldMode = KFold | MonteCarlo

DEFAULT_MODE = MonteCarlo(10, 0.8)


@dataclass(frozen=True)
class FoldPlan:
    mode: FoldMode
    folds: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    seed: int

    def describe(self) -> str:
        return self.mode.describe()


def parse_fold_mode(text: str) -> FoldMode:
    """Parse ``kfold:K`` or ``mc:ITERATIONS:TRAIN_FRACTION``."""
    parts = text.split(":")
    if parts[0] == "kfold" and len(parts) == 2:
        return KFold(int(parts[1]))
    if parts[0] == "mc" and len(parts) == 3:
        return MonteCarlo(int(parts[1]), float(parts[2]))
    raise ValueError(f"bad fold mode {text!r}; expected kfold:K or mc:N:FRACTION")


def plan_folds(n: int, mode: FoldMode = DEFAULT_MODE, seed: int = 0) -> FoldPlan:
    """Deterministic fold plan over record indices 0..n-1."""
    folds: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    if isinstance(mode, KFold):
        if n < mode.k:
            raise TooFewRecords(f"{n} records cannot form {mode.k} folds")
        order = np.random.default_rng(derive_seed(seed, "kfold")).permutation(n)
        blocks = np.array_split(order, mode.k)
        for i, block in enumerate(blocks):
            test = np.sort(block)
            train = np.sort(np.concatenate([b for j, b in enumerate(blocks) if j != i]))
            folds.append((tuple(int(x) for x in train), tuple(int(x) for x in test)))
    else:
        if not 0.0 < mode.train_fraction < 1.0:
            raise TooFewRecords(f"train fraction {mode.train_fraction} not in (0, 1)")
        n_train = math.floor(n * mode.train_fraction)
        if n_train < 1 or n - n_train < 1:
            raise TooFewRecords(f"{n} records leave an empty side at fraction {mode.train_fraction}")
        for i in range(mode.iterations):
            order = np.random.default_rng(derive_seed(seed, "mc", i)).permutation(n)
            train = np.sort(order[:n_train])
            test = np.sort(order[n_train:])
            folds.append((tuple(int(x) for x in train), tuple(int(x) for x in test)))
    return FoldPlan(mode, tuple(folds), seed)


def bootstrap_balance(
    train_indices: Sequence[int], labels: Sequence[int], seed: int = 0
) -> list[int]:
    """Oversample the minority class to parity by drawing with replacement.

    ``labels`` aligns with ``train_indices`` (one binary label per index).
    The result keeps every original index once and appends minority-class
    indices until both classes have the majority count; it never contains
    an index outside ``train_indices``.
    """
    idx = list(train_indices)
    lab = [int(x) for x in labels]
    if len(idx) != len(lab):
        raise LengthMismatch(f"{len(idx)} indices vs {len(lab)} labels")
    pos = [i for i, y in zip(idx, lab) if y == 1]
    neg = [i for i, y in zip(idx, lab) if y == 0]
    if not pos or not neg:
        raise SingleClassFold("training fold contains a single label class")
    minority, majority = (pos, neg) if len(pos) < len(neg) else (neg, pos)
    extra = len(majority) - len(minority)
    if extra == 0:
        return idx
    rng = np.random.default_rng(derive_seed(seed, "balance"))
    draws = rng.integers(0, len(minority), size=extra)
    return idx + [minority[int(d)] for d in draws]

"""Labeled score datasets, class priors and class-conditional empirical CDFs."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DomainError,
    EmptyDataset,
    InvalidLabel,
    InvalidScore,
    MissingClass,
)

PRIOR_TOL = 1e-12


class Label(enum.IntEnum):
    NEGATIVE = 0
    POSITIVE = 1


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _as_label(value, index: int) -> int:
    if isinstance(value, (bool, np.bool_)):
        return int(value)
    if isinstance(value, str):
        key = value.strip().lower()
        table = {"0": 0, "1": 1, "neg": 0, "pos": 1, "negative": 0, "positive": 1}
        if key in table:
            return table[key]
        raise InvalidLabel(index, value)
    try:
        as_float = float(value)
    except (TypeError, ValueError):
        raise InvalidLabel(index, value) from None
    if as_float == 0.0:
        return 0
    if as_float == 1.0:
        return 1
    raise InvalidLabel(index, value)


@dataclass(frozen=True)
class LabeledScores:
    """Scores paired with binary labels (1 = positive), in input order."""

    scores: np.ndarray
    labels: np.ndarray

    @classmethod
    def from_arrays(cls, scores, labels) -> "LabeledScores":
        s = np.array(scores, dtype=float).reshape(-1)
        raw = list(np.asarray(labels, dtype=object).reshape(-1))
        if s.size != len(raw):
            raise ValueError("scores and labels differ in length")
        if s.size == 0:
            raise EmptyDataset("no samples")
        bad = np.flatnonzero(~np.isfinite(s))
        if bad.size:
            raise InvalidScore(int(bad[0]), float(s[bad[0]]))
        lab = np.array([_as_label(v, i) for i, v in enumerate(raw)], dtype=np.int8)
        return cls(_frozen(s), _frozen(lab))

    @property
    def T(self) -> int:
        return int(self.scores.size)

    @property
    def P(self) -> int:
        return int(np.count_nonzero(self.labels == 1))

    @property
    def N(self) -> int:
        return self.T - self.P

    def class_scores(self, label: Label | int) -> np.ndarray:
        return self.scores[self.labels == int(label)]

    @property
    def positives(self) -> np.ndarray:
        return self.class_scores(Label.POSITIVE)

    @property
    def negatives(self) -> np.ndarray:
        return self.class_scores(Label.NEGATIVE)

    def __len__(self) -> int:
        return self.T


def ingest(entries: Iterable[Sequence]) -> LabeledScores:
    """Build a dataset from ``(score, label)`` pairs.

    Raises EmptyDataset for no entries and InvalidScore (with the offending
    index) for NaN or infinite scores.
    """
    rows = list(entries)
    if not rows:
        raise EmptyDataset("no samples")
    scores = []
    labels = []
    for i, row in enumerate(rows):
        score, label = row
        try:
            x = float(score)
        except (TypeError, ValueError):
            raise InvalidScore(i, score) from None
        if not math.isfinite(x):
            raise InvalidScore(i, x)
        scores.append(x)
        labels.append(_as_label(label, i))
    return LabeledScores(
        _frozen(np.array(scores, dtype=float)), _frozen(np.array(labels, dtype=np.int8))
    )


@dataclass(frozen=True)
class ClassPriors:
    pi_p: float
    pi_n: float

    def __post_init__(self):
        if not (0.0 <= self.pi_p <= 1.0 and 0.0 <= self.pi_n <= 1.0):
            raise DomainError(f"priors must lie in [0, 1], got {self.pi_p}, {self.pi_n}")
        if abs(self.pi_p + self.pi_n - 1.0) > PRIOR_TOL:
            raise DomainError(f"priors must sum to 1, got {self.pi_p + self.pi_n!r}")

    @classmethod
    def from_positive(cls, pi_p: float) -> "ClassPriors":
        return cls(float(pi_p), 1.0 - float(pi_p))

    @property
    def odds_n_to_p(self) -> float:
        return self.pi_n / self.pi_p


def estimate_priors(data: LabeledScores) -> ClassPriors:
    """Plug-in priors ``P/T`` and ``N/T``."""
    return ClassPriors(data.P / data.T, data.N / data.T)


@dataclass(frozen=True)
class EmpiricalCdf:
    """Right-continuous step CDF ``F(x) = #{samples <= x} / n``.

    ``quantile`` is the generalized inverse ``inf{x : F(x) >= u}``, defined
    for ``u`` in ``(0, 1]``.
    """

    sorted_scores: np.ndarray

    @classmethod
    def from_samples(cls, samples) -> "EmpiricalCdf":
        x = np.sort(np.asarray(samples, dtype=float).reshape(-1))
        if x.size == 0:
            raise MissingClass("cannot build a CDF from zero samples")
        return cls(_frozen(x))

    @property
    def n(self) -> int:
        return int(self.sorted_scores.size)

    def count_le(self, x):
        return np.searchsorted(self.sorted_scores, x, side="right")

    def count_lt(self, x):
        return np.searchsorted(self.sorted_scores, x, side="left")

    def __call__(self, x):
        return self.count_le(x) / self.n

    def left_limit(self, x):
        """``F(x-)``, the fraction of samples strictly below ``x``."""
        return self.count_lt(x) / self.n

    def quantile_index(self, u):
        """0-based order-statistic index ``ceil(u n) - 1`` with exact rounding."""
        u = np.asarray(u, dtype=float)
        if np.any(~(u > 0.0)) or np.any(u > 1.0):
            raise DomainError("quantile level must lie in (0, 1]")
        n = self.n
        k = np.ceil(u * n).astype(np.int64)
        # u*n may land a hair above an integer k even when u == k/n
        k = np.where((k > 1) & ((k - 1) / n >= u), k - 1, k)
        k = np.where(k / n < u, k + 1, k)
        return np.clip(k, 1, n) - 1

    def quantile(self, u):
        idx = self.quantile_index(u)
        out = self.sorted_scores[idx]
        return float(out) if np.ndim(out) == 0 else out


def conditional_cdf(data: LabeledScores, label: Label | int) -> EmpiricalCdf:
    samples = data.class_scores(label)
    if samples.size == 0:
        raise MissingClass(f"no samples of class {Label(int(label)).name.lower()}")
    return EmpiricalCdf.from_samples(samples)

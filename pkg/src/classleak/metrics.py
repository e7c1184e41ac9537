"""Threshold metrics: confusion counts, rates, accuracy, precision, F-beta,
and calibration checks for probability-valued scores."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import List, Optional

import numpy as np

from .errors import DegeneratePriors, MissingClass, NotAProbability, UndefinedPrecision
from .score_model import ClassPriors, LabeledScores, estimate_priors


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int
    tau: float

    @property
    def P(self) -> int:
        return self.tp + self.fn

    @property
    def N(self) -> int:
        return self.tn + self.fp

    @property
    def T(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class RateSet:
    tpr: float
    fpr: float
    tnr: float
    fnr: float

    @property
    def recall(self) -> float:
        return self.tpr

    @property
    def specificity(self) -> float:
        return self.tnr

    @property
    def miss_rate(self) -> float:
        return self.fnr


def confusion_at(data: LabeledScores, tau: float) -> ConfusionCounts:
    # predicted positive iff score >= tau
    predicted = data.scores >= tau
    actual = data.labels == 1
    tp = int(np.count_nonzero(predicted & actual))
    fp = int(np.count_nonzero(predicted & ~actual))
    return ConfusionCounts(tp, fp, data.N - fp, data.P - tp, float(tau))


def confusion_sweep(data: LabeledScores) -> List[ConfusionCounts]:
    """Counts at every distinct score and at +inf, from high tau to low."""
    taus = np.concatenate([[np.inf], np.unique(data.scores)[::-1]])
    return [confusion_at(data, t) for t in taus]


def rates_from_counts(c: ConfusionCounts, P: Optional[int] = None, N: Optional[int] = None) -> RateSet:
    P = c.P if P is None else P
    N = c.N if N is None else N
    if P < 1 or N < 1:
        raise MissingClass("rates need at least one sample of each class")
    tpr = c.tp / P
    tnr = c.tn / N
    # complements taken by subtraction so the pairs sum to 1 exactly
    return RateSet(tpr=tpr, fpr=1.0 - tnr, tnr=tnr, fnr=1.0 - tpr)


def accuracy(rates: RateSet, priors: ClassPriors) -> float:
    return priors.pi_p * rates.tpr + priors.pi_n * rates.tnr


def precision_at(rates: RateSet, priors: ClassPriors) -> float:
    num = priors.pi_p * rates.tpr
    den = num + priors.pi_n * rates.fpr
    if den <= 0.0:
        raise UndefinedPrecision("no predicted positives: precision is 0/0")
    return num / den


def f_beta(rates: RateSet, priors: ClassPriors, beta: float = 1.0) -> float:
    """F-beta written in rates and priors only; 0 when tpr is 0.

    Substituting precision = tpr / (tpr + (pi_n/pi_p) fpr) into the harmonic
    mean gives (1 + beta^2) tpr / (beta^2 + tpr + (pi_n/pi_p) fpr).
    """
    if not beta > 0:
        raise ValueError("beta must be positive")
    if not priors.pi_p > 0:
        raise DegeneratePriors("F-beta needs pi_p > 0")
    tpr, fpr = rates.tpr, rates.fpr
    if tpr <= 0.0:
        return 0.0
    b2 = beta * beta
    return (1.0 + b2) * tpr / (b2 + tpr + priors.odds_n_to_p * fpr)


def f_beta_harmonic(rates: RateSet, priors: ClassPriors, beta: float = 1.0) -> float:
    """Weighted harmonic mean of precision and recall."""
    if rates.tpr <= 0.0:
        return 0.0
    p = precision_at(rates, priors)
    r = rates.tpr
    b2 = beta * beta
    return (1.0 + b2) * p * r / (b2 * p + r)


def _probabilities(data: LabeledScores) -> np.ndarray:
    s = data.scores
    bad = np.flatnonzero((s < 0.0) | (s > 1.0))
    if bad.size:
        raise NotAProbability(int(bad[0]), float(s[bad[0]]))
    return s


def brier_score(data: LabeledScores) -> float:
    s = _probabilities(data)
    return float(np.mean((s - data.labels) ** 2))


@dataclass(frozen=True)
class ReliabilityBin:
    center: float
    lower: float
    upper: float
    mean_score: float
    positive_fraction: float
    count: int

    @property
    def empty(self) -> bool:
        return self.count == 0


def reliability_bins(data: LabeledScores, n_bins: int = 10) -> List[ReliabilityBin]:
    """Equal-width bins on [0, 1]; right-closed, first bin also closed on the left.

    Empty bins carry NaN for the mean score and the positive fraction.
    """
    if n_bins < 1:
        raise ValueError("n_bins must be at least 1")
    s = _probabilities(data)
    edges = np.linspace(0.0, 1.0, n_bins + 1)
    idx = np.clip(np.searchsorted(edges, s, side="left") - 1, 0, n_bins - 1)
    out = []
    for k in range(n_bins):
        mask = idx == k
        count = int(np.count_nonzero(mask))
        if count:
            mean_score = float(s[mask].mean())
            frac = float(data.labels[mask].mean())
        else:
            mean_score = frac = math.nan
        out.append(
            ReliabilityBin(
                center=0.5 * (edges[k] + edges[k + 1]),
                lower=float(edges[k]),
                upper=float(edges[k + 1]),
                mean_score=mean_score,
                positive_fraction=frac,
                count=count,
            )
        )
    return out


REPORT_FIELDS = (
    "tau", "tp", "fp", "tn", "fn", "tpr", "fpr", "tnr", "fnr",
    "accuracy", "precision", "f_beta", "brier",
)


def metrics_report(
    data: LabeledScores,
    tau: float,
    priors: Optional[ClassPriors] = None,
    beta: float = 1.0,
) -> dict:
    """All threshold metrics at ``tau`` as a flat dict (None where undefined)."""
    priors = estimate_priors(data) if priors is None else priors
    c = confusion_at(data, tau)
    r = rates_from_counts(c, data.P, data.N)
    try:
        precision = precision_at(r, priors)
    except UndefinedPrecision:
        precision = None
    try:
        fb = f_beta(r, priors, beta)
    except DegeneratePriors:
        fb = None
    try:
        brier = brier_score(data)
    except NotAProbability:
        brier = None
    report = {
        "tau": float(tau),
        "tp": c.tp, "fp": c.fp, "tn": c.tn, "fn": c.fn,
        "tpr": r.tpr, "fpr": r.fpr, "tnr": r.tnr, "fnr": r.fnr,
        "accuracy": accuracy(r, priors),
        "precision": precision,
        "f_beta": fb,
        "brier": brier,
    }
    return report


def _fmt(v) -> str:
    if v is None:
        return "undefined"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def format_key_value(report: dict) -> str:
    return "".join(f"{k}={_fmt(v)}\n" for k, v in report.items())


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.generic):
        return _jsonable(v.item())
    return v


def format_structured(report) -> str:
    return json.dumps(_jsonable(report), indent=2, sort_keys=False) + "\n"


def bins_report(bins: List[ReliabilityBin]) -> list:
    return [asdict(b) for b in bins]

"""ROC and PR curves derived from a leakage curve.

The ROC is ``tpr = 1 - G(1 - fpr)`` and never looks at class priors. The PR
curve needs priors: ``ppv = tpr / (tpr + (pi_n/pi_p) * fpr)`` with the fpr
recovered from the ROC inverse.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DegeneratePriors, DomainError
from .leakage import DEFAULT_GRID, BinormalLeakage, EmpiricalLeakage, LeakageCurve
from .score_model import ClassPriors


@dataclass(frozen=True)
class CurveTable:
    kind: str
    x: np.ndarray
    y: np.ndarray
    tau: np.ndarray
    source: str = ""
    grid_size: int = 0
    pi_p: Optional[float] = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in ("ROC", "PR"):
            raise ValueError(f"unknown curve kind {self.kind!r}")
        if self.kind == "PR" and self.pi_p is None:
            raise ValueError("PR tables must record the priors used")
        for a in (self.x, self.y, self.tau):
            a.setflags(write=False)

    def __len__(self) -> int:
        return int(self.x.size)

    @property
    def points(self):
        return list(zip(self.x.tolist(), self.y.tolist(), self.tau.tolist()))

    def area(self) -> float:
        """Trapezoid area under the tabulated polyline."""
        return float(np.trapezoid(self.y, self.x))

    def header(self) -> str:
        pi = "" if self.pi_p is None else repr(float(self.pi_p))
        return f"# kind={self.kind} grid={self.grid_size} pi_p={pi}"

    def to_text(self) -> str:
        buf = io.StringIO()
        buf.write(self.header() + "\n")
        buf.write("x,y,tau\n")
        for x, y, t in zip(self.x.tolist(), self.y.tolist(), self.tau.tolist()):
            buf.write(f"{x!r},{y!r},{t!r}\n")
        return buf.getvalue()

    @classmethod
    def from_text(cls, text: str) -> "CurveTable":
        meta = {}
        rows = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for token in line[1:].split():
                    key, _, value = token.partition("=")
                    meta[key] = value
                continue
            if line == "x,y,tau":
                continue
            rows.append([float(v) for v in line.split(",")])
        arr = np.array(rows, dtype=float).reshape(-1, 3)
        pi = meta.get("pi_p") or None
        return cls(
            kind=meta.get("kind", "ROC"),
            x=arr[:, 0].copy(),
            y=arr[:, 1].copy(),
            tau=arr[:, 2].copy(),
            grid_size=int(meta.get("grid", 0)),
            pi_p=None if pi is None else float(pi),
        )


def _polyline_upper(cx, cy, x):
    """Evaluate a polyline with nondecreasing ``cx`` at ``x``.

    At vertical segments the largest y is returned. Returns the values and the
    index of the vertex at or left of each ``x``.
    """
    idx = np.searchsorted(cx, x, side="right") - 1
    idx = np.clip(idx, 0, cx.size - 1)
    nxt = np.minimum(idx + 1, cx.size - 1)
    dx = cx[nxt] - cx[idx]
    with np.errstate(invalid="ignore", divide="ignore"):
        w = np.where(dx > 0, (x - cx[idx]) / dx, 0.0)
    return cy[idx] + w * (cy[nxt] - cy[idx]), idx


def roc_curve(curve: LeakageCurve, grid_size: int = DEFAULT_GRID) -> CurveTable:
    """ROC table on a uniform fpr grid (endpoints included).

    Step curves also carry every exact vertex of the staircase, so the table
    area is the exact empirical AUROC whatever the grid size. With tied
    scores across classes the staircase runs diagonally through the tie,
    which is the half-credit convention of the rank statistic.
    """
    if grid_size < 2:
        raise DomainError("grid_size must be at least 2")
    grid = np.linspace(0.0, 1.0, grid_size)
    if isinstance(curve, EmpiricalLeakage):
        cx, cy, ctau = curve.corners()
        gy, idx = _polyline_upper(cx, cy, grid)
        x = np.concatenate([cx, grid])
        y = np.concatenate([cy, gy])
        tau = np.concatenate([ctau, ctau[idx]])
        order = np.lexsort((y, x))
        x, y, tau = x[order], y[order], tau[order]
    else:
        x = grid
        y = np.asarray(curve.roc_tpr(grid), dtype=float)
        tau = np.asarray(curve.tau_for_fpr(grid), dtype=float)
        # a jump of G at u = 1 is a vertical ROC segment at fpr = 0
        top = 1.0 - float(curve(np.nextafter(1.0, 0.0)))
        if not isinstance(curve, BinormalLeakage) and top > y[0]:
            x = np.insert(x, 1, 0.0)
            y = np.insert(y, 1, top)
            tau = np.insert(tau, 1, tau[0])
    return CurveTable("ROC", x, np.clip(y, 0.0, 1.0), tau, curve.source, grid_size)


def roc_inverse(curve: LeakageCurve, tpr):
    """Smallest fpr at which the ROC reaches ``tpr``: ``1 - G^-1(1 - tpr)``."""
    tpr = np.asarray(tpr, dtype=float)
    if np.any(~((tpr >= 0.0) & (tpr <= 1.0))):
        raise DomainError("tpr must lie in [0, 1]")
    out = np.asarray(curve.roc_fpr(tpr), dtype=float)
    return float(out) if out.ndim == 0 else out


def miss_rate_from_specificity(curve: LeakageCurve, specificity):
    return curve(specificity)


def _check_priors(priors: ClassPriors):
    if not priors.pi_p > 0.0:
        raise DegeneratePriors("precision needs pi_p > 0")


def precision_from_rates(tpr, fpr, priors: ClassPriors):
    _check_priors(priors)
    tpr = np.asarray(tpr, dtype=float)
    fpr = np.asarray(fpr, dtype=float)
    return tpr / (tpr + priors.odds_n_to_p * fpr)


def false_discovery_rate(curve: LeakageCurve, priors: ClassPriors, recall):
    """``1 - precision`` at each recall, kept accurate where precision rounds to 1."""
    _check_priors(priors)
    recall = np.asarray(recall, dtype=float)
    fpr = np.asarray(roc_inverse(curve, recall), dtype=float)
    fp = priors.pi_n * fpr
    return fp / (priors.pi_p * recall + fp)


def pr_curve(
    curve: LeakageCurve, priors: ClassPriors, grid_size: int = DEFAULT_GRID
) -> CurveTable:
    """PR table on the recall grid ``k / grid_size``, k = 1..grid_size.

    Recall 0 is left out: precision is 0/0 there.
    """
    _check_priors(priors)
    if grid_size < 1:
        raise DomainError("grid_size must be at least 1")
    recall = np.arange(1, grid_size + 1) / grid_size
    fpr = roc_inverse(curve, recall)
    precision = precision_from_rates(recall, fpr, priors)
    if isinstance(curve, EmpiricalLeakage):
        pos_desc = curve.f_p.sorted_scores[::-1]
        k = np.ceil(recall * curve.n_pos - 1e-9).astype(np.int64)
        tau = pos_desc[np.clip(k, 1, curve.n_pos) - 1]
    else:
        tau = np.asarray(curve.tau_for_fpr(fpr), dtype=float)
    return CurveTable(
        "PR",
        recall,
        np.clip(precision, 0.0, 1.0),
        tau,
        curve.source,
        grid_size,
        pi_p=float(priors.pi_p),
    )

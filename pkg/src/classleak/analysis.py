"""Classifier dominance and constrained operating-point selection."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from .curves import roc_curve
from .errors import DomainError, EmptyCandidateSet, InfeasibleCap, NumericalFailure
from .leakage import DEFAULT_GRID, BinormalLeakage, EmpiricalLeakage, LeakageCurve
from .score_model import ClassPriors

VERDICTS = ("global_strict", "global_non_strict", "local", "none", "incomparable")
RISK_TIE_TOL = 1e-12


@dataclass(frozen=True)
class DominanceReport:
    """Pointwise comparison of two leakage curves from the first one's side.

    ``margins`` are ``G2(u) - G1(u)``; positive means curve 1 leaks less.
    """

    verdict: str
    grid: np.ndarray
    margins: np.ndarray
    dominant_intervals: Tuple[Tuple[float, float], ...]
    epsilon: float

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "epsilon": self.epsilon,
            "grid_points": int(self.grid.size),
            "min_margin": float(self.margins.min()),
            "max_margin": float(self.margins.max()),
            "dominant_intervals": [list(iv) for iv in self.dominant_intervals],
        }


def _runs(mask: np.ndarray, grid: np.ndarray):
    out = []
    if not mask.any():
        return tuple(out)
    edges = np.diff(np.concatenate([[0], mask.astype(np.int8), [0]]))
    starts = np.flatnonzero(edges == 1)
    stops = np.flatnonzero(edges == -1) - 1
    for a, b in zip(starts, stops):
        out.append((float(grid[a]), float(grid[b])))
    return tuple(out)


def compare_dominance(
    g1: LeakageCurve,
    g2: LeakageCurve,
    grid_size: int = 1001,
    epsilon: Optional[float] = None,
) -> DominanceReport:
    """Compare G1 and G2 on the interior of a uniform grid.

    Verdicts: ``global_strict`` (G1 < G2 - eps everywhere),
    ``global_non_strict`` (G1 <= G2 + eps everywhere), ``none`` (G1 > G2 + eps
    everywhere), ``incomparable`` (each curve wins somewhere), and ``local``
    for the remaining case where G2 wins on part of the domain and the curves
    tie elsewhere.
    """
    if grid_size < 3:
        raise DomainError("grid_size must be at least 3")
    if epsilon is None:
        both_steps = isinstance(g1, EmpiricalLeakage) and isinstance(g2, EmpiricalLeakage)
        epsilon = 0.0 if both_steps else 1e-9
    if epsilon < 0:
        raise DomainError("epsilon must be nonnegative")
    grid = np.linspace(0.0, 1.0, grid_size)[1:-1]
    margins = np.asarray(g2(grid), dtype=float) - np.asarray(g1(grid), dtype=float)
    ahead = margins > epsilon
    behind = margins < -epsilon
    if ahead.all():
        verdict = "global_strict"
    elif behind.all():
        verdict = "none"
    elif not behind.any():
        verdict = "global_non_strict"
    elif ahead.any():
        verdict = "incomparable"
    else:
        verdict = "local"
    margins.setflags(write=False)
    grid.setflags(write=False)
    return DominanceReport(verdict, grid, margins, _runs(ahead, grid), float(epsilon))


@dataclass(frozen=True)
class OperatingConstraint:
    kind: str
    priors: ClassPriors
    m: Optional[float] = None
    cost_fp: float = 1.0
    cost_fn: float = 1.0
    c: Optional[float] = None

    def __post_init__(self):
        if self.kind == "capped_admission":
            if self.m is None or not 0.0 <= self.m <= 1.0:
                raise DomainError("admission cap m must lie in [0, 1]")
        elif self.kind == "bounded_risk":
            if self.c is None or self.c < 0:
                raise DomainError("risk budget c must be nonnegative")
            if self.cost_fp < 0 or self.cost_fn < 0:
                raise DomainError("cost factors must be nonnegative")
            if not (self.cost_fp > 0 or self.cost_fn > 0):
                raise DomainError("at least one cost factor must be positive")
        else:
            raise DomainError(f"unknown constraint kind {self.kind!r}")

    @classmethod
    def capped_admission(cls, m: float, priors: ClassPriors) -> "OperatingConstraint":
        return cls("capped_admission", priors, m=m)

    @classmethod
    def bounded_risk(
        cls, cost_fp: float, cost_fn: float, c: float, priors: ClassPriors
    ) -> "OperatingConstraint":
        return cls("bounded_risk", priors, cost_fp=cost_fp, cost_fn=cost_fn, c=c)

    def risk(self, fpr, tpr):
        pi = self.priors
        return self.cost_fp * pi.pi_n * np.asarray(fpr) + self.cost_fn * pi.pi_p * (
            1.0 - np.asarray(tpr)
        )

    def boundary_line(self) -> dict:
        """Line bounding the feasible region in the (fpr, tpr) plane.

        Capped admission: tpr = (m - pi_n fpr) / pi_p, feasible below.
        Bounded risk: tpr = 1 - c/(b pi_p) + (a pi_n / (b pi_p)) fpr, feasible
        above.
        """
        pi = self.priors
        if self.kind == "capped_admission":
            return {
                "slope": -pi.pi_n / pi.pi_p,
                "tpr_intercept": self.m / pi.pi_p,
                "fpr_intercept": self.m / pi.pi_n if pi.pi_n > 0 else math.inf,
                "feasible": "below",
            }
        denom = self.cost_fn * pi.pi_p
        if denom == 0:
            return {"slope": math.inf, "fpr_intercept": self.c / (self.cost_fp * pi.pi_n),
                    "feasible": "left"}
        return {
            "slope": self.cost_fp * pi.pi_n / denom,
            "tpr_intercept": 1.0 - self.c / denom,
            "feasible": "above",
        }


@dataclass(frozen=True)
class OperatingPoint:
    tau: float
    fpr: float
    tpr: float
    admission: float

    def as_dict(self) -> dict:
        return dict(tau=self.tau, fpr=self.fpr, tpr=self.tpr, admission=self.admission)


def _bisect(f, lo, hi, target, increasing, xtol, max_iter):
    """Boundary ``inf{x : f(x) >= target}`` (or ``<=`` when decreasing)."""
    for _ in range(max_iter):
        if hi - lo <= xtol * max(1.0, abs(lo), abs(hi)):
            return lo, hi
        mid = 0.5 * (lo + hi)
        above = f(mid) >= target
        if above == increasing:
            hi = mid
        else:
            lo = mid
    if hi - lo <= xtol * max(1.0, abs(lo), abs(hi)):
        return lo, hi
    raise NumericalFailure(f"bisection did not converge in {max_iter} iterations")


def capped_admission_point(
    curve: LeakageCurve,
    priors: ClassPriors,
    m: float,
    xtol: float = 1e-14,
    max_iter: int = 200,
) -> OperatingPoint:
    """ROC point where the admission rate pi_p tpr + pi_n fpr reaches ``m``.

    Continuous curves are solved by bisection along the curve parameter.
    Step curves get a soft cap: the vertex with the largest admission not
    exceeding ``m``.
    """
    if not m > 0.0:
        raise InfeasibleCap(f"admission cap must be positive, got {m}")
    if m > 1.0:
        raise DomainError(f"admission cap must not exceed 1, got {m}")
    pp, pn = priors.pi_p, priors.pi_n

    if isinstance(curve, EmpiricalLeakage):
        fpr, tpr, tau = curve.corners()
        adm = pp * tpr + pn * fpr
        ok = np.flatnonzero(adm <= m + 1e-15)
        best = ok[np.argmax(adm[ok])]
        return OperatingPoint(float(tau[best]), float(fpr[best]), float(tpr[best]), float(adm[best]))

    if isinstance(curve, BinormalLeakage):
        a, b = curve.model.alpha, curve.model.b

        def admission_t(t):
            return pp * special.ndtr(b - a * t) + pn * special.ndtr(-t)

        # admission decreases in t; widen the bracket until it straddles m
        lo, hi = -1.0, 1.0
        while admission_t(lo) < m and lo > -1e3:
            lo *= 2.0
        while admission_t(hi) > m and hi < 1e3:
            hi *= 2.0
        lo, hi = _bisect(admission_t, lo, hi, m, increasing=False, xtol=xtol, max_iter=max_iter)
        t = 0.5 * (lo + hi)
        fpr_v, tpr_v = float(special.ndtr(-t)), float(special.ndtr(b - a * t))
        return OperatingPoint(
            float(curve.raw_threshold(t)), fpr_v, tpr_v, pp * tpr_v + pn * fpr_v
        )

    def admission_x(x):
        return pp * (1.0 - float(curve(1.0 - x))) + pn * x

    if admission_x(0.0) >= m:
        x = 0.0
    else:
        _, x = _bisect(admission_x, 0.0, 1.0, m, increasing=True, xtol=xtol, max_iter=max_iter)
    tpr_v = 1.0 - float(curve(1.0 - x))
    if pp > 0:
        # on a vertical stretch of the ROC, stop where the cap is met exactly
        tpr_v = min(tpr_v, (m - pn * x) / pp)
    tpr_v = max(tpr_v, 0.0)
    tau = float(np.asarray(curve.tau_for_fpr(np.array([x])))[0])
    return OperatingPoint(tau, x, tpr_v, pp * tpr_v + pn * x)


def bounded_risk_region_check(point, constraint: OperatingConstraint) -> bool:
    fpr, tpr = point
    if not (0.0 <= fpr <= 1.0 and 0.0 <= tpr <= 1.0):
        raise DomainError("ROC coordinates must lie in [0, 1]")
    return bool(constraint.risk(fpr, tpr) <= constraint.c)


@dataclass(frozen=True)
class RiskPoint:
    tau: float
    fpr: float
    tpr: float
    risk: float
    feasible: bool

    def as_dict(self) -> dict:
        return dict(tau=self.tau, fpr=self.fpr, tpr=self.tpr, risk=self.risk,
                    feasible=self.feasible)


def min_risk_point(
    curve: LeakageCurve, constraint: OperatingConstraint, grid_size: int = DEFAULT_GRID
) -> RiskPoint:
    """Least-risk point among the ROC table rows; ties go to the smallest fpr."""
    if constraint.kind != "bounded_risk":
        raise DomainError("min_risk_point needs a bounded_risk constraint")
    table = roc_curve(curve, grid_size)
    risk = constraint.risk(table.x, table.y)
    best = int(np.flatnonzero(risk <= risk.min() + RISK_TIE_TOL)[0])
    tau = float(curve.raw_threshold(table.tau[best]))
    r = float(risk[best])
    return RiskPoint(tau, float(table.x[best]), float(table.y[best]), r, r <= constraint.c)


@dataclass(frozen=True)
class ParetoPoint:
    lam: float
    performance: float
    cost: float
    objective: float
    operating_tau: float
    index: int

    def as_dict(self) -> dict:
        return dict(
            lam=self.lam, performance=self.performance, cost=self.cost,
            objective=self.objective, operating_tau=self.operating_tau, index=self.index,
        )


def scalarized_objective(performance, cost, lam):
    return (1.0 - lam) * performance + lam * (1.0 - cost)


def _dominates(a: ParetoPoint, b: ParetoPoint) -> bool:
    return (
        a.performance >= b.performance
        and a.cost <= b.cost
        and (a.performance > b.performance or a.cost < b.cost)
    )


def pareto_front(
    performance_of: Callable,
    cost_of: Callable,
    candidates: Sequence,
    lambdas: Sequence[float],
    tau_of: Optional[Callable] = None,
) -> List[ParetoPoint]:
    """Maximise ``(1 - lam) * performance + lam * (1 - cost)`` for each lam.

    The winners are deduplicated (each candidate keeps the first lam that
    selected it) and filtered to the mutually non-dominated set. Ties are
    broken by lower cost, then lower candidate index.
    """
    candidates = list(candidates)
    if not candidates:
        raise EmptyCandidateSet("pareto_front needs at least one candidate")
    perf = np.array([float(performance_of(c)) for c in candidates])
    cost = np.array([float(cost_of(c)) for c in candidates])
    if np.any((cost < 0) | (cost > 1)):
        raise DomainError("cost values must lie in [0, 1]")
    taus = [float(tau_of(c)) if tau_of is not None else math.nan for c in candidates]

    chosen = {}
    for lam in lambdas:
        lam = float(lam)
        if not 0.0 <= lam <= 1.0:
            raise DomainError("each lambda must lie in [0, 1]")
        obj = scalarized_objective(perf, cost, lam)
        # lexicographic: objective desc, cost asc, index asc
        order = np.lexsort((np.arange(perf.size), cost, -obj))
        i = int(order[0])
        if i not in chosen:
            chosen[i] = ParetoPoint(lam, perf[i], cost[i], float(obj[i]), taus[i], i)

    selected = list(chosen.values())
    front = [p for p in selected if not any(_dominates(q, p) for q in selected if q is not p)]
    return sorted(front, key=lambda p: (p.lam, p.index))

"""Positive-to-negative class leakage G = F_p o F_n^-1 and its integrals.

Three concrete sources share one interface:

* :class:`EmpiricalLeakage` -- step function built from two empirical CDFs.
  Its area is computed exactly (rational arithmetic), so the geometric AUROC
  and the Mann-Whitney pair count agree to the last bit.
* :class:`BinormalLeakage` -- closed form for Gaussian class scores, with an
  analytic inverse and density.
* :class:`FunctionLeakage` -- any monotone map of [0, 1] onto itself; used for
  the random (identity) classifier and for synthetic comparisons.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Optional

import numpy as np
from scipy import special

from .binormal import BinormalModel, binormal_leakage
from .errors import DensityUnavailable, DomainError, MissingClass
from .score_model import EmpiricalCdf, Label, LabeledScores, conditional_cdf

DEFAULT_GRID = 100_000
KL_CUTOFF = 1e-6
_BISECT_ITERS = 80


def unit_grid(grid_size: int, spacing: str = "uniform") -> np.ndarray:
    """Nodes on [0, 1] including both endpoints.

    ``"cosine"`` clusters nodes quadratically toward 0 and 1, which resolves
    the power-law endpoint behaviour of G when the class spreads differ.
    """
    if grid_size < 2:
        raise DomainError("grid_size must be at least 2")
    s = np.linspace(0.0, 1.0, grid_size)
    if spacing == "uniform":
        return s
    if spacing == "cosine":
        u = 0.5 * (1.0 - np.cos(np.pi * s))
        u[0], u[-1] = 0.0, 1.0
        return u
    raise ValueError(f"unknown grid spacing {spacing!r}")


def _check_unit(x, what):
    x = np.asarray(x, dtype=float)
    if np.any(~((x >= 0.0) & (x <= 1.0))):
        raise DomainError(f"{what} must lie in [0, 1]")
    return x


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


class LeakageCurve:
    """Common interface. Subclasses implement ``_eval`` and the inverses."""

    source = "abstract"
    has_density = False

    def __call__(self, u):
        u = _check_unit(u, "u")
        return _out(self._eval(u))

    def inverse(self, v):
        """Lower generalized inverse ``inf{u : G(u) >= v}``."""
        v = _check_unit(v, "v")
        return _out(self._inverse(v))

    def upper_inverse(self, v):
        """Upper generalized inverse ``sup{u : G(u) <= v}``.

        Equal to :meth:`inverse` wherever G is strictly increasing; on flat
        stretches it picks the right end, which is the minimum-fpr operating
        point when inverting the ROC.
        """
        v = _check_unit(v, "v")
        return _out(self._upper_inverse(v))

    def density(self, u):
        raise DensityUnavailable(f"{self.source} leakage curve has no density")

    def roc_tpr(self, fpr):
        """ROC ordinate ``1 - G(1 - fpr)``."""
        fpr = _check_unit(fpr, "fpr")
        return _out(1.0 - np.asarray(self._eval(1.0 - fpr), dtype=float))

    def roc_fpr(self, tpr):
        """Smallest fpr reaching ``tpr``: ``1 - G^+(1 - tpr)`` with the upper inverse."""
        tpr = _check_unit(tpr, "tpr")
        return _out(1.0 - np.asarray(self._upper_inverse(1.0 - tpr), dtype=float))

    def tau_for_fpr(self, fpr):
        """Threshold (or curve parameter) realising each fpr; NaN if unknown."""
        return np.full(np.shape(fpr), np.nan)

    def raw_threshold(self, param):
        return param

    def _eval(self, u):
        raise NotImplementedError

    def _inverse(self, v):
        raise NotImplementedError

    def _upper_inverse(self, v):
        return self._inverse(v)


class EmpiricalLeakage(LeakageCurve):
    source = "empirical"

    def __init__(self, f_n: EmpiricalCdf, f_p: EmpiricalCdf):
        if f_n.n == 0 or f_p.n == 0:
            raise MissingClass("both classes need at least one sample")
        self.f_n = f_n
        self.f_p = f_p
        # G is constant at F_p(x_(k)) on ((k-1)/N, k/N]
        steps = f_p(f_n.sorted_scores)
        steps.setflags(write=False)
        self._steps = steps
        counts = f_p.count_le(f_n.sorted_scores).astype(np.int64)
        counts.setflags(write=False)
        self._step_counts = counts

    @property
    def n_neg(self) -> int:
        return self.f_n.n

    @property
    def n_pos(self) -> int:
        return self.f_p.n

    def _eval(self, u):
        out = np.zeros(u.shape)
        inner = u > 0.0
        if np.any(inner):
            out[inner] = self.f_p(self.f_n.quantile(u[inner]))
        return out

    def _on_lattice(self, v):
        # step heights are multiples of 1/P; absorb rounding such as 1 - 0.8
        c = v * self.n_pos
        r = np.rint(c)
        return np.where(np.abs(c - r) <= 1e-9, r, c)

    def _inverse(self, v):
        j = np.searchsorted(self._step_counts, self._on_lattice(v), side="left")
        return np.where(j >= self.n_neg, 1.0, j / self.n_neg)

    def _upper_inverse(self, v):
        k = np.searchsorted(self._step_counts, self._on_lattice(v), side="right")
        return k / self.n_neg

    def area_exact(self) -> Fraction:
        """Exact integral of the staircase, ties counted at half height.

        Equals Pr(x_n > x_p) + Pr(x_n = x_p) / 2 over the empirical samples.
        """
        neg = self.f_n.sorted_scores
        below = self.f_p.count_lt(neg).astype(np.int64)
        at = self.f_p.count_le(neg).astype(np.int64) - below
        numerator = 2 * int(below.sum()) + int(at.sum())
        return Fraction(numerator, 2 * self.n_neg * self.n_pos)

    def corners(self):
        """Exact ROC vertices ``(fpr, tpr, tau)`` sorted by decreasing tau.

        The first vertex is ``(0, 0, +inf)``; each distinct score adds one
        vertex under the rule "predict positive iff score >= tau".
        """
        neg = self.f_n.sorted_scores
        pos = self.f_p.sorted_scores
        taus = np.unique(np.concatenate([neg, pos]))[::-1]
        fp = self.n_neg - np.searchsorted(neg, taus, side="left")
        tp = self.n_pos - np.searchsorted(pos, taus, side="left")
        fpr = np.concatenate([[0.0], fp / self.n_neg])
        tpr = np.concatenate([[0.0], tp / self.n_pos])
        tau = np.concatenate([[np.inf], taus])
        return fpr, tpr, tau


class BinormalLeakage(LeakageCurve):
    source = "binormal"
    has_density = True

    def __init__(self, model: BinormalModel):
        self.model = model

    def _eval(self, u):
        return np.asarray(binormal_leakage(self.model, u), dtype=float)

    def _inverse(self, v):
        out = np.where(v >= 1.0, 1.0, 0.0)
        inner = (v > 0.0) & (v < 1.0)
        if np.any(inner):
            a, b = self.model.alpha, self.model.b
            out[inner] = special.ndtr((special.ndtri(v[inner]) + b) / a)
        return out

    # tail forms of the ROC avoid the cancellation in 1 - G(1 - x)
    def roc_tpr(self, fpr):
        fpr = _check_unit(fpr, "fpr")
        out = np.where(fpr >= 1.0, 1.0, 0.0)
        inner = (fpr > 0.0) & (fpr < 1.0)
        if np.any(inner):
            a, b = self.model.alpha, self.model.b
            out[inner] = special.ndtr(b + a * special.ndtri(fpr[inner]))
        return _out(out)

    def roc_fpr(self, tpr):
        tpr = _check_unit(tpr, "tpr")
        out = np.where(tpr >= 1.0, 1.0, 0.0)
        inner = (tpr > 0.0) & (tpr < 1.0)
        if np.any(inner):
            a, b = self.model.alpha, self.model.b
            out[inner] = special.ndtr((special.ndtri(tpr[inner]) - b) / a)
        return _out(out)

    def log_density(self, u):
        u = np.asarray(u, dtype=float)
        if np.any(~((u > 0.0) & (u < 1.0))):
            raise DomainError("density is defined on the open interval (0, 1)")
        a, b = self.model.alpha, self.model.b
        z = special.ndtri(u)
        return np.log(a) - 0.5 * (a * z - b) ** 2 + 0.5 * z * z

    def density(self, u):
        return _out(np.exp(self.log_density(u)))

    def tau_for_fpr(self, fpr):
        fpr = np.asarray(fpr, dtype=float)
        with np.errstate(divide="ignore"):
            return special.ndtri(1.0 - fpr)

    def raw_threshold(self, param):
        return self.model.threshold(param)


class FunctionLeakage(LeakageCurve):
    """Leakage curve given by a vectorised callable on [0, 1].

    Endpoints are pinned to G(0)=0 and G(1)=1. Missing inverses are found by
    bisection, which relies only on monotonicity.
    """

    source = "function"

    def __init__(
        self,
        func: Callable,
        inverse: Optional[Callable] = None,
        upper_inverse: Optional[Callable] = None,
        density: Optional[Callable] = None,
        name: str = "function",
        area: Optional[float] = None,
    ):
        self._func = func
        self._inv = inverse
        self._upper = upper_inverse if upper_inverse is not None else inverse
        self._density = density
        self.has_density = density is not None
        self.name = name
        self.area = area

    def _eval(self, u):
        g = np.asarray(self._func(u), dtype=float) * np.ones_like(u)
        g = np.where(u <= 0.0, 0.0, np.where(u >= 1.0, 1.0, g))
        return g

    def _bisect(self, v, upper):
        lo = np.zeros(v.shape)
        hi = np.ones(v.shape)
        for _ in range(_BISECT_ITERS):
            mid = 0.5 * (lo + hi)
            g = self._eval(mid)
            go_right = (g <= v) if upper else (g < v)
            lo = np.where(go_right, mid, lo)
            hi = np.where(go_right, hi, mid)
        return hi if not upper else lo

    def _inverse(self, v):
        if self._inv is not None:
            return np.asarray(self._inv(v), dtype=float) * np.ones_like(v)
        return np.where(v <= 0.0, 0.0, self._bisect(v, upper=False))

    def _upper_inverse(self, v):
        if self._upper is not None:
            return np.asarray(self._upper(v), dtype=float) * np.ones_like(v)
        return np.where(v >= 1.0, 1.0, self._bisect(v, upper=True))

    def density(self, u):
        if self._density is None:
            raise DensityUnavailable(f"no density supplied for {self.name!r}")
        u = np.asarray(u, dtype=float)
        return _out(np.asarray(self._density(u), dtype=float) * np.ones_like(u))


def identity_leakage() -> FunctionLeakage:
    """Random classifier: F_p = F_n, so G(u) = u and g = 1."""
    return FunctionLeakage(
        lambda u: u,
        inverse=lambda v: v,
        density=lambda u: np.ones_like(u),
        name="identity",
    )


def ideal_leakage() -> FunctionLeakage:
    """Perfect separation: G = 0 on [0, 1), jumping to 1 only at u = 1."""
    return FunctionLeakage(
        lambda u: np.zeros_like(u),
        inverse=lambda v: np.where(v > 0.0, 1.0, 0.0),
        upper_inverse=lambda v: np.ones_like(v),
        name="ideal",
        area=0.0,
    )


def build_leakage_empirical(f_n: EmpiricalCdf, f_p: EmpiricalCdf) -> EmpiricalLeakage:
    return EmpiricalLeakage(f_n, f_p)


def build_leakage_binormal(model: BinormalModel) -> BinormalLeakage:
    return BinormalLeakage(model)


def leakage_from_data(data: LabeledScores) -> EmpiricalLeakage:
    return EmpiricalLeakage(
        conditional_cdf(data, Label.NEGATIVE), conditional_cdf(data, Label.POSITIVE)
    )


def leakage_area(
    curve: LeakageCurve, grid_size: int = DEFAULT_GRID, spacing: str = "cosine"
) -> float:
    """Integral of G over [0, 1].

    Step curves are integrated exactly; everything else uses the composite
    trapezoid rule on ``grid_size`` nodes.
    """
    if grid_size < 2:
        raise DomainError("grid_size must be at least 2")
    if isinstance(curve, EmpiricalLeakage):
        return float(curve.area_exact())
    if getattr(curve, "area", None) is not None:
        return float(curve.area)
    u = unit_grid(grid_size, spacing)
    return float(np.trapezoid(curve(u), u))


def auroc_from_leakage(
    curve: LeakageCurve, grid_size: int = DEFAULT_GRID, spacing: str = "cosine"
) -> float:
    if isinstance(curve, EmpiricalLeakage):
        return float(1 - curve.area_exact())
    return 1.0 - leakage_area(curve, grid_size, spacing)


def prob_negative_ge_positive(
    curve: LeakageCurve, grid_size: int = DEFAULT_GRID, spacing: str = "cosine"
) -> float:
    return leakage_area(curve, grid_size, spacing)


def rank_pair_counts(data: LabeledScores, chunk: int = 4096):
    """Brute-force pair comparison: ``(wins, ties, pairs)`` for positives.

    Every (positive, negative) pair is compared directly, chunked to bound
    memory. Deliberately independent of the CDF machinery.
    """
    pos = data.positives
    neg = data.negatives
    if pos.size == 0 or neg.size == 0:
        raise MissingClass("rank statistic needs both classes")
    wins = 0
    ties = 0
    for start in range(0, pos.size, chunk):
        block = pos[start : start + chunk, None]
        wins += int(np.count_nonzero(block > neg[None, :]))
        ties += int(np.count_nonzero(block == neg[None, :]))
    return wins, ties, int(pos.size) * int(neg.size)


def auroc_rank_exact(data: LabeledScores) -> Fraction:
    wins, ties, pairs = rank_pair_counts(data)
    return Fraction(2 * wins + ties, 2 * pairs)


def auroc_rank_oracle(data: LabeledScores) -> float:
    """Mann-Whitney estimate of Pr(x_p > x_n), ties at half credit."""
    return float(auroc_rank_exact(data))


def kl_divergence_from_leakage(
    curve: LeakageCurve,
    grid_size: int = DEFAULT_GRID,
    eps: float = KL_CUTOFF,
    spacing: str = "cosine",
) -> float:
    """KL(f_p || f_n) in nats as the integral of g log g over (eps, 1 - eps).

    The cutoff drops the tails of f_p lying beyond the negative-class
    quantiles eps and 1 - eps; the estimate is only as good as that tail
    mass is small.
    """
    if not curve.has_density:
        raise DensityUnavailable(f"{curve.source} leakage curve has no density")
    if not 0.0 < eps < 0.5:
        raise DomainError("cutoff must lie in (0, 0.5)")
    u = eps + (1.0 - 2.0 * eps) * unit_grid(grid_size, spacing)
    if isinstance(curve, BinormalLeakage):
        log_g = curve.log_density(u)
        with np.errstate(over="ignore", invalid="ignore"):
            integrand = np.where(np.isneginf(log_g), 0.0, np.exp(log_g) * log_g)
    else:
        integrand = special.xlogy(curve.density(u), curve.density(u))
    return float(np.trapezoid(integrand, u))

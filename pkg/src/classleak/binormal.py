"""Gaussian (binormal) score model with closed-form leakage, ROC and AUROC."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def std_normal_cdf(z):
    """Phi(z), computed from the complementary error function."""
    return _scalar_or_array(special.ndtr(np.asarray(z, dtype=float)))


def std_normal_pdf(z):
    z = np.asarray(z, dtype=float)
    return _scalar_or_array(np.exp(-0.5 * z * z - _LOG_SQRT_2PI))


def std_normal_quantile(u):
    """Inverse of Phi on the open interval (0, 1)."""
    u = np.asarray(u, dtype=float)
    if np.any(~((u > 0.0) & (u < 1.0))):
        raise DomainError("standard normal quantile needs u in (0, 1)")
    return _scalar_or_array(special.ndtri(u))


@dataclass(frozen=True)
class BinormalModel:
    """Negative scores ~ N(mu_n, sigma_n^2), positive scores ~ N(mu_p, sigma_p^2)."""

    mu_n: float
    sigma_n: float
    mu_p: float
    sigma_p: float

    def __post_init__(self):
        for name in ("mu_n", "sigma_n", "mu_p", "sigma_p"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v!r}")
        if not (self.sigma_n > 0 and self.sigma_p > 0):
            raise DomainError("standard deviations must be positive")

    @classmethod
    def from_shape(cls, alpha: float, b: float) -> "BinormalModel":
        """Canonical model with the given (alpha, b): mu_n=0, sigma_p=1."""
        if not alpha > 0:
            raise DomainError("alpha must be positive")
        return cls(mu_n=0.0, sigma_n=float(alpha), mu_p=float(b), sigma_p=1.0)

    @property
    def alpha(self) -> float:
        return self.sigma_n / self.sigma_p

    @property
    def b(self) -> float:
        return (self.mu_p - self.mu_n) / self.sigma_p

    def threshold(self, t):
        """Raw score threshold for the standardized parameter ``t``."""
        return self.mu_n + self.sigma_n * np.asarray(t, dtype=float)

    def standardize(self, tau):
        return (np.asarray(tau, dtype=float) - self.mu_n) / self.sigma_n

    def sample(self, rng: np.random.Generator, n_neg: int, n_pos: int):
        return (
            rng.normal(self.mu_n, self.sigma_n, size=n_neg),
            rng.normal(self.mu_p, self.sigma_p, size=n_pos),
        )


def binormal_leakage(model: BinormalModel, u):
    """G(u) = Phi(alpha * Phi^-1(u) - b), with G(0)=0 and G(1)=1 exactly."""
    u = np.asarray(u, dtype=float)
    if np.any((u < 0.0) | (u > 1.0)):
        raise DomainError("leakage argument must lie in [0, 1]")
    out = np.where(u >= 1.0, 1.0, 0.0)
    inner = (u > 0.0) & (u < 1.0)
    if np.any(inner):
        out[inner] = special.ndtr(model.alpha * special.ndtri(u[inner]) - model.b)
    return _scalar_or_array(out)


def binormal_roc_point(model: BinormalModel, t):
    """(fpr, tpr) at standardized threshold t = (tau - mu_n) / sigma_n."""
    t = np.asarray(t, dtype=float)
    fpr = special.ndtr(-t)
    tpr = special.ndtr(model.b - model.alpha * t)
    return _scalar_or_array(fpr), _scalar_or_array(tpr)


def binormal_auroc(model: BinormalModel) -> float:
    gap = model.mu_p - model.mu_n
    return float(special.ndtr(gap / math.hypot(model.sigma_n, model.sigma_p)))


def binormal_kl_pn(model: BinormalModel) -> float:
    """Closed-form KL(f_p || f_n) in nats."""
    gap = model.mu_p - model.mu_n
    return (
        math.log(model.sigma_n / model.sigma_p)
        + (model.sigma_p**2 + gap**2) / (2.0 * model.sigma_n**2)
        - 0.5
    )

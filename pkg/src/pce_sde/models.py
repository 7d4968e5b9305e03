"""Model specifications and closed-form terminal laws.

Three scalar SDEs are covered:

* geometric Brownian motion ``dS = r S dt + sigma S dW``,
* Vasicek ``dR = (alpha - beta R) dt + sigma dW``,
* Cox-Ingersoll-Ross ``dR = (alpha - beta R) dt + sigma sqrt(R) dW``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Union

import numpy as np

from .errors import SingularParameterError
from .special import (
    noncentral_chi2_cdf,
    noncentral_chi2_pdf,
    noncentral_chi2_ppf,
    normal_cdf,
    normal_cdf_inv,
    normal_pdf,
)


def _positive(name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")


def _rate(name, value):
    if value == 0:
        raise SingularParameterError(f"{name} = 0 makes the closed-form law singular")
    _positive(name, value)


@dataclass(frozen=True)
class Gbm:
    """Geometric Brownian motion with drift `r` and volatility `sigma`."""

    r: float
    sigma: float
    s0: float
    T: float

    kind = "gbm"

    def __post_init__(self):
        if not math.isfinite(self.r):
            raise ValueError("r must be finite")
        _positive("sigma", self.sigma)
        _positive("s0", self.s0)
        _positive("T", self.T)

    @property
    def initial(self) -> float:
        return self.s0


@dataclass(frozen=True)
class Vasicek:
    """Ornstein-Uhlenbeck short-rate model with mean reversion speed `beta`."""

    alpha: float
    beta: float
    sigma: float
    r0: float
    T: float

    kind = "vasicek"

    def __post_init__(self):
        _positive("alpha", self.alpha)
        _rate("beta", self.beta)
        _positive("sigma", self.sigma)
        _positive("r0", self.r0)
        _positive("T", self.T)

    @property
    def initial(self) -> float:
        return self.r0


@dataclass(frozen=True)
class Cir:
    """Square-root diffusion short-rate model."""

    alpha: float
    beta: float
    sigma: float
    r0: float
    T: float

    kind = "cir"

    def __post_init__(self):
        _positive("alpha", self.alpha)
        _rate("beta", self.beta)
        _positive("sigma", self.sigma)
        _positive("r0", self.r0)
        _positive("T", self.T)

    @property
    def initial(self) -> float:
        return self.r0

    @property
    def dof(self) -> float:
        """Degrees of freedom ``q = 4 alpha / sigma**2`` of the terminal law."""
        return 4.0 * self.alpha / self.sigma ** 2

    @property
    def scale(self) -> float:
        """``c_T`` such that ``c_T R_T`` is noncentral chi-squared."""
        return 4.0 * self.beta / (self.sigma ** 2 * (-math.expm1(-self.beta * self.T)))

    @property
    def noncentrality(self) -> float:
        return self.scale * self.r0 * math.exp(-self.beta * self.T)

    @property
    def positivity_flag(self) -> bool:
        """True when ``q >= 2``, the regime where zero is not attained."""
        return self.dof >= 2.0

    @classmethod
    def with_dof(cls, q: float, beta: float, sigma: float, r0: float, T: float) -> "Cir":
        """Build a model whose terminal law has `q` degrees of freedom."""
        return cls(q * sigma ** 2 / 4.0, beta, sigma, r0, T)


ModelSpec = Union[Gbm, Vasicek, Cir]


def with_sigma(model: ModelSpec, sigma: float) -> ModelSpec:
    return replace(model, sigma=sigma)


@dataclass(frozen=True)
class AnalyticLaw:
    """Closed-form terminal distribution of a model.

    Attributes
    ----------
    mean, variance : float
    quantile : callable
        Maps a level in (0, 1) to the corresponding quantile.
    cdf : callable
    pdf : callable or None
    """

    mean: float
    variance: float
    quantile: Callable
    cdf: Callable
    pdf: Optional[Callable] = None

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)


def _gbm_law(m: Gbm) -> AnalyticLaw:
    mu = math.log(m.s0) + (m.r - 0.5 * m.sigma ** 2) * m.T
    s = m.sigma * math.sqrt(m.T)
    mean = m.s0 * math.exp(m.r * m.T)
    var = m.s0 ** 2 * math.exp(2.0 * m.r * m.T) * math.expm1(m.sigma ** 2 * m.T)

    def quantile(g):
        return np.exp(mu + s * normal_cdf_inv(g))

    def cdf(x):
        xa = np.asarray(x, dtype=float)
        z = (np.log(np.where(xa > 0, xa, 1.0)) - mu) / s
        out = np.where(xa > 0, normal_cdf(z), 0.0)
        return float(out) if np.ndim(x) == 0 else out

    def pdf(x):
        xa = np.asarray(x, dtype=float)
        safe = np.where(xa > 0, xa, 1.0)
        out = np.where(xa > 0, normal_pdf((np.log(safe) - mu) / s) / (s * safe), 0.0)
        return float(out) if np.ndim(x) == 0 else out

    return AnalyticLaw(mean, var, quantile, cdf, pdf)


def _vasicek_law(m: Vasicek) -> AnalyticLaw:
    decay = math.exp(-m.beta * m.T)
    mean = m.r0 * decay + (m.alpha / m.beta) * (1.0 - decay)
    var = m.sigma ** 2 / (2.0 * m.beta) * (-math.expm1(-2.0 * m.beta * m.T))
    sd = math.sqrt(var)
    return AnalyticLaw(
        mean,
        var,
        quantile=lambda g: mean + sd * normal_cdf_inv(g),
        cdf=lambda x: normal_cdf((np.asarray(x, dtype=float) - mean) / sd),
        pdf=lambda x: normal_pdf((np.asarray(x, dtype=float) - mean) / sd) / sd,
    )


def _cir_law(m: Cir) -> AnalyticLaw:
    c, q, lam = m.scale, m.dof, m.noncentrality
    decay = math.exp(-m.beta * m.T)
    mean = m.r0 * decay + (m.alpha / m.beta) * (1.0 - decay)
    var = (m.r0 * m.sigma ** 2 / m.beta * (decay - decay ** 2)
           + m.alpha * m.sigma ** 2 / (2.0 * m.beta ** 2) * (1.0 - decay) ** 2)

    def quantile(g):
        return noncentral_chi2_ppf(g, q, lam) / c

    def cdf(x):
        return noncentral_chi2_cdf(c * np.asarray(x, dtype=float), q, lam)

    def pdf(x):
        return c * noncentral_chi2_pdf(c * np.asarray(x, dtype=float), q, lam)

    return AnalyticLaw(mean, var, quantile, cdf, pdf)


def analytic_law(model: ModelSpec) -> AnalyticLaw:
    """Return the exact terminal law of `model` at its horizon ``T``."""
    if isinstance(model, Gbm):
        return _gbm_law(model)
    if isinstance(model, Vasicek):
        return _vasicek_law(model)
    if isinstance(model, Cir):
        return _cir_law(model)
    raise TypeError(f"unsupported model {type(model).__name__}")

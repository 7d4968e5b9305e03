"""Germ sampling, sample quantiles and standard errors.

Random numbers come from a counter-based Philox generator keyed by
``(seed, stream)``, so any stream can be regenerated independently of the
others. Uniforms are mapped to normals by the inverse CDF only.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .special import normal_cdf_inv

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


class Scheme(enum.Enum):
    PLAIN = "plain"
    LATIN_HYPERCUBE = "lhs"


@dataclass(frozen=True)
class SamplingPlan:
    """How to draw `size` germs.

    Attributes
    ----------
    size : int
    scheme : Scheme
    seed : int
    stream : int
        Independent substream index; repeats of an experiment use distinct streams.
    """

    size: int
    scheme: Scheme = Scheme.LATIN_HYPERCUBE
    seed: int = 0
    stream: int = 0

    def __post_init__(self):
        if int(self.size) != self.size or self.size < 1:
            raise ValueError(f"sample size must be a positive integer, got {self.size!r}")
        object.__setattr__(self, "scheme", Scheme(self.scheme))

    def with_stream(self, stream: int) -> "SamplingPlan":
        return SamplingPlan(self.size, self.scheme, self.seed, stream)


@dataclass(frozen=True)
class QuantileEstimate:
    gamma: float
    value: float
    index_used: int


def make_generator(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox generator for substream `stream` of `seed`."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(stream),))
    return np.random.Generator(np.random.Philox(ss))


def uniforms(gen: np.random.Generator, shape) -> np.ndarray:
    """Uniforms on the open interval (0, 1) built from the top 53 bits of raw draws."""
    n = int(np.prod(shape))
    raw = gen.bit_generator.random_raw(n) >> np.uint64(11)
    return ((raw.astype(float) + 0.5) * 2.0 ** -53).reshape(shape)


def standard_normals(gen: np.random.Generator, shape) -> np.ndarray:
    return np.asarray(normal_cdf_inv(uniforms(gen, shape)))


def draw_uniform(plan: SamplingPlan) -> np.ndarray:
    """Uniforms for `plan`; stratified with exactly one draw per stratum under LHS."""
    gen = make_generator(plan.seed, plan.stream)
    m = plan.size
    u = uniforms(gen, (m,))
    if plan.scheme is Scheme.LATIN_HYPERCUBE:
        u = (np.arange(m) + u) / m
        u = u[gen.permutation(m)]
        # Guard the (0, 1) contract against rounding in the last stratum.
        u = np.clip(u, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0))
    return u


def draw_germ(plan: SamplingPlan) -> np.ndarray:
    """Germ draws ``xi = Z / sqrt(2)`` distributed as ``N(0, 1/2)``."""
    return np.asarray(normal_cdf_inv(draw_uniform(plan))) * _INV_SQRT2


def quantile_rank(gamma: float, m: int) -> int:
    """One-based order statistic ``floor(gamma * m) + 1`` used for level `gamma`."""
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"quantile level must lie in (0, 1), got {gamma!r}")
    # Round first so that e.g. 0.99 * 5000 is not floored to 4949.
    k = math.floor(round(gamma * m, 9))
    return min(k + 1, m)


def sample_quantile(data, gamma: float) -> QuantileEstimate:
    """Order-statistic estimate of the `gamma` quantile of `data`."""
    x = np.asarray(data, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("empty sample")
    idx = quantile_rank(gamma, x.size)
    value = float(np.partition(x, idx - 1)[idx - 1])
    return QuantileEstimate(gamma, value, idx)


def standard_error_of_mean(data) -> float:
    """``s / sqrt(n)`` with the unbiased sample standard deviation ``s``."""
    x = np.asarray(data, dtype=float)
    if x.size < 2:
        raise ValueError("need at least two observations")
    return float(np.std(x, ddof=1) / math.sqrt(x.size))


def standard_error_of_variance(data) -> float:
    """Normal-theory standard error ``s**2 * sqrt(2 / (n - 1))`` of the sample variance."""
    x = np.asarray(data, dtype=float)
    if x.size < 2:
        raise ValueError("need at least two observations")
    return float(np.var(x, ddof=1) * math.sqrt(2.0 / (x.size - 1)))


def repeated_quantile_se(estimates) -> float:
    """Standard error of the average of `L` independent quantile estimates."""
    q = np.asarray(estimates, dtype=float)
    if q.size < 2:
        raise ValueError("need at least two repeats")
    return float(np.std(q, ddof=1) / math.sqrt(q.size))

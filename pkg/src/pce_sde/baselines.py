"""Monte Carlo and quasi-Monte Carlo reference estimators.

Maps passed to the estimators take standard normal input: a float when
``dimension == 1`` and a length-``dimension`` vector otherwise. With
``vectorized=True`` the map instead receives the whole ``(M,)`` or
``(M, dimension)`` batch and must return ``M`` values.
"""

from __future__ import annotations

import enum
import math
import time
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .models import AnalyticLaw, Cir, Gbm, ModelSpec, Vasicek, analytic_law
from .sampling import make_generator, standard_error_of_mean, standard_error_of_variance, standard_normals
from .sobol import SobolSequence
from .special import normal_cdf_inv


class PathMethod(enum.Enum):
    EULER_MARUYAMA = "euler"
    MILSTEIN_SQRT = "milstein_sqrt"


class ReflectionWarning(RuntimeWarning):
    """A CIR path hit zero and was reflected."""


class ReflectionCounter:
    """Tally of reflections applied while simulating CIR paths."""

    def __init__(self):
        self.count = 0

    def add(self, n: int) -> None:
        self.count += int(n)


@dataclass(frozen=True)
class PathScheme:
    """Uniform time-stepping scheme with `steps` steps over ``[0, T]``.

    For CIR the default is Euler-Maruyama on ``Y = sqrt(R)``, which is the
    Milstein scheme for ``R`` itself; other models default to plain
    Euler-Maruyama.
    """

    model: ModelSpec
    steps: int
    method: Optional[PathMethod] = None

    def __post_init__(self):
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValueError(f"steps must be a positive integer, got {self.steps!r}")
        method = self.method
        if method is None:
            method = PathMethod.MILSTEIN_SQRT if isinstance(self.model, Cir) else PathMethod.EULER_MARUYAMA
        method = PathMethod(method)
        if method is PathMethod.MILSTEIN_SQRT and not isinstance(self.model, Cir):
            raise ValueError("the square-root transform applies to CIR only")
        object.__setattr__(self, "method", method)

    @property
    def dt(self) -> float:
        return self.model.T / self.steps


def _step_fn(scheme: PathScheme):
    """Return ``(x0, step, finish)`` where ``step(x, z)`` advances one step."""
    m = scheme.model
    dt = scheme.dt
    sq = math.sqrt(dt)
    if isinstance(m, Gbm):
        return m.s0, lambda x, z: x + m.r * x * dt + m.sigma * x * sq * z, None
    if isinstance(m, Vasicek):
        return m.r0, lambda x, z: x + (m.alpha - m.beta * x) * dt + m.sigma * sq * z, None
    if scheme.method is PathMethod.MILSTEIN_SQRT:
        shift = m.alpha - 0.25 * m.sigma ** 2
        half_s = 0.5 * m.sigma
        return (math.sqrt(m.r0),
                lambda y, z: y + (shift - m.beta * y * y) / (2.0 * y) * dt + half_s * sq * z,
                lambda y: y * y)
    return (m.r0,
            lambda x, z: x + (m.alpha - m.beta * x) * dt + m.sigma * np.sqrt(x) * sq * z,
            None)


def _reflects(scheme: PathScheme) -> bool:
    return isinstance(scheme.model, Cir)


def simulate_path(scheme: PathScheme, increments, counter: Optional[ReflectionCounter] = None) -> float:
    """Terminal value of one path driven by `increments` (``steps`` standard normals).

    CIR states that reach zero or below are reflected to their absolute
    value; each reflection is tallied in `counter` when one is given.
    """
    z = np.asarray(increments, dtype=float)
    if z.shape != (scheme.steps,):
        raise ValueError(f"expected {scheme.steps} increments, got shape {z.shape}")
    x, step, finish = _step_fn(scheme)
    reflect = _reflects(scheme)
    hits = 0
    for zk in z.tolist():
        x = step(x, zk)
        if reflect and x <= 0.0:
            x = -x
            hits += 1
    if hits and counter is not None:
        counter.add(hits)
    return float(finish(x) if finish else x)


def simulate_paths(scheme: PathScheme, increments, counter: Optional[ReflectionCounter] = None) -> np.ndarray:
    """Vectorised `simulate_path` over the rows of an ``(M, steps)`` array."""
    z = np.asarray(increments, dtype=float)
    if z.ndim != 2 or z.shape[1] != scheme.steps:
        raise ValueError(f"expected shape (M, {scheme.steps}), got {z.shape}")
    x0, step, finish = _step_fn(scheme)
    x = np.full(z.shape[0], float(x0))
    reflect = _reflects(scheme)
    hits = 0
    for k in range(scheme.steps):
        x = step(x, z[:, k])
        if reflect:
            neg = x <= 0.0
            n = int(np.count_nonzero(neg))
            if n:
                hits += n
                x = np.abs(x)
    if hits:
        if counter is not None:
            counter.add(hits)
        else:
            warnings.warn(f"{hits} CIR path states reflected at zero", ReflectionWarning, stacklevel=2)
    return finish(x) if finish else x


def path_map(scheme: PathScheme, counter: Optional[ReflectionCounter] = None,
             vectorized: bool = False) -> Callable:
    """Map from ``steps`` normals (or a batch of them) to the terminal value."""
    if vectorized:
        return lambda z: simulate_paths(scheme, z, counter)
    return lambda z: simulate_path(scheme, z, counter)


def terminal_map(model: ModelSpec, vectorized: bool = False) -> tuple[Callable, int]:
    """Exact sampler of ``X_T`` from standard normals, with its input dimension.

    gBm and Vasicek need one normal. CIR needs ``q`` normals and is only
    available for integer degrees of freedom, via
    ``c_T R_T = (Z_1 + sqrt(lambda))**2 + Z_2**2 + ... + Z_q**2``.
    """
    if isinstance(model, Gbm):
        mu = math.log(model.s0) + (model.r - 0.5 * model.sigma ** 2) * model.T
        s = model.sigma * math.sqrt(model.T)
        if vectorized:
            return (lambda z: np.exp(mu + s * np.asarray(z))), 1
        return (lambda z: math.exp(mu + s * z)), 1
    if isinstance(model, Vasicek):
        law = analytic_law(model)
        mean, sd = law.mean, law.std
        return (lambda z: mean + sd * z), 1
    if isinstance(model, Cir):
        q = model.dof
        qi = int(round(q))
        if abs(q - qi) > 1e-9 or qi < 1:
            raise ValueError(f"exact CIR sampler needs integer degrees of freedom, got q={q}")
        root_lam = math.sqrt(model.noncentrality)
        c = model.scale
        if vectorized:
            def cir(z):
                z = np.asarray(z, dtype=float).reshape(len(z), qi)
                return ((z[:, 0] + root_lam) ** 2 + np.sum(z[:, 1:] ** 2, axis=1)) / c
        else:
            def cir(z):
                z = np.atleast_1d(np.asarray(z, dtype=float))
                return float(((z[0] + root_lam) ** 2 + float(np.dot(z[1:], z[1:]))) / c)
        return cir, qi
    raise TypeError(f"unsupported model {type(model).__name__}")


@dataclass(frozen=True)
class McResult:
    mean: float
    variance: float
    se_mean: float
    se_variance: float
    elapsed: float
    size: int


@dataclass(frozen=True)
class QmcResult:
    mean: float
    variance: float
    err_mean: float
    err_variance: float
    elapsed: float
    size: int


Reference = Union[AnalyticLaw, tuple, None]


def _evaluate(fn, z, vectorized):
    if vectorized:
        return np.asarray(fn(z), dtype=float)
    if z.ndim == 1:
        return np.fromiter((fn(v) for v in z.tolist()), dtype=float, count=z.shape[0])
    return np.fromiter((fn(row) for row in z), dtype=float, count=z.shape[0])


def mc_estimate(fn: Callable, M: int, seed: int, dimension: int = 1, stream: int = 0,
                vectorized: bool = False) -> McResult:
    """Plain Monte Carlo mean and unbiased variance of ``fn(Z)``.

    Normals are drawn up front; `elapsed` covers map evaluation and the
    statistics only.
    """
    if M < 2:
        raise ValueError("M must be at least 2")
    gen = make_generator(seed, stream)
    shape = (M,) if dimension == 1 else (M, dimension)
    z = standard_normals(gen, shape)
    t0 = time.perf_counter()
    x = _evaluate(fn, z, vectorized)
    mean = float(np.mean(x))
    var = float(np.var(x, ddof=1))
    se_m = standard_error_of_mean(x)
    se_v = standard_error_of_variance(x)
    elapsed = time.perf_counter() - t0
    return McResult(mean, var, se_m, se_v, elapsed, M)


def _reference(ref: Reference):
    if ref is None:
        return None
    if isinstance(ref, AnalyticLaw):
        return ref.mean, ref.variance
    mean, var = ref
    return float(mean), float(var)


def qmc_estimate(fn: Callable, M: int, dimension: int = 1, reference: Reference = None,
                 vectorized: bool = False, sequence: Optional[SobolSequence] = None) -> QmcResult:
    """Sobol quasi-Monte Carlo mean and variance of ``fn(Z)``.

    The variance is the average of ``(x - mu)**2`` with ``mu`` the reference
    mean when `reference` is given, else the QMC mean. Errors are absolute
    deviations from the reference, or NaN without one.
    """
    if M < 2:
        raise ValueError("M must be at least 2")
    seq = sequence or SobolSequence(dimension)
    if seq.dimension != dimension:
        raise ValueError(f"sequence dimension {seq.dimension} does not match {dimension}")
    u = seq.draw(M)
    z = np.asarray(normal_cdf_inv(u[:, 0] if dimension == 1 else u))
    ref = _reference(reference)
    t0 = time.perf_counter()
    x = _evaluate(fn, z, vectorized)
    mean = float(np.mean(x))
    centre = ref[0] if ref else mean
    var = float(np.mean((x - centre) ** 2))
    elapsed = time.perf_counter() - t0
    if ref:
        return QmcResult(mean, var, abs(mean - ref[0]), abs(var - ref[1]), elapsed, M)
    return QmcResult(mean, var, math.nan, math.nan, elapsed, M)

"""Adaptive fourth-order Runge-Kutta for scalar ODEs.

Error control is by step doubling: each trial step of size ``h`` is compared
with two steps of size ``h/2``, and the two-half-step value is kept. The
returned state is deliberately not Richardson-extrapolated, so the global
error scales with the requested tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import DomainViolation, StepSizeUnderflow

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_STEP_FLOOR = 1e-14
_INITIAL_DIVISIONS = 100


@dataclass(frozen=True)
class Tolerances:
    """Absolute and relative local error targets."""

    abs_tol: float
    rel_tol: float
    name: str = "custom"

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol >= 0):
            raise ValueError("abs_tol must be > 0 and rel_tol >= 0")


STANDARD = Tolerances(1e-7, 1e-5, "standard")
TIGHT = Tolerances(1e-15, 1e-10, "tight")

PRESETS = {t.name: t for t in (STANDARD, TIGHT)}


def resolve_tolerances(value) -> Tolerances:
    """Accept a `Tolerances`, a preset name or an ``(abs, rel)`` pair."""
    if isinstance(value, Tolerances):
        return value
    if isinstance(value, str):
        try:
            return PRESETS[value.lower()]
        except KeyError:
            raise ValueError(f"unknown tolerance preset {value!r}; choose from {sorted(PRESETS)}") from None
    abs_tol, rel_tol = value
    return Tolerances(float(abs_tol), float(rel_tol))


@dataclass(frozen=True)
class OdeProblem:
    """Scalar initial value problem ``d' = rhs(t, d)`` on ``[t0, t1]``."""

    rhs: Callable[[float, float], float]
    t0: float
    t1: float
    d0: float
    abs_tol: float = STANDARD.abs_tol
    rel_tol: float = STANDARD.rel_tol

    def __post_init__(self):
        if not self.t1 >= self.t0:
            raise ValueError(f"need t1 >= t0, got t0={self.t0}, t1={self.t1}")
        if not math.isfinite(self.d0):
            raise ValueError("initial state must be finite")
        Tolerances(self.abs_tol, self.rel_tol)

    @classmethod
    def with_tolerances(cls, rhs, t0, t1, d0, tolerances: Tolerances) -> "OdeProblem":
        return cls(rhs, t0, t1, d0, tolerances.abs_tol, tolerances.rel_tol)


@dataclass(frozen=True)
class OdeSolution:
    final_state: float
    steps_taken: int
    rejected_steps: int


def _rk4(f, t, y, h, k1):
    h2 = 0.5 * h
    k2 = f(t + h2, y + h2 * k1)
    k3 = f(t + h2, y + h2 * k2)
    k4 = f(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(problem: OdeProblem) -> OdeSolution:
    """Integrate `problem` from ``t0`` to ``t1``.

    Raises
    ------
    StepSizeUnderflow
        If the controller asks for a step below ``1e-14 * (t1 - t0)``.
    DomainViolation
        If the right-hand side or the state becomes non-finite.
    """
    f = problem.rhs
    t0, t1 = float(problem.t0), float(problem.t1)
    y = float(problem.d0)
    span = t1 - t0
    if span == 0.0:
        return OdeSolution(y, 0, 0)
    atol, rtol = problem.abs_tol, problem.rel_tol
    h = span / _INITIAL_DIVISIONS
    h_min = _STEP_FLOOR * span
    t = t0
    steps = rejected = 0
    while t < t1:
        last = t + h >= t1
        if last:
            h = t1 - t
        k1 = f(t, y)
        if not math.isfinite(k1):
            raise DomainViolation(f"non-finite derivative {k1!r} at t={t!r}, state={y!r}")
        full = _rk4(f, t, y, h, k1)
        half = _rk4(f, t, y, 0.5 * h, k1)
        th = t + 0.5 * h
        two = _rk4(f, th, half, 0.5 * h, f(th, half))
        err = abs(two - full)
        if not math.isfinite(err):
            raise DomainViolation(f"non-finite state near t={t!r}")
        tol = atol + rtol * max(abs(y), abs(two))
        if err <= tol:
            t = t1 if last else t + h
            y = two
            steps += 1
            if t >= t1:
                break
        else:
            rejected += 1
        factor = _MAX_FACTOR if err == 0.0 else _SAFETY * (tol / err) ** 0.2
        h *= min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
        if h < h_min:
            raise StepSizeUnderflow(f"step {h!r} below floor {h_min!r} at t={t!r}")
    return OdeSolution(y, steps, rejected)

"""Doss representation of the scalar models.

An autonomous SDE ``dX = b(X) dt + s(X) dW`` with ``X_0 = x0`` is written
as ``X_t = H(D_t, W_t)``, where ``H`` solves ``dH/dy = s(H)`` with
``H(x, 0) = x`` and ``D`` solves a pathwise ODE driven by ``W``. Replacing
``W_t`` by ``sqrt(2t) * xi`` with a single germ ``xi ~ N(0, 1/2)`` turns the
terminal value into a deterministic map ``xi -> X_T`` that can be projected
onto Hermite polynomials. For CIR the representation is applied to
``Y = sqrt(R)``, whose diffusion coefficient is constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from scipy.integrate import quad

from .errors import PositivityViolation
from .models import Cir, Gbm, ModelSpec, Vasicek
from .ode import STANDARD, OdeProblem, OdeSolution, Tolerances, integrate

POSITIVITY_FLOOR = 1e-12
_T_START = 1e-12


@dataclass(frozen=True)
class DossFunctional:
    """The pieces of a model's Doss representation.

    Attributes
    ----------
    h : callable
        Flow ``H(x, y)``.
    d_rhs : callable
        Pathwise derivative ``(t, d, xi) -> dD/dt``.
    transform_out : callable
        Map from ``H(D_T, W_T)`` to the model state (square for CIR).
    d0 : float
        Initial value of ``D``.
    """

    model: ModelSpec
    h: Callable[[float, float], float]
    d_rhs: Callable[[float, float, float], float]
    transform_out: Callable[[float], float]
    d0: float


def _identity(v):
    return v


def _square(v):
    return v * v


def _gbm(m: Gbm) -> DossFunctional:
    r, s = m.r, m.sigma

    def h(x, y):
        return x * math.exp(s * y)

    def rhs(t, d, xi):
        w = math.sqrt(2.0 * t) * xi
        hv = d * math.exp(s * w)
        return math.exp(-s * w) * (r * hv - 0.5 * s * s * hv)

    return DossFunctional(m, h, rhs, _identity, m.s0)


def _vasicek(m: Vasicek) -> DossFunctional:
    a, b, s = m.alpha, m.beta, m.sigma

    def h(x, y):
        return s * y + x

    def rhs(t, d, xi):
        return a - b * (s * math.sqrt(2.0 * t) * xi + d)

    return DossFunctional(m, h, rhs, _identity, m.r0)


def _cir(m: Cir) -> DossFunctional:
    a, b, s = m.alpha, m.beta, m.sigma
    half_s = 0.5 * s
    shift = a - 0.25 * s * s

    def h(x, y):
        return half_s * y + x

    def rhs(t, d, xi):
        hv = half_s * math.sqrt(2.0 * t) * xi + d
        if not hv >= POSITIVITY_FLOOR:
            raise PositivityViolation(
                f"transformed CIR state {hv!r} below {POSITIVITY_FLOOR} at t={t!r}, xi={xi!r}")
        return (shift - b * hv * hv) / (2.0 * hv)

    return DossFunctional(m, h, rhs, _square, math.sqrt(m.r0))


def doss_functional(model: ModelSpec) -> DossFunctional:
    """Build the Doss representation of `model`."""
    if isinstance(model, Gbm):
        return _gbm(model)
    if isinstance(model, Vasicek):
        return _vasicek(model)
    if isinstance(model, Cir):
        return _cir(model)
    raise TypeError(f"unsupported model {type(model).__name__}")


def doss_rhs(model: ModelSpec, t: float, d: float, xi: float) -> float:
    """Right-hand side of the pathwise ODE for ``D`` at time `t` and germ `xi`."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return doss_functional(model).d_rhs(t, d, xi)


def solve_doss_ode(model: ModelSpec, xi: float,
                   tolerances: Tolerances = STANDARD,
                   functional: DossFunctional | None = None) -> tuple[float, OdeSolution]:
    """Integrate the ``D`` equation for one germ value.

    Returns the model state at ``T`` together with the integrator report.
    Integration starts just after 0 since ``sqrt(2t)`` is not
    differentiable there.
    """
    fn = functional or doss_functional(model)
    xi = float(xi)
    rhs = fn.d_rhs
    t0 = min(_T_START, model.T)
    problem = OdeProblem.with_tolerances(lambda t, d: rhs(t, d, xi), t0, model.T, fn.d0, tolerances)
    sol = integrate(problem)
    w_T = math.sqrt(2.0 * model.T) * xi
    value = fn.h(sol.final_state, w_T)
    if isinstance(model, Cir) and not value >= POSITIVITY_FLOOR:
        raise PositivityViolation(f"terminal transformed CIR state {value!r} not positive at xi={xi!r}")
    return fn.transform_out(value), sol


def evaluate_solution_at_node(model: ModelSpec, xi: float,
                              tolerances: Tolerances = STANDARD) -> float:
    """Approximate the terminal state ``X_T`` as a function of the germ."""
    return solve_doss_ode(model, xi, tolerances)[0]


def vasicek_rr_law(model: Vasicek) -> tuple[float, float]:
    """Mean and variance of the Vasicek germ functional ``RR_T``.

    The functional is Gaussian in the germ and shares the exact mean; its
    variance is ``sigma**2 (sqrt(T) - beta exp(-beta T) I)**2`` with
    ``I = int_0^T sqrt(s) exp(beta s) ds``.
    """
    b, T = model.beta, model.T
    # The algebraic weight s**0.5 is handled exactly by QUADPACK's qawse rule.
    integral, _ = quad(lambda s: math.exp(b * s), 0.0, T, weight="alg", wvar=(0.5, 0.0),
                       epsabs=1e-13, epsrel=1e-10)
    decay = math.exp(-b * T)
    mean = model.r0 * decay + (model.alpha / b) * (1.0 - decay)
    amp = math.sqrt(T) - b * decay * integral
    return mean, model.sigma ** 2 * amp * amp


def vasicek_variance_gap(model: Vasicek) -> float:
    """Relative variance gap ``|Var[R_T] - Var[RR_T]| / Var[R_T]``."""
    from .models import analytic_law

    exact = analytic_law(model).variance
    return abs(exact - vasicek_rr_law(model)[1]) / exact


def vasicek_gap_bound(model: Vasicek) -> float:
    """First-order small-``beta`` size ``sigma**2 T**2 beta / 3`` of the absolute gap."""
    return model.sigma ** 2 * model.T ** 2 * model.beta / 3.0

"""Non-intrusive spectral projection onto the Hermite chaos.

Coefficients are obtained by Gauss-Hermite quadrature of the germ map,

    c_i = E[M(xi) H_i(xi)] / E[H_i(xi)**2],

so mean and variance follow directly from the coefficients. The model is
only ever evaluated at the quadrature nodes (the offline stage); evaluating
the expansion afterwards is polynomial arithmetic (the online stage).
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .chaos import HermiteBasis, QuadratureRule, gauss_hermite_rule
from .doss import doss_functional, solve_doss_ode
from .errors import NodeEvaluationError
from .models import ModelSpec
from .ode import STANDARD, Tolerances
from .sampling import SamplingPlan, draw_germ


def default_rule_size(degree: int) -> int:
    """Number of quadrature nodes used for a degree-`degree` expansion.

    ``degree + 1`` nodes make the projection of every polynomial of degree
    at most ``degree + 1`` exact.
    """
    return degree + 1


@dataclass(frozen=True)
class ProjectionTiming:
    """Wall-clock split of a projection, in seconds."""

    node_seconds: float
    coefficient_seconds: float

    @property
    def total(self) -> float:
        return self.node_seconds + self.coefficient_seconds


@dataclass(frozen=True)
class PceExpansion:
    """Truncated Hermite expansion ``sum_i c_i H_i(xi)``.

    Attributes
    ----------
    coefficients : ndarray
        ``c_0 .. c_p``.
    basis : HermiteBasis
    rule : QuadratureRule or None
        Rule used for the projection.
    node_values : ndarray or None
        Model values at the rule's nodes.
    model : ModelSpec or None
    tolerances : Tolerances or None
    timing : ProjectionTiming or None
    """

    coefficients: np.ndarray = field(repr=False)
    basis: HermiteBasis
    rule: Optional[QuadratureRule] = None
    node_values: Optional[np.ndarray] = field(default=None, repr=False)
    model: Optional[ModelSpec] = None
    tolerances: Optional[Tolerances] = None
    timing: Optional[ProjectionTiming] = field(default=None, compare=False)

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=float)
        if c.shape != (self.basis.size,):
            raise ValueError(f"expected {self.basis.size} coefficients, got shape {c.shape}")
        c.flags.writeable = False
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self) -> int:
        return self.basis.max_degree

    def mean(self) -> float:
        return pce_mean(self)

    def variance(self) -> float:
        return pce_variance(self)

    def __call__(self, xi):
        return pce_eval(self, xi)


def _ordered_sum(terms) -> float:
    """Neumaier-compensated sum taken in the given order."""
    total = 0.0
    comp = 0.0
    for x in terms:
        x = float(x)
        t = total + x
        if abs(total) >= abs(x):
            comp += (total - t) + x
        else:
            comp += (x - t) + total
        total = t
    return total + comp


def _coefficients(basis: HermiteBasis, rule: QuadratureRule, values: np.ndarray) -> np.ndarray:
    psi = basis.eval_all(rule.nodes)
    coeffs = np.empty(basis.size)
    for i in range(basis.size):
        coeffs[i] = _ordered_sum(values * rule.weights * psi[i]) / basis.norm_sq(i)
    return coeffs


def project_values(values, degree: int, rule: QuadratureRule) -> PceExpansion:
    """Project node values `values` (taken at ``rule.nodes``) onto degree `degree`."""
    vals = np.asarray(values, dtype=float)
    if vals.shape != rule.nodes.shape:
        raise ValueError("one value per quadrature node is required")
    basis = HermiteBasis(degree)
    return PceExpansion(_coefficients(basis, rule, vals), basis, rule, vals)


def project_function(func: Callable[[float], float], degree: int,
                     nodes: Optional[int] = None) -> PceExpansion:
    """Project an arbitrary scalar germ map `func`."""
    rule = gauss_hermite_rule(nodes or default_rule_size(degree))
    return project_values([func(float(x)) for x in rule.nodes], degree, rule)


def project(model: ModelSpec, degree: int, tolerances: Tolerances = STANDARD,
            nodes: Optional[int] = None, parallel: bool = False,
            max_workers: Optional[int] = None) -> PceExpansion:
    """Expand the terminal state of `model` in Hermite chaos of degree `degree`.

    Parameters
    ----------
    model : ModelSpec
    degree : int
        Truncation degree ``p >= 0``.
    tolerances : Tolerances
        Local error targets of the node ODE solves.
    nodes : int, optional
        Quadrature size; defaults to ``degree + 1``.
    parallel : bool
        Solve the node ODEs in a thread pool. The reduction order is fixed,
        so results are bit-identical to the serial path.

    Raises
    ------
    NodeEvaluationError
        Wrapping the first failure, with the node index attached.
    """
    if int(degree) != degree or degree < 0:
        raise ValueError(f"degree must be a non-negative integer, got {degree!r}")
    basis = HermiteBasis(int(degree))
    rule = gauss_hermite_rule(nodes or default_rule_size(basis.max_degree))
    fn = doss_functional(model)

    def solve(j):
        xi = float(rule.nodes[j])
        try:
            return solve_doss_ode(model, xi, tolerances, fn)[0]
        except Exception as exc:
            raise NodeEvaluationError(j, xi, exc) from exc

    t0 = time.perf_counter()
    if parallel and rule.size > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            values = np.array(list(pool.map(solve, range(rule.size))))
    else:
        values = np.array([solve(j) for j in range(rule.size)])
    t1 = time.perf_counter()
    coeffs = _coefficients(basis, rule, values)
    t2 = time.perf_counter()
    return PceExpansion(coeffs, basis, rule, values, model, tolerances,
                        ProjectionTiming(t1 - t0, t2 - t1))


def pce_mean(expansion: PceExpansion) -> float:
    """Mean of the expansion, its zeroth coefficient."""
    return float(expansion.coefficients[0])


def pce_variance(expansion: PceExpansion) -> float:
    """Variance ``sum_{i>=1} c_i**2 * 2**i * i!``."""
    c = expansion.coefficients
    return _ordered_sum(c[i] * c[i] * expansion.basis.norm_sq(i) for i in range(1, c.size))


def pce_eval(expansion: PceExpansion, xi):
    """Evaluate the expansion at germ values `xi` (scalar or array)."""
    psi = expansion.basis.eval_all(xi)
    out = np.tensordot(expansion.coefficients, psi, axes=1)
    return float(out) if np.ndim(xi) == 0 else out


def pce_sample(expansion: PceExpansion, plan: SamplingPlan) -> np.ndarray:
    """Draw germs according to `plan` and push them through the expansion."""
    return np.asarray(pce_eval(expansion, draw_germ(plan)))


def parseval_tail(expansion: PceExpansion, reference_variance: float) -> float:
    """Variance not captured by the expansion, ``Var_ref - sum_{i>=1} c_i**2 ||H_i||**2``."""
    return reference_variance - pce_variance(expansion)

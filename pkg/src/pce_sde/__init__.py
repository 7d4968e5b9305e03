"""Polynomial chaos expansions of scalar SDE solutions at a fixed horizon.

The terminal state of geometric Brownian motion, Vasicek or CIR is written
as a deterministic function of one Gaussian germ via the Doss
representation, then projected onto Hermite polynomials with Gauss-Hermite
quadrature. Monte Carlo and Sobol quasi-Monte Carlo estimators are provided
for comparison.
"""

__version__ = "0.1.0"

from .chaos import HermiteBasis, QuadratureRule, gauss_hermite_rule, hermite_eval, hermite_norm_sq
from .doss import DossFunctional, doss_functional, doss_rhs, evaluate_solution_at_node, vasicek_rr_law
from .errors import (
    DomainViolation,
    NodeEvaluationError,
    PceSdeError,
    PositivityViolation,
    SingularParameterError,
    StepSizeUnderflow,
)
from .models import AnalyticLaw, Cir, Gbm, ModelSpec, Vasicek, analytic_law
from .nisp import PceExpansion, parseval_tail, pce_eval, pce_mean, pce_sample, pce_variance, project
from .ode import STANDARD, TIGHT, OdeProblem, OdeSolution, Tolerances, integrate
from .sampling import QuantileEstimate, SamplingPlan, Scheme, draw_germ, sample_quantile

__all__ = [
    "AnalyticLaw", "Cir", "DomainViolation", "DossFunctional", "Gbm", "HermiteBasis", "ModelSpec",
    "NodeEvaluationError", "OdeProblem", "OdeSolution", "PceExpansion", "PceSdeError",
    "PositivityViolation", "QuadratureRule", "QuantileEstimate", "STANDARD", "SamplingPlan", "Scheme",
    "SingularParameterError", "StepSizeUnderflow", "TIGHT", "Tolerances", "Vasicek", "analytic_law",
    "doss_functional", "doss_rhs", "draw_germ", "evaluate_solution_at_node", "gauss_hermite_rule",
    "hermite_eval", "hermite_norm_sq", "integrate", "parseval_tail", "pce_eval", "pce_mean",
    "pce_sample", "pce_variance", "project", "sample_quantile", "vasicek_rr_law",
]

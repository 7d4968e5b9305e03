import math

import numpy as np
import pytest
from scipy.integrate import quad

from pce_sde.doss import (
    doss_functional,
    doss_rhs,
    evaluate_solution_at_node,
    solve_doss_ode,
    vasicek_gap_bound,
    vasicek_rr_law,
    vasicek_variance_gap,
)
from pce_sde.errors import PositivityViolation
from pce_sde.models import Cir, Gbm, Vasicek, analytic_law
from pce_sde.ode import TIGHT

GBM = Gbm(0.03, 0.15, 100.0, 1.0)
VAS = Vasicek(0.1, 0.2, 0.15, 110.0, 1.0)
CIR = Cir.with_dof(3, 0.2, 0.15, 110.0, 2.0)


def vasicek_node_oracle(m, xi):
    """Closed-form germ functional: the D-ODE is linear, solved by variation of constants."""
    decay = math.exp(-m.beta * m.T)
    integral, _ = quad(lambda s: math.sqrt(2 * s) * math.exp(m.beta * s), 0, m.T, epsabs=1e-14, epsrel=1e-13)
    mean = m.r0 * decay + m.alpha / m.beta * (1 - decay)
    return mean + m.sigma * xi * (math.sqrt(2 * m.T) - m.beta * decay * integral)


@pytest.mark.parametrize("model", [GBM, VAS, CIR])
def test_flow_starts_at_identity(model):
    fn = doss_functional(model)
    for x in (0.5, 1.0, 3.0):
        assert fn.h(x, 0.0) == x


def test_rhs_examples():
    assert doss_rhs(VAS, 0.7, 110.0, 0.0) == pytest.approx(0.1 - 0.2 * 110.0)
    d = math.sqrt(110.0)
    want = (CIR.alpha - CIR.beta * 110.0 - CIR.sigma ** 2 / 4) / (2 * d)
    assert doss_rhs(CIR, 0.3, d, 0.0) == pytest.approx(want, rel=1e-14)
    assert doss_rhs(GBM, 0.5, 100.0, 0.3) == pytest.approx((0.03 - 0.01125) * 100.0, rel=1e-14)
    with pytest.raises(ValueError):
        doss_rhs(VAS, -1.0, 1.0, 0.0)


def test_cir_initial_state_is_square_root():
    assert doss_functional(CIR).d0 == pytest.approx(math.sqrt(110.0))
    assert doss_functional(CIR).transform_out(3.0) == 9.0


@pytest.mark.parametrize("xi", [-2.0, -1.0, 0.0, 1.0, 2.0])
def test_gbm_node_matches_exact_solution(xi):
    exact = 100.0 * math.exp((0.03 - 0.01125) + 0.15 * math.sqrt(2.0) * xi)
    assert evaluate_solution_at_node(GBM, xi, TIGHT) == pytest.approx(exact, rel=5e-9)


@pytest.mark.parametrize("xi", [-2.5, -0.4, 0.0, 1.3, 3.0])
def test_vasicek_node_matches_closed_form(xi):
    assert evaluate_solution_at_node(VAS, xi, TIGHT) == pytest.approx(vasicek_node_oracle(VAS, xi), abs=1e-8)


def test_vasicek_zero_node_is_exact_mean():
    # TIGHT controls the local error to 1e-10 relative, about 9e-9 at this scale.
    assert evaluate_solution_at_node(VAS, 0.0, TIGHT) == pytest.approx(analytic_law(VAS).mean, abs=1e-8)


def test_rr_law_matches_oracle_and_gap():
    mean, var = vasicek_rr_law(VAS)
    slope = vasicek_node_oracle(VAS, 1.0) - vasicek_node_oracle(VAS, 0.0)
    assert var == pytest.approx(slope ** 2 / 2.0, rel=1e-10)
    assert mean == pytest.approx(analytic_law(VAS).mean, rel=1e-15)
    assert vasicek_variance_gap(VAS) == pytest.approx(6.7349e-2, abs=5e-7)


def test_gap_is_sigma_independent():
    gaps = [vasicek_variance_gap(Vasicek(0.1, 0.2, s, 110.0, 1.0)) for s in (0.15, 0.25, 0.3)]
    assert max(gaps) - min(gaps) < 1e-12


def test_gap_first_order_in_beta():
    for beta in (1e-5, 1e-4):
        m = Vasicek(0.1, beta, 0.15, 110.0, 1.0)
        gap = analytic_law(m).variance - vasicek_rr_law(m)[1]
        assert gap / vasicek_gap_bound(m) == pytest.approx(1.0, rel=1e-3)


def test_cir_positivity_guard():
    m = Cir.with_dof(3, 0.2, 0.3, 0.01, 2.0)
    with pytest.raises(PositivityViolation):
        evaluate_solution_at_node(m, -6.0)


def test_cir_positive_on_rule_nodes():
    from pce_sde.chaos import gauss_hermite_rule

    for s in (0.15, 0.25, 0.3):
        for x in gauss_hermite_rule(16).nodes:
            assert evaluate_solution_at_node(Cir.with_dof(3, 0.2, s, 110.0, 2.0), x) > 0


def test_solver_report_and_determinism():
    v1, sol = solve_doss_ode(CIR, 0.7)
    v2, _ = solve_doss_ode(CIR, 0.7)
    assert v1 == v2 and sol.steps_taken >= 1
    assert np.isfinite(v1)

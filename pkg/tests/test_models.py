import math

import numpy as np
import pytest
import scipy.stats as st
from scipy.integrate import quad

from pce_sde.errors import SingularParameterError
from pce_sde.models import Cir, Gbm, Vasicek, analytic_law


def test_vasicek_mean_example():
    law = analytic_law(Vasicek(0.1, 0.2, 0.15, 110.0, 1.0))
    assert law.mean == pytest.approx(110 * math.exp(-0.2) + 0.5 * (1 - math.exp(-0.2)), rel=1e-15)
    assert law.mean == pytest.approx(90.1510175, abs=1e-7)
    assert law.variance == pytest.approx(0.0225 / 0.4 * (1 - math.exp(-0.4)), rel=1e-14)


def test_gbm_law_against_scipy_lognormal():
    m = Gbm(0.03, 0.15, 100.0, 1.0)
    law = analytic_law(m)
    ref = st.lognorm(s=0.15, scale=100 * math.exp(0.03 - 0.01125))
    assert law.mean == pytest.approx(ref.mean(), rel=1e-13)
    assert law.variance == pytest.approx(ref.var(), rel=1e-12)
    for g in (0.01, 0.5, 0.99, 0.999):
        assert law.quantile(g) == pytest.approx(ref.ppf(g), rel=1e-12)
    x = np.linspace(60, 160, 9)
    np.testing.assert_allclose(law.pdf(x), ref.pdf(x), rtol=1e-11)
    np.testing.assert_allclose(law.cdf(x), ref.cdf(x), rtol=1e-11)


def test_cir_dof_construction():
    m = Cir.with_dof(3, 0.2, 0.15, 110.0, 2.0)
    assert m.alpha == pytest.approx(0.75 * 0.15 ** 2)
    assert m.dof == pytest.approx(3.0)
    assert m.positivity_flag
    assert not Cir(0.001, 0.2, 0.15, 110.0, 2.0).positivity_flag


def test_cir_moments_against_scipy_ncx2():
    m = Cir.with_dof(3, 0.2, 0.15, 110.0, 2.0)
    law = analytic_law(m)
    ref = st.ncx2(m.dof, m.noncentrality, scale=1 / m.scale)
    assert law.mean == pytest.approx(ref.mean(), rel=1e-12)
    assert law.variance == pytest.approx(ref.var(), rel=1e-10)
    x = np.linspace(law.mean - 4 * law.std, law.mean + 4 * law.std, 9)
    np.testing.assert_allclose(law.pdf(x), ref.pdf(x), rtol=1e-8)


def test_cir_pdf_integrates_to_one():
    law = analytic_law(Cir.with_dof(3, 0.2, 0.25, 110.0, 2.0))
    total, _ = quad(law.pdf, 0.0, law.mean + 40 * law.std, points=[law.mean], limit=200)
    assert total == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("model", [
    Gbm(0.03, 0.25, 100.0, 1.0),
    Vasicek(0.1, 0.2, 0.3, 110.0, 1.0),
    Cir.with_dof(3, 0.2, 0.15, 110.0, 2.0),
    Cir.with_dof(3, 0.002, 0.3, 110.0, 2.0),
])
def test_quantile_inverts_cdf(model):
    law = analytic_law(model)
    for x in np.linspace(law.mean - 2.5 * law.std, law.mean + 2.5 * law.std, 20):
        assert float(law.quantile(float(law.cdf(x)))) == pytest.approx(x, abs=1e-7)


def test_shared_mean_formula():
    v = analytic_law(Vasicek(0.1, 0.2, 0.15, 110.0, 2.0))
    c = analytic_law(Cir(0.1, 0.2, 0.15, 110.0, 2.0))
    assert v.mean == c.mean


@pytest.mark.parametrize("cls", [Vasicek, Cir])
def test_zero_beta_is_singular(cls):
    with pytest.raises(SingularParameterError):
        cls(0.1, 0.0, 0.15, 110.0, 1.0)


@pytest.mark.parametrize("kw", [{"sigma": 0.0}, {"T": -1.0}, {"s0": 0.0}, {"sigma": math.nan}])
def test_invalid_gbm(kw):
    args = dict(r=0.03, sigma=0.15, s0=100.0, T=1.0)
    args.update(kw)
    with pytest.raises(ValueError):
        Gbm(**args)


def test_negative_beta_rejected():
    with pytest.raises(ValueError):
        Vasicek(0.1, -0.2, 0.15, 110.0, 1.0)


def test_unknown_model():
    with pytest.raises(TypeError):
        analytic_law(object())

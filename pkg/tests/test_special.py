import math

import numpy as np
import pytest
import scipy.stats as st
from hypothesis import given
from hypothesis import strategies as st_h

from pce_sde.special import (
    noncentral_chi2_cdf,
    noncentral_chi2_pdf,
    noncentral_chi2_ppf,
    normal_cdf,
    normal_cdf_inv,
    normal_sf,
)


def bisect_ppf(u):
    """Independent normal quantile by bisection on math.erfc.

    Upper levels go through the lower tail by symmetry, since ``1 - u`` is
    exact there and the CDF near 1 has too little resolution.
    """
    if u > 0.5:
        return -bisect_ppf(1.0 - u)
    lo, hi = -40.0, 40.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        c = 0.5 * math.erfc(-mid / math.sqrt(2.0))
        if c < u:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@pytest.mark.parametrize("u", [1e-300, 1e-20, 1e-8, 0.001, 0.02425, 0.1, 0.5, 0.8, 0.975, 0.999999])
def test_inverse_cdf_against_bisection(u):
    assert normal_cdf_inv(u) == pytest.approx(bisect_ppf(u), rel=1e-13, abs=1e-14)


def test_inverse_cdf_upper_tail_against_scipy():
    u = np.array([0.6, 0.9, 0.99, 1 - 1e-8, 1 - 1e-15])
    np.testing.assert_allclose(normal_cdf_inv(u), st.norm.ppf(u), rtol=1e-12)


@given(st_h.floats(1e-12, 1 - 1e-12))
def test_round_trip(u):
    x = normal_cdf_inv(u)
    assert normal_cdf(x) == pytest.approx(u, rel=1e-12, abs=1e-15)


def test_symmetry_and_shape():
    u = np.linspace(0.01, 0.99, 11)
    np.testing.assert_allclose(normal_cdf_inv(u), -normal_cdf_inv(1 - u), atol=1e-13)
    assert normal_cdf_inv(0.5) == 0.0
    assert isinstance(normal_cdf_inv(0.3), float)
    assert normal_cdf_inv(u).shape == u.shape


@pytest.mark.parametrize("u", [0.0, 1.0, -0.1, math.nan])
def test_inverse_cdf_domain(u):
    with pytest.raises(ValueError):
        normal_cdf_inv(u)


def test_normal_cdf_tails():
    assert normal_cdf(-30.0) == pytest.approx(st.norm.cdf(-30.0), rel=1e-12)
    assert normal_sf(30.0) == pytest.approx(st.norm.sf(30.0), rel=1e-12)


CASES = [(3.0, 0.0), (3.0, 7.2), (1.0, 0.3), (2.5, 10.0), (3.0, 7952.0), (3.0, 9760.0)]


@pytest.mark.parametrize("q,lam", CASES)
def test_ncx2_cdf_and_pdf_against_scipy(q, lam):
    sd = math.sqrt(2 * (q + 2 * lam))
    x = np.linspace(max(1e-3, q + lam - 6 * sd), q + lam + 6 * sd, 13)
    np.testing.assert_allclose(noncentral_chi2_cdf(x, q, lam), st.ncx2.cdf(x, q, lam) if lam else st.chi2.cdf(x, q),
                               atol=1e-9)
    want = st.ncx2.pdf(x, q, lam) if lam else st.chi2.pdf(x, q)
    np.testing.assert_allclose(noncentral_chi2_pdf(x, q, lam), want, rtol=1e-8)


@pytest.mark.parametrize("q,lam", CASES)
def test_ncx2_ppf_round_trip(q, lam):
    for u in (0.01, 0.5, 0.99, 0.999):
        x = noncentral_chi2_ppf(u, q, lam)
        assert noncentral_chi2_cdf(x, q, lam) == pytest.approx(u, abs=1e-9)


def test_ncx2_non_positive_support():
    assert noncentral_chi2_cdf(-1.0, 3.0, 2.0) == 0.0
    assert noncentral_chi2_pdf(0.0, 3.0, 2.0) == 0.0


@pytest.mark.parametrize("q,lam", [(0.0, 1.0), (3.0, -1.0)])
def test_ncx2_parameter_checks(q, lam):
    with pytest.raises(ValueError):
        noncentral_chi2_cdf(1.0, q, lam)

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.polynomial import hermite as H

from pce_sde.chaos import HermiteBasis, QuadratureRule, gauss_hermite_rule, hermite_eval, hermite_norm_sq


def gaussian_moment(k):
    """E[X^k] for X ~ N(0, 1/2)."""
    if k % 2:
        return 0.0
    m = k // 2
    return math.prod(range(1, 2 * m, 2)) / 2.0 ** m


def gaussian_abs_moment(k):
    """E[|X|^k] for X ~ N(0, 1/2), the scale used for odd (zero) moments."""
    return math.gamma((k + 1) / 2) / math.sqrt(math.pi)


@pytest.mark.parametrize("i", range(0, 12))
def test_hermite_eval_matches_numpy(i):
    x = np.linspace(-4, 4, 33)
    coef = np.zeros(i + 1)
    coef[i] = 1.0
    np.testing.assert_allclose(hermite_eval(i, x), H.hermval(x, coef), rtol=1e-12, atol=1e-9)


def test_low_degree_closed_forms():
    assert hermite_eval(0, 0.3) == 1.0
    assert hermite_eval(1, 0.3) == pytest.approx(0.6)
    assert hermite_eval(2, 0.5) == pytest.approx(-1.0)
    assert hermite_eval(3, 1.0) == pytest.approx(-4.0)


def test_scalar_in_scalar_out():
    assert isinstance(hermite_eval(4, 0.2), float)


def test_norms():
    assert [hermite_norm_sq(i) for i in range(5)] == [1.0, 2.0, 8.0, 48.0, 384.0]
    assert hermite_norm_sq(200) == math.inf


def test_negative_degree_rejected():
    with pytest.raises(ValueError):
        hermite_eval(-1, 0.0)
    with pytest.raises(ValueError):
        hermite_norm_sq(-1)


def test_basis_bounds_and_eval_all():
    b = HermiteBasis(5)
    with pytest.raises(ValueError):
        b.eval(6, 0.1)
    x = np.array([-1.0, 0.0, 0.7])
    table = b.eval_all(x)
    assert table.shape == (6, 3)
    for i in range(6):
        np.testing.assert_allclose(table[i], hermite_eval(i, x), rtol=1e-14)
    with pytest.raises(ValueError):
        HermiteBasis(-1)


def test_orthogonality_under_rule():
    b = HermiteBasis(10)
    rule = gauss_hermite_rule(12)
    psi = b.eval_all(rule.nodes)
    gram = (psi * rule.weights) @ psi.T
    np.testing.assert_allclose(gram, np.diag(b.norms_sq()), atol=1e-8 * gram.max())


@pytest.mark.parametrize("n", [1, 2, 3, 8, 20, 40, 64])
def test_rule_matches_numpy_hermgauss(n):
    rule = gauss_hermite_rule(n)
    x, w = H.hermgauss(n)
    np.testing.assert_allclose(rule.nodes, x, atol=1e-12)
    np.testing.assert_allclose(rule.weights, w / math.sqrt(math.pi), rtol=1e-11)


@given(st.integers(1, 64))
def test_rule_invariants(n):
    rule = gauss_hermite_rule(n)
    assert rule.size == n
    assert np.all(np.diff(rule.nodes) > 0)
    assert np.all(rule.weights > 0)
    assert abs(rule.weights.sum() - 1.0) < 1e-13
    np.testing.assert_allclose(rule.nodes, -rule.nodes[::-1], atol=1e-12)
    np.testing.assert_allclose(rule.weights, rule.weights[::-1], rtol=1e-12)


def test_single_node_rule():
    rule = gauss_hermite_rule(1)
    assert rule.nodes.tolist() == [0.0] and rule.weights.tolist() == [1.0]


@pytest.mark.parametrize("n", [0, 65, 2.5])
def test_rule_size_bounds(n):
    with pytest.raises(ValueError):
        gauss_hermite_rule(n)


@given(st.integers(1, 20), st.data())
def test_exact_for_degree_2n_minus_1(n, data):
    k = data.draw(st.integers(0, 2 * n - 1))
    rule = gauss_hermite_rule(n)
    got = rule.expect(rule.nodes ** k)
    want = gaussian_moment(k)
    assert abs(got - want) <= 1e-10 * (abs(want) if k % 2 == 0 else gaussian_abs_moment(k))


def test_rule_arrays_are_read_only():
    rule = gauss_hermite_rule(4)
    with pytest.raises(ValueError):
        rule.nodes[0] = 1.0
    with pytest.raises(ValueError):
        QuadratureRule([0.0, 1.0], [1.0])

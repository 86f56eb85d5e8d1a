import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import gamma as G

from iglab.jets import Jet, jet_hermite
from iglab.quad import QuadratureConfig, endpoint_rule, gauss_legendre, half_line_rule, panels
from iglab.special import hermite


def test_quadrature_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(node_count=4)
    with pytest.raises(ValueError):
        QuadratureConfig(truncation=0.5)
    with pytest.raises(ValueError):
        QuadratureConfig(singularity_exponent_handling="Other")
    assert QuadratureConfig().node_count == 200


def test_gauss_legendre_exactness():
    x, w = gauss_legendre(-1.0, 3.0, 8)
    assert np.sum(w * x ** 15) == pytest.approx((3 ** 16 - 1) / 16, rel=1e-13)
    x, w = panels(np.array([0.0, 1.0, 3.0]), 10)
    assert np.sum(w * np.exp(x)) == pytest.approx(math.e ** 3 - 1, rel=1e-14)


def test_half_line_rule_with_sqrt_singularity():
    q = QuadratureConfig(node_count=30)
    t, w = half_line_rule(1.0, q)
    assert np.sum(w * np.exp(-t) / np.sqrt(t)) == pytest.approx(math.sqrt(math.pi), rel=1e-12)
    t, w = half_line_rule(1.0, q, tail=True)
    assert np.sum(w / (1 + t) ** 2) == pytest.approx(1.0, rel=1e-10)


@pytest.mark.parametrize("handling", ["Substitution", "JacobiWeighted"])
@pytest.mark.parametrize("gamma", [0.3, 0.5, 0.7, 1.0])
def test_endpoint_rule(handling, gamma):
    q = QuadratureConfig(node_count=30, singularity_exponent_handling=handling)
    s, w = endpoint_rule(gamma, 0.5, q)
    assert np.sum(w * np.exp(-s)) == pytest.approx(G(gamma), rel=1e-10)
    with pytest.raises(ValueError):
        endpoint_rule(0.0)


def _mp_derivs(f, t0, K):
    with mp.workdps(30):
        return [float(mp.diff(f, mp.mpf(t0), k)) for k in range(K + 1)]


def test_jet_composition_against_mpmath():
    t0, K = 0.7, 5
    tj = Jet.variable(t0, K)
    a = (-tj).exp()
    b = 1.0 - (tj * -2.0).exp()
    expr = (a * 0.4 - 1.1) ** 2.0 / b + b ** -0.5 * 3.0
    ref = _mp_derivs(lambda t: (mp.e ** -t * 0.4 - 1.1) ** 2 / (1 - mp.e ** (-2 * t))
                     + 3 * (1 - mp.e ** (-2 * t)) ** -0.5, t0, K)
    assert np.allclose(expr.derivatives(), ref, rtol=1e-11)


def test_jet_hermite_chain_rule():
    t0, K = 0.3, 4
    tj = Jet.variable(t0, K)
    z = tj * 2.0 + 0.5
    h = jet_hermite(3, z)
    ref = _mp_derivs(lambda t: 8 * (2 * t + 0.5) ** 3 - 12 * (2 * t + 0.5), t0, K)
    assert np.allclose(h.derivatives(), ref, rtol=1e-12, atol=1e-12)
    assert float(jet_hermite(0, z).c[0]) == 1.0


def test_jet_array_interop():
    tj = Jet.variable(np.array([0.1, 0.2]), 2)
    out = np.array([1.0, 2.0]) - tj
    assert isinstance(out, Jet)
    assert np.allclose(out.c[0], [0.9, 1.8]) and np.allclose(out.c[1], [-1, -1])
    q = 1.0 / tj
    assert np.allclose(q.derivative(1), -1 / np.array([0.1, 0.2]) ** 2)
    d = (tj * tj) / tj
    assert np.allclose(d.c[1], 1.0)
    c = Jet.constant(2.0, 3)
    assert c.order == 3 and float(c.derivative(1)) == 0.0


@given(st.floats(-2, 2), st.integers(0, 8))
def test_jet_hermite_value(z0, k):
    assert float(jet_hermite(k, Jet.variable(z0, 1)).c[0]) == pytest.approx(hermite(k, z0), rel=1e-12, abs=1e-9)

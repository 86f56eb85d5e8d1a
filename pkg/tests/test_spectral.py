import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from iglab import kernels as K
from iglab.measure import grid_function, lp_norm
from iglab.spectral import (ConjA, DxA, ExpansionError, FracHeatA, FracPoissonA, HeatA, PoissonA,
                            RieszA, SpectralFunction, apply_spectral, evaluate, expand, htilde,
                            htilde_norm_sq, multi_indices)


def test_norm_examples():
    assert htilde_norm_sq((0,)) == pytest.approx(math.pi)
    assert htilde_norm_sq((1,)) == pytest.approx(2 * math.pi)
    assert htilde_norm_sq((1, 2)) == pytest.approx(16 * math.pi ** 2)


@pytest.mark.parametrize("k", [(0,), (1,), (3,), (1, 2), (0, 2)])
def test_norm_by_quadrature(k):
    n = len(k)
    g = grid_function(lambda x: htilde(k, x), n, 90 if n == 1 else 60)
    assert lp_norm(g, 2) ** 2 == pytest.approx(htilde_norm_sq(k), rel=1e-8)


def test_expand_orthogonality():
    for j in multi_indices(2, 5):
        f = expand(lambda x: htilde(j, x), 2, 5)
        for k, c in f.terms.items():
            assert abs(c - (1.0 if k == j else 0.0)) < 1e-9


def test_expand_examples():
    f = expand(lambda x: 3 * htilde((0,), x) - 2 * htilde((2,), x), 1, 6)
    assert f.coeff((0,)) == pytest.approx(3, abs=1e-12)
    assert f.coeff((2,)) == pytest.approx(-2, abs=1e-12)
    g = expand(lambda x: x[:, 0] * np.exp(-x[:, 0] ** 2), 1, 4)
    assert g.coeff((1,)) == pytest.approx(0.5, abs=1e-12)
    assert abs(g.coeff((3,))) < 1e-12


def test_expand_grid_function_route():
    gf = grid_function(lambda x: htilde((2,), x) + 0.5 * htilde((0,), x), 1, 120)
    f = expand(gf, 1, 4)
    assert f.coeff((2,)) == pytest.approx(1.0, abs=1e-8)
    assert f.coeff((0,)) == pytest.approx(0.5, abs=1e-8)


def test_expand_residual_check():
    with pytest.raises(ExpansionError):
        expand(lambda x: np.exp(-np.sum(x * x, 1)) * np.sign(x[:, 0]), 1, 4, check_tol=1e-6)


def test_evaluate_examples():
    assert evaluate(SpectralFunction.basis((0,)), 0.0) == pytest.approx(1.0)
    assert float(evaluate(SpectralFunction.basis((1,)), np.array([0.5]))[0]) == pytest.approx(
        2 * 0.5 * math.exp(-0.25))
    assert evaluate(SpectralFunction.basis((1, 1)), np.array([1.0, 2.0])) == pytest.approx(8 * math.exp(-5))


@pytest.mark.parametrize("n,deg", [(1, 8), (2, 8), (3, 4)])
def test_roundtrip(n, deg, rng):
    coeffs = {k: rng.uniform(-1, 1) for k in multi_indices(n, deg)}
    f = SpectralFunction(n, coeffs, deg)
    g = expand(f, n, deg)
    assert max(abs(g.coeff(k) - c) for k, c in coeffs.items()) < 1e-8


def test_eigenrelation_symbolic():
    # A = -1/2 Laplacian - x . grad applied to H~_k gives (|k| + n) H~_k
    x, y = sp.symbols("x y")
    for k in [(0, 0), (1, 0), (2, 1), (3, 2)]:
        f = sp.hermite(k[0], x) * sp.hermite(k[1], y) * sp.exp(-x ** 2 - y ** 2)
        Af = -sp.Rational(1, 2) * (sp.diff(f, x, 2) + sp.diff(f, y, 2)) - x * sp.diff(f, x) - y * sp.diff(f, y)
        assert sp.simplify(Af - (sum(k) + 2) * f) == 0


def test_heat_example_and_semigroup():
    f = SpectralFunction.basis((0,))
    assert apply_spectral(HeatA(0.7), f).coeff((0,)) == pytest.approx(math.exp(-0.7))
    g = SpectralFunction(2, {(1, 0): 1.0, (0, 3): -2.0, (2, 2): 0.5}, 4)
    a = apply_spectral(HeatA(0.3), apply_spectral(HeatA(0.4), g))
    b = apply_spectral(HeatA(0.7), g)
    for k in g.terms:
        assert a.coeff(k) == pytest.approx(b.coeff(k), rel=1e-14)


def test_conj_is_not_poisson_of_riesz():
    f = SpectralFunction.basis((0,))
    c = apply_spectral(ConjA(1, 1.0), f).coeff((1,))
    pr = apply_spectral(PoissonA(1.0), apply_spectral(RieszA(1), f)).coeff((1,))
    assert c == pytest.approx(-math.exp(-1.0))
    assert pr == pytest.approx(-math.exp(-math.sqrt(2)))
    assert abs(c - pr) > 0.1


def test_riesz_sign_and_shift():
    f = SpectralFunction.basis((1, 2))
    r = apply_spectral(RieszA(2), f)
    assert r.terms == {(1, 3): pytest.approx(-1 / math.sqrt(5))}
    with pytest.raises(ValueError):
        apply_spectral(RieszA(3), f)
    with pytest.raises(ValueError):
        apply_spectral(HeatA(0.0), f)


def test_riesz_sum_of_squares_euclidean_form():
    # closed-form Euclidean kernels: sum_i K_i(x, y)^2 = (sqrt2 c_n)^2 / |x - y|^{2n}
    rng = np.random.default_rng(3)
    x, y = rng.uniform(-2, 2, (20, 3)), rng.uniform(-2, 2, (20, 3))
    ks = np.stack([K.riesz_kernel_euclid_closed(i, x, y) for i in (1, 2, 3)])
    r = np.linalg.norm(x - y, axis=1)
    c = math.sqrt(2) * K.riesz_constant(3)
    assert np.allclose(np.sum(ks ** 2, axis=0), (c / r ** 3) ** 2)


def test_riesz_composition_multiplier_algebra():
    # R_i R_i H~_k = H~_{k+2e_i} / sqrt(lam (lam + 1)), lam = n + |k|
    n = 2
    f = SpectralFunction(n, {(0, 0): 1.0, (1, 1): 0.4}, 2)
    for k, c in f.terms.items():
        lam = n + sum(k)
        for i in (1, 2):
            rr = apply_spectral(RieszA(i), apply_spectral(RieszA(i), SpectralFunction(n, {k: c}, 2)))
            kk = list(k)
            kk[i - 1] += 2
            assert rr.coeff(tuple(kk)) == pytest.approx(c / math.sqrt(lam * (lam + 1)))


def test_frac_ops():
    f = SpectralFunction.basis((2,))
    lam, t = 3.0, 0.8
    assert apply_spectral(FracHeatA(0.5, t), f).coeff((2,)) == pytest.approx(
        -math.exp(-t * lam) * (lam * t) ** 0.5)
    r = math.sqrt(lam)
    assert apply_spectral(FracPoissonA(1.0, t), f).coeff((2,)) == pytest.approx(-math.exp(-t * r) * r * t)
    assert apply_spectral(FracHeatA(0.0, t), f).coeff((2,)) == pytest.approx(math.exp(-t * lam))


def test_dx_identity_numerically():
    h = 1e-5
    for k in [(0,), (2,), (1, 1), (0, 3)]:
        n = len(k)
        rng = np.random.default_rng(sum(k))
        x = rng.uniform(-1.5, 1.5, (10, n))
        for i in range(n):
            e = np.zeros(n)
            e[i] = h
            fd = (htilde(k, x + e) - htilde(k, x - e)) / (2 * h)
            ref = evaluate(apply_spectral(DxA(i + 1), SpectralFunction.basis(k)), x)
            kk = list(k)
            kk[i] += 1
            assert np.allclose(ref, -htilde(tuple(kk), x))
            assert np.max(np.abs(fd - ref)) <= 1e-6 * np.max(np.abs(ref))


def test_conj_limit_spectral(rng):
    f = SpectralFunction(1, {(k,): rng.uniform(-1, 1) for k in range(7)}, 6)
    x = np.linspace(-2, 2, 41)
    ref = evaluate(apply_spectral(RieszA(1), f), x)
    got = evaluate(apply_spectral(ConjA(1, 1e-4), f), x)
    assert np.max(np.abs(got - ref)) / np.max(np.abs(ref)) < 1e-3


def test_kernel_spectral_agreement():
    x = np.linspace(-2, 2, 9)[:, None]
    for k in range(5):
        g = lambda y, k=k: SpectralFunction.basis((k,)).gaussian_factor(y)
        got = K.heat_A_apply(np.array([0.6]), g, x, gh_count=12)[0]
        ref = evaluate(apply_spectral(HeatA(0.6), SpectralFunction.basis((k,))), x)
        assert np.max(np.abs(got - ref)) <= 1e-7 * np.max(np.abs(ref))


def test_parseval(rng):
    f = SpectralFunction(1, {(k,): rng.uniform(-1, 1) for k in range(6)}, 5)
    g = grid_function(lambda x: evaluate(f, x), 1, 120)
    assert lp_norm(g, 2) == pytest.approx(f.l2_norm(), rel=1e-8)


def test_csv_roundtrip(tmp_path):
    f = SpectralFunction(2, {(0, 1): 0.25, (2, 0): -1.5}, 2)
    p = tmp_path / "f.csv"
    f.to_csv(p)
    g = SpectralFunction.from_csv(p)
    assert g.terms == f.terms and g.n == 2
    assert p.read_text().splitlines()[0] == "k_1,k_2,coeff"


def test_validation():
    with pytest.raises(ValueError):
        SpectralFunction(2, {(1,): 1.0}, 3)
    with pytest.raises(ValueError):
        SpectralFunction(1, {(5,): 1.0}, 3)


@given(st.floats(0.01, 3), st.floats(0.01, 3), st.integers(0, 8))
def test_poisson_semigroup(s, t, k):
    f = SpectralFunction.basis((k,))
    a = apply_spectral(PoissonA(s), apply_spectral(PoissonA(t), f)).coeff((k,))
    assert a == pytest.approx(apply_spectral(PoissonA(s + t), f).coeff((k,)), rel=1e-12)

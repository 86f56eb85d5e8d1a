import math

import numpy as np
import pytest
from scipy import integrate

from iglab import kernels as K
from iglab.kernels import Family, KernelError, KernelSpec
from iglab.quad import QuadratureConfig

from _oracles import mehler_mp, mp_time_derivative, ou_mp

Q40 = QuadratureConfig(node_count=40)


def f0(v):
    return float(np.ravel(v)[0])


def test_heat_A_concentrates():
    x, y = np.array([0.3]), np.array([0.8])
    v3, v4 = float(K.heat_kernel_A(1e-3, x, y)), float(K.heat_kernel_A(1e-4, x, y))
    assert 0 <= v4 < v3 < 1e-50


def test_detailed_balance(rng):
    t = rng.uniform(0.05, 3, 100)
    x, y = rng.uniform(-2, 2, (100, 2)), rng.uniform(-2, 2, (100, 2))
    lhs = K.heat_kernel_A(t, x, y) * np.exp(np.sum(x * x, 1))
    rhs = K.heat_kernel_A(t, y, x) * np.exp(np.sum(y * y, 1))
    assert np.max(np.abs(lhs / rhs - 1)) < 1e-12


def test_heat_A_on_gaussian():
    val, _ = integrate.quad(lambda y: float(K.heat_kernel_A(0.5, [0.7], [y])) * math.exp(-y * y),
                            -np.inf, np.inf, epsabs=0, epsrel=1e-12)
    assert val == pytest.approx(math.exp(-0.5) * math.exp(-0.49), rel=1e-8)


def test_chapman_kolmogorov():
    s, t, x, y = 0.3, 0.7, 0.4, -0.9
    f = lambda u: float(K.heat_kernel_A(s, [x], [u]) * K.heat_kernel_A(t, [u], [y]))
    val, _ = integrate.quad(f, -np.inf, np.inf, epsabs=0, epsrel=1e-12)
    assert val == pytest.approx(float(K.heat_kernel_A(s + t, [x], [y])), rel=1e-7)


def test_heat_euclid_examples():
    assert float(K.heat_kernel_euclid(1 / (2 * math.pi), [0.0])) == pytest.approx(1.0)
    mass, _ = integrate.quad(lambda z: float(K.heat_kernel_euclid(0.3, [z])), -np.inf, np.inf)
    assert mass == pytest.approx(1.0, rel=1e-10)
    conv, _ = integrate.quad(lambda u: float(K.heat_kernel_euclid(0.3, [0.5 - u])
                                             * K.heat_kernel_euclid(0.7, [u + 0.2])), -np.inf, np.inf,
                             epsrel=1e-12)
    assert conv == pytest.approx(float(K.heat_kernel_euclid(1.0, [0.7])), rel=1e-8)


def test_poisson_examples():
    assert float(K.poisson_kernel_classical(1.0, [0.0])) == pytest.approx(1 / math.pi)
    mass, _ = integrate.quad(lambda z: float(K.poisson_kernel_euclid(0.4, [z])), -np.inf, np.inf,
                             epsrel=1e-12)
    assert mass == pytest.approx(1.0, rel=1e-8)


@pytest.mark.parametrize("t,z", [(0.4, [0.3]), (1.7, [1.2]), (0.9, [0.5, -0.4])])
def test_poisson_euclid_subordination(t, z):
    z = np.array(z)
    T = lambda u: float(K.heat_kernel_euclid(u, z))
    f = lambda u: t / (2 * math.sqrt(math.pi)) * math.exp(-t * t / (4 * u)) * u ** -1.5 * T(u)
    ref = sum(integrate.quad(f, a, b, epsabs=0, epsrel=1e-13, limit=200)[0]
              for a, b in [(0, t * t), (t * t, 10 * (1 + t * t)), (10 * (1 + t * t), np.inf)])
    assert float(K.poisson_kernel_euclid(t, z)) == pytest.approx(ref, rel=1e-7)
    assert float(K.poisson_subordinated_euclid(t, z, Q40)) == pytest.approx(ref, rel=1e-7)


def test_poisson_A_routes_agree(rng):
    for _ in range(5):
        t = float(rng.uniform(0.2, 2))
        x, y = rng.uniform(-1.5, 1.5, (1, 2)), rng.uniform(-1.5, 1.5, (1, 2))
        u = K.poisson_kernel_A(t, x, y, Q40, "u")
        v = K.poisson_kernel_A(t, x, y, Q40, "v")
        assert float(u[0]) == pytest.approx(float(v[0]), rel=1e-7)
    with pytest.raises(ValueError):
        K.poisson_kernel_A(1.0, x, y, Q40, "w")


@pytest.mark.parametrize("fun", [lambda t: K.heat_kernel_euclid(t, [0.0]),
                                 lambda t: K.poisson_kernel_classical(t, [0.0]),
                                 lambda t: K.heat_kernel_A(t, [0.0], [0.0])])
def test_nonpositive_time_rejected(fun):
    for t in (0.0, -1.0):
        with pytest.raises(KernelError):
            fun(t)


def test_teuwen_order_zero_and_fd():
    t, x, y = 0.6, np.array([0.9]), np.array([-0.4])
    assert float(K.teuwen_dt_ou(0, t, x, y)) == pytest.approx(float(K.ou_kernel(t, x, y)), rel=1e-14)
    h = 1e-4
    fd = (K.ou_kernel(t + h, x, y) - K.ou_kernel(t - h, x, y)) / (2 * h)
    assert float(K.teuwen_dt_ou(1, t, x, y)) == pytest.approx(float(fd), rel=1e-6)


def test_teuwen_k3_n2_fd(rng):
    for _ in range(5):
        t = float(rng.uniform(0.3, 1.5))
        x, y = rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2)
        ref = mp_time_derivative(lambda s: ou_mp(s, x, y), t, 3)
        assert float(K.teuwen_dt_ou(3, t, x, y)) == pytest.approx(ref, rel=1e-5)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_heat_A_dt_matches_mpmath(n, rng):
    for _ in range(6):
        t = float(rng.uniform(0.2, 2.0))
        x, y = rng.uniform(-1.5, 1.5, n), rng.uniform(-1.5, 1.5, n)
        for k in range(5):
            ref = mp_time_derivative(lambda s: mehler_mp(s, x, y), t, k)
            scale = float(K.heat_kernel_A(t, x, y))
            got = float(K.heat_A_dt(k, t, x, y))
            assert abs(got - ref) <= 1e-9 * max(abs(ref), scale)


def test_first_derivative_bracket_formula(rng):
    for _ in range(50):
        n = int(rng.integers(1, 4))
        t = float(rng.uniform(0.1, 3))
        x, y = rng.uniform(-2, 2, n), rng.uniform(-2, 2, n)
        a = math.exp(-t)
        b = 1 - a * a
        d2 = float(np.sum((x - a * y) ** 2))
        bracket = n + 2 * a * float(np.dot(y, x - a * y)) - 2 * a * a / b * d2
        ref = -bracket / math.pi ** (n / 2) * math.exp(-n * t) / b ** (n / 2 + 1) * math.exp(-d2 / b)
        assert float(K.heat_A_dt(1, t, x, y)) == pytest.approx(ref, rel=1e-10, abs=1e-300)


def test_heat_A_dt_order_zero_and_limit():
    t, x, y = 0.8, np.array([0.2, 0.1]), np.array([-0.5, 0.3])
    assert float(K.heat_A_dt(0, t, x, y)) == pytest.approx(float(K.heat_kernel_A(t, x, y)), rel=1e-13)
    with pytest.raises(KernelError):
        K.teuwen_dt_ou(7, t, x, y)
    assert np.isfinite(K.teuwen_dt_ou(7, t, x, y, max_order=8))


def test_spatial_derivative_matches_fd():
    t, x, y, h = 0.7, np.array([0.3, -0.2]), np.array([0.9, 0.4]), 1e-6
    for i in (1, 2):
        e = np.eye(2)[i - 1] * h
        fd = (K.heat_kernel_A(t, x + e, y) - K.heat_kernel_A(t, x - e, y)) / (2 * h)
        assert float(K.heat_A_dx(i, t, x, y)) == pytest.approx(float(fd), rel=1e-7)
        fd = (K.heat_kernel_euclid(t, x + e - y) - K.heat_kernel_euclid(t, x - e - y)) / (2 * h)
        assert float(K.heat_euclid_dx(i, t, x, y)) == pytest.approx(float(fd), rel=1e-7)


def test_riesz_euclid_closed_form_n1():
    x, y = np.array([[2.5]]), np.array([[0.5]])
    # -sqrt(2) c_1 z / |z|^2 with c_1 = 1/pi, z = 2
    assert float(K.riesz_kernel_euclid_closed(1, x, y)[0]) == pytest.approx(
        -math.sqrt(2) / (2 * math.pi), rel=1e-12)
    q = K.riesz_kernel(KernelSpec("RieszEuclid", 1, 1), x, y, Q40)
    assert float(q[0]) == pytest.approx(-math.sqrt(2) / (2 * math.pi), rel=1e-8)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_riesz_quadrature_vs_closed_form(n, rng):
    x, y = rng.uniform(-2, 2, (30, n)), rng.uniform(-2, 2, (30, n))
    for i in range(1, n + 1):
        spec = KernelSpec("RieszEuclid", n, i)
        got = K.riesz_kernel(spec, x, y, Q40)
        ref = K.riesz_kernel_euclid_closed(i, x, y)
        assert np.max(np.abs(got - ref) / np.abs(ref)) < 1e-8
        # antisymmetry
        assert np.allclose(K.riesz_kernel_euclid_closed(i, y, x), -ref, rtol=1e-13)


def test_riesz_A_antisymmetry_is_weighted(rng):
    # R^A(x,y) e^{-|y|^2} is odd under x <-> y up to the weight; check the sign structure on a few pairs
    x, y = rng.uniform(-1, 1, (10, 1)), rng.uniform(-1, 1, (10, 1))
    keep = np.abs(x - y)[:, 0] > 0.1
    ra = K.riesz_kernel(KernelSpec("RieszA", 1, 1), x[keep], y[keep], Q40)
    assert np.all(np.sign(ra) == -np.sign((x - y)[keep][:, 0]))


def test_riesz_singular_diagonal():
    with pytest.raises(KernelError):
        K.riesz_kernel(KernelSpec("RieszA", 1, 1), np.array([[0.2]]), np.array([[0.2]]), Q40)
    with pytest.raises(KernelError):
        K.riesz_kernel_euclid_closed(1, np.array([[0.2]]), np.array([[0.2]]))


def test_conj_euclid_quadrature_and_decay(rng):
    x, y = rng.uniform(-2, 2, (10, 2)), rng.uniform(-2, 2, (10, 2))
    spec = KernelSpec("ConjEuclid", 2, 1)
    for t in (0.1, 1.0, 3.0):
        got = K.conjugation_kernel(spec, t, x, y, Q40, closed=False)
        ref = K.conj_kernel_euclid_closed(1, t, x, y)
        assert np.max(np.abs(got - ref) / np.abs(ref)) < 1e-8
    # decay like t^{-(n+1)}
    xx, yy = np.array([[0.4, 0.0]]), np.array([[0.0, 0.0]])
    r = float(K.conj_kernel_euclid_closed(1, 10.0, xx, yy)[0] / K.conj_kernel_euclid_closed(1, 20.0, xx, yy)[0])
    assert r == pytest.approx(8.0, rel=1e-2)


def test_conj_A_tends_to_riesz_A(rng):
    x, y = rng.uniform(-2, 2, (10, 1)), rng.uniform(-2, 2, (10, 1))
    keep = np.abs(x - y)[:, 0] > 0.2
    ra = K.riesz_kernel(KernelSpec("RieszA", 1, 1), x[keep], y[keep], Q40)
    errs = []
    for t in (1e-2, 1e-3, 1e-4):
        ca = K.conjugation_kernel(KernelSpec("ConjA", 1, 1), t, x[keep], y[keep], Q40)
        errs.append(np.max(np.abs(ca - ra) / np.abs(ra)))
    assert errs[0] > errs[1] > errs[2]
    assert errs[1] < 1e-5
    assert errs[2] < 1e-6


def test_kernel_spec_validation():
    with pytest.raises(ValueError):
        KernelSpec("RieszA", 2)
    with pytest.raises(ValueError):
        KernelSpec("HeatA", 2, 1)
    with pytest.raises(ValueError):
        KernelSpec("ConjA", 2, 3)
    with pytest.raises(ValueError):
        KernelSpec("Nope", 1)
    assert KernelSpec("RieszA", 2, 2).axis == 1


def test_kernel_value_dispatch():
    x, y = np.array([[0.4]]), np.array([[-0.3]])
    for fam in Family:
        comp = 1 if fam.value.startswith(("Riesz", "Conj")) else None
        v = K.kernel_value(KernelSpec(fam, 1, comp), 0.5, x, y, Q40)
        assert np.all(np.isfinite(v))
    assert f0(K.kernel_value(KernelSpec("PoissonEuclid", 1), 0.5, x, y)) > 0
    assert f0(K.kernel_value(KernelSpec("PoissonA", 1), 0.5, x, y, Q40)) > 0


def test_classical_helpers_relation():
    x, y = np.array([[0.7, 0.1]]), np.array([[0.0, 0.3]])
    assert f0(K.riesz_kernel_euclid_closed(2, x, y)) == pytest.approx(
        -math.sqrt(2) * f0(K.riesz_kernel_classical(2, x, y)))
    t = 0.6
    assert f0(K.conj_kernel_euclid_closed(1, t, x, y)) == pytest.approx(
        -math.sqrt(2) * f0(K.conj_kernel_classical(1, t / math.sqrt(2), x, y)))

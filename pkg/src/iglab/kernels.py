"""Kernels of the inverse-Gaussian semigroups and their Euclidean companions.

All kernels act against Lebesgue measure dy.  The 'Euclid' families are the
objects produced from T_t(z) = (2 pi t)^{-n/2} e^{-|z|^2/2t} by the same
integral formulas that define their inverse-Gaussian counterparts; the
textbook normalisations (generated by -Laplacian) are available through the
*_classical helpers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy.special import gammaln

from .quad import DEFAULT_QUAD, QuadratureConfig, half_line_rule
from .special import compositions, hermite_all, multinomial, stirling2

__all__ = [
    "Family", "KernelSpec", "QuadratureConfig", "KernelError",
    "heat_kernel_A", "ou_kernel", "heat_kernel_euclid",
    "poisson_kernel_classical", "poisson_kernel_euclid", "poisson_kernel_A",
    "poisson_subordinated_euclid", "teuwen_dt_ou", "heat_A_dt", "heat_A_dx",
    "heat_euclid_dx", "riesz_kernel", "riesz_kernel_euclid_closed",
    "riesz_kernel_classical", "conjugation_kernel", "conj_kernel_euclid_closed",
    "conj_kernel_classical", "kernel_value", "heat_A_apply", "heat_A_dx_apply",
    "poisson_A_apply", "riesz_A_apply", "conj_A_apply", "riesz_constant",
]

TEUWEN_MAX_ORDER = 6


class KernelError(ValueError):
    pass


class Family(str, Enum):
    HeatA = "HeatA"
    HeatEuclid = "HeatEuclid"
    PoissonA = "PoissonA"
    PoissonEuclid = "PoissonEuclid"
    RieszA = "RieszA"
    RieszEuclid = "RieszEuclid"
    ConjA = "ConjA"
    ConjEuclid = "ConjEuclid"


_COMPONENT_FAMILIES = {Family.RieszA, Family.RieszEuclid, Family.ConjA, Family.ConjEuclid}


@dataclass(frozen=True)
class KernelSpec:
    family: Family
    n: int
    component: Optional[int] = None  # axis index i, 1-based

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        if self.n < 1:
            raise ValueError("dimension must be >= 1")
        needs = fam in _COMPONENT_FAMILIES
        if needs and self.component is None:
            raise ValueError(f"{fam.value} needs a component index")
        if not needs and self.component is not None:
            raise ValueError(f"{fam.value} takes no component index")
        if needs and not 1 <= self.component <= self.n:
            raise ValueError(f"component must lie in 1..{self.n}")

    @property
    def axis(self) -> int:
        return self.component - 1


def _as_points(x):
    x = np.asarray(x, dtype=float)
    return x[None] if x.ndim == 0 else x


def _check_t(t):
    t = np.asarray(t, dtype=float)
    if np.any(~(t > 0)):
        raise KernelError("time parameter must be positive")
    return t


def riesz_constant(n: int) -> float:
    """Gamma((n+1)/2) / pi^{(n+1)/2}."""
    return math.exp(gammaln((n + 1) / 2.0)) / math.pi ** ((n + 1) / 2.0)


# ----------------------------------------------------------------- heat, OU

def heat_kernel_A(t, x, y):
    """Mehler kernel e^{-nt} pi^{-n/2} (1-e^{-2t})^{-n/2} e^{-|x-e^{-t}y|^2/(1-e^{-2t})}."""
    t = _check_t(t)
    x, y = _as_points(x), _as_points(y)
    n = x.shape[-1]
    a = np.exp(-t)
    b = -np.expm1(-2.0 * t)
    d2 = np.sum((x - a[..., None] * y) ** 2, axis=-1)
    return np.exp(-n * t - d2 / b) * (np.pi * b) ** (-n / 2.0)


def ou_kernel(t, x, y):
    """(1-e^{-2t})^{-n/2} exp(-|y - x e^{-t}|^2 / (1-e^{-2t}))."""
    t = _check_t(t)
    x, y = _as_points(x), _as_points(y)
    n = x.shape[-1]
    a = np.exp(-t)
    b = -np.expm1(-2.0 * t)
    d2 = np.sum((y - a[..., None] * x) ** 2, axis=-1)
    return np.exp(-d2 / b) * b ** (-n / 2.0)


def heat_kernel_euclid(t, z):
    t = _check_t(t)
    z = _as_points(z)
    n = z.shape[-1]
    r2 = np.sum(z * z, axis=-1)
    return (2.0 * np.pi * t) ** (-n / 2.0) * np.exp(-r2 / (2.0 * t))


def poisson_kernel_classical(t, z):
    """c_n t / (t^2 + |z|^2)^{(n+1)/2}, the -Laplacian Poisson kernel."""
    t = _check_t(t)
    z = _as_points(z)
    n = z.shape[-1]
    r2 = np.sum(z * z, axis=-1)
    return riesz_constant(n) * t / (t * t + r2) ** ((n + 1) / 2.0)


def poisson_kernel_euclid(t, z):
    """Subordinated Euclidean Poisson kernel, equal to the classical one at t / sqrt 2."""
    return poisson_kernel_classical(np.asarray(t, dtype=float) / math.sqrt(2.0), z)


def _pair_scale(x, y):
    d = np.linalg.norm(np.atleast_2d(x - y), axis=-1)
    d = d[d > 0]
    return float(d.min()) if d.size else 1.0


def _poisson_u_weights(t, u):
    return t / (2.0 * math.sqrt(math.pi)) * np.exp(-t * t / (4.0 * u)) * u ** -1.5


def poisson_kernel_A(t: float, x, y, quad: QuadratureConfig = DEFAULT_QUAD,
                     route: str = "u"):
    """P_t^A(x, y) by quadrature of the subordination integral.

    route "u": (t / 2 sqrt pi) int e^{-t^2/4u} u^{-3/2} T_u^A du;
    route "v": pi^{-1/2} int e^{-v} v^{-1/2} T^A_{t^2/4v} dv (same integral
    after u = t^2 / 4v, used as an independent check).
    """
    t = float(_check_t(t))
    x, y = np.broadcast_arrays(_as_points(x), _as_points(y))
    if route == "u":
        scale = min(t / 2.0, _pair_scale(x, y))
        u, w = half_line_rule(scale, quad)
        W = w * _poisson_u_weights(t, u)
        K = heat_kernel_A(u.reshape((-1,) + (1,) * (x.ndim - 1)), x[None], y[None])
        return np.tensordot(W, K, axes=(0, 0))
    if route == "v":
        v, w = half_line_rule(t / 2.0, quad)
        W = w * np.exp(-v) / np.sqrt(np.pi * v)
        u = t * t / (4.0 * v)
        K = heat_kernel_A(u.reshape((-1,) + (1,) * (x.ndim - 1)), x[None], y[None])
        return np.tensordot(W, K, axes=(0, 0))
    raise ValueError(f"unknown route {route!r}")


def poisson_subordinated_euclid(t: float, z, quad: QuadratureConfig = DEFAULT_QUAD):
    """Quadrature of (t / 2 sqrt pi) int e^{-t^2/4u} u^{-3/2} T_u(z) du."""
    t = float(_check_t(t))
    z = _as_points(z)
    scale = min(t / 2.0, _pair_scale(z, np.zeros_like(z)))
    u, w = half_line_rule(scale, quad, tail=True)
    W = w * _poisson_u_weights(t, u)
    K = heat_kernel_euclid(u.reshape((-1,) + (1,) * (z.ndim - 1)), z[None])
    return np.tensordot(W, K, axes=(0, 0))


# ------------------------------------------------------- time derivatives

def _teuwen_1d(m: int, t, x, y):
    """d_t^m of (1-e^{-2t})^{-1/2} exp(-(y - x e^{-t})^2 / (1-e^{-2t}))."""
    a = np.exp(-t)
    b = -np.expm1(-2.0 * t)
    sb = np.sqrt(b)
    h = np.exp(-((y - a * x) ** 2) / b) / sb
    if m == 0:
        return h
    r = a / sb
    w = (y - a * x) / sb
    Hx = hermite_all(m, x)
    Hw = hermite_all(2 * m, w)
    total = np.zeros(np.broadcast_shapes(np.shape(t), np.shape(x), np.shape(y)))
    for s in range(1, m + 1):
        S = stirling2(m, s)
        for ell in range(s + 1):
            coeff = S * math.comb(s, ell) * (-1) ** (s - ell)
            total = total + (coeff / 2.0 ** s) * r ** (2 * s - ell) * Hx[ell] * Hw[2 * s - ell]
    return (-1) ** m * h * total


def teuwen_dt_ou(k: int, t, x, y, max_order: int = TEUWEN_MAX_ORDER):
    """k-th time derivative of the OU-form kernel (1-e^{-2t})^{-n/2} e^{-|y-xe^{-t}|^2/(1-e^{-2t})}."""
    if k < 0:
        raise ValueError("order must be >= 0")
    if k > max_order:
        raise KernelError(f"order {k} exceeds the configured maximum {max_order}")
    t = _check_t(t)
    x, y = _as_points(x), _as_points(y)
    n = x.shape[-1]
    cache = {}

    def d(i, m):
        if (i, m) not in cache:
            cache[(i, m)] = _teuwen_1d(m, t, x[..., i], y[..., i])
        return cache[(i, m)]

    total = 0.0
    for ms in compositions(k, n):
        term = float(multinomial(ms))
        for i, m in enumerate(ms):
            term = term * d(i, m)
        total = total + term
    return total


def heat_A_dt(k: int, t, x, y, max_order: int = TEUWEN_MAX_ORDER):
    """d_t^k T_t^A(x, y), via T^A(x,y) = pi^{-n/2} e^{|y|^2-|x|^2} e^{-nt} H^ou_t(x, y)."""
    t = _check_t(t)
    x, y = _as_points(x), _as_points(y)
    n = x.shape[-1]
    sym = np.exp(np.sum(y * y, axis=-1) - np.sum(x * x, axis=-1)) * np.pi ** (-n / 2.0)
    total = 0.0
    for j in range(k + 1):
        total = total + math.comb(k, j) * (-n) ** (k - j) * teuwen_dt_ou(j, t, x, y, max_order)
    return sym * np.exp(-n * t) * total


def heat_A_dx(i: int, t, x, y):
    """d/dx_i T_t^A(x, y), with i 1-based."""
    t = _check_t(t)
    x, y = _as_points(x), _as_points(y)
    a = np.exp(-t)
    b = -np.expm1(-2.0 * t)
    j = i - 1
    return heat_kernel_A(t, x, y) * (-2.0 * (x[..., j] - a * y[..., j]) / b)


def heat_euclid_dx(i: int, t, x, y):
    t = _check_t(t)
    x, y = _as_points(x), _as_points(y)
    j = i - 1
    return heat_kernel_euclid(t, x - y) * (-(x[..., j] - y[..., j]) / t)


# ---------------------------------------------------- Riesz and conjugation

def _batched(fun, nodes, weights, x, y, chunk=2048):
    """sum_j weights_j fun(nodes_j, x, y), chunked over the points."""
    x, y = np.broadcast_arrays(x, y)
    flat_x = x.reshape(-1, x.shape[-1])
    flat_y = y.reshape(-1, y.shape[-1])
    out = np.empty(flat_x.shape[0])
    for s in range(0, flat_x.shape[0], chunk):
        xs, ys = flat_x[s:s + chunk], flat_y[s:s + chunk]
        vals = fun(nodes[:, None], xs[None], ys[None])
        out[s:s + chunk] = weights @ vals
    return out.reshape(x.shape[:-1])


def riesz_kernel_euclid_closed(i: int, x, y):
    """-sqrt(2) c_n (x_i - y_i) / |x-y|^{n+1}, the t-integral of d_{x_i} T_t in closed form."""
    x, y = _as_points(x), _as_points(y)
    n = x.shape[-1]
    z = x - y
    r = np.linalg.norm(z, axis=-1)
    if np.any(r == 0):
        raise KernelError("Riesz kernel is singular at x = y")
    return -math.sqrt(2.0) * riesz_constant(n) * z[..., i - 1] / r ** (n + 1)


def riesz_kernel_classical(i: int, x, y):
    """c_n (x_i - y_i) / |x-y|^{n+1}."""
    x, y = _as_points(x), _as_points(y)
    n = x.shape[-1]
    z = x - y
    r = np.linalg.norm(z, axis=-1)
    if np.any(r == 0):
        raise KernelError("Riesz kernel is singular at x = y")
    return riesz_constant(n) * z[..., i - 1] / r ** (n + 1)


def riesz_kernel(spec: KernelSpec, x, y, quad: QuadratureConfig = DEFAULT_QUAD):
    """pi^{-1/2} int_0^inf d_{x_i} K_t(x, y) t^{-1/2} dt by quadrature (K = T^A or T)."""
    x, y = _as_points(x), _as_points(y)
    if np.any(np.linalg.norm(np.atleast_2d(x - y), axis=-1) == 0):
        raise KernelError("Riesz kernel is singular at x = y")
    i = spec.component
    if spec.family == Family.RieszA:
        fun, tail = (lambda t, a, b: heat_A_dx(i, t, a, b)), False
    elif spec.family == Family.RieszEuclid:
        fun, tail = (lambda t, a, b: heat_euclid_dx(i, t, a, b)), True
    else:
        raise ValueError("riesz_kernel needs a RieszA or RieszEuclid spec")
    t, w = half_line_rule(_pair_scale(x, y), quad, tail=tail)
    W = w / np.sqrt(np.pi * t)
    return _batched(fun, t, W, x, y)


def conj_kernel_euclid_closed(i: int, t, x, y):
    """-sqrt(2) c_n (x_i - y_i) / (t^2/2 + |x-y|^2)^{(n+1)/2}."""
    t = _check_t(t)
    x, y = _as_points(x), _as_points(y)
    n = x.shape[-1]
    z = x - y
    r2 = np.sum(z * z, axis=-1)
    return -math.sqrt(2.0) * riesz_constant(n) * z[..., i - 1] / (t * t / 2.0 + r2) ** ((n + 1) / 2.0)


def conj_kernel_classical(i: int, t, x, y):
    """c_n (x_i - y_i) / (t^2 + |x-y|^2)^{(n+1)/2}."""
    t = _check_t(t)
    x, y = _as_points(x), _as_points(y)
    n = x.shape[-1]
    z = x - y
    r2 = np.sum(z * z, axis=-1)
    return riesz_constant(n) * z[..., i - 1] / (t * t + r2) ** ((n + 1) / 2.0)


def conjugation_kernel(spec: KernelSpec, t: float, x, y,
                       quad: QuadratureConfig = DEFAULT_QUAD, closed: bool = True):
    """pi^{-1/2} int e^{-t^2/4u} u^{-1/2} d_{x_i} K_u(x, y) du.

    ConjEuclid uses its closed form unless closed=False.
    """
    t = float(_check_t(t))
    x, y = _as_points(x), _as_points(y)
    i = spec.component
    if spec.family == Family.ConjEuclid and closed:
        return conj_kernel_euclid_closed(i, t, x, y)
    if spec.family == Family.ConjA:
        fun, tail = (lambda u, a, b: heat_A_dx(i, u, a, b)), False
    elif spec.family == Family.ConjEuclid:
        fun, tail = (lambda u, a, b: heat_euclid_dx(i, u, a, b)), True
    else:
        raise ValueError("conjugation_kernel needs a ConjA or ConjEuclid spec")
    u, w = half_line_rule(min(t / 2.0, _pair_scale(x, y)), quad, tail=tail)
    W = w * np.exp(-t * t / (4.0 * u)) / np.sqrt(np.pi * u)
    return _batched(fun, u, W, x, y)


def kernel_value(spec: KernelSpec, t, x, y, quad: QuadratureConfig = DEFAULT_QUAD):
    """Evaluate any family at (t, x, y); t is ignored by the Riesz families."""
    fam = spec.family
    if fam == Family.HeatA:
        return heat_kernel_A(t, x, y)
    if fam == Family.HeatEuclid:
        return heat_kernel_euclid(t, _as_points(x) - _as_points(y))
    if fam == Family.PoissonA:
        return poisson_kernel_A(float(t), x, y, quad)
    if fam == Family.PoissonEuclid:
        return poisson_kernel_euclid(t, _as_points(x) - _as_points(y))
    if fam in (Family.RieszA, Family.RieszEuclid):
        return riesz_kernel(spec, x, y, quad)
    return conjugation_kernel(spec, float(t), x, y, quad)


# ------------------------------------------- operators on e^{-|y|^2} g(y)

@dataclass(frozen=True)
class _GH:
    nodes: np.ndarray
    weights: np.ndarray


def _gh_tensor(n: int, count: int) -> _GH:
    s, w = np.polynomial.hermite.hermgauss(count)
    grids = np.meshgrid(*([s] * n), indexing="ij")
    wg = np.meshgrid(*([w] * n), indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=-1)
    weights = np.prod(np.stack([g.ravel() for g in wg], axis=-1), axis=-1)
    return _GH(nodes, weights * np.pi ** (-n / 2.0))


def _mehler_average(times, g, x, factor, gh_count, chunk_bytes=40e6):
    """For each time u and point x: e^{-nu} e^{-|x|^2} pi^{-n/2} int e^{-|s|^2} F(u,s,x) g(a x + sqrt(b) s) ds.

    This is int T_u^A(x, y) (...) e^{-|y|^2} g(y) dy after the change of
    variables y = e^{-u} x + sqrt(1-e^{-2u}) s.  factor(a, b, s, x) gives the
    extra kernel factor F (1 for T^A itself).  g maps (P, n) points to (P,)
    or to (P, J) for J functions at once; the result has shape (len(times),
    len(x)) or (len(times), len(x), J).
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    n = x.shape[1]
    gh = _gh_tensor(n, gh_count)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    probe = np.asarray(g(x[:1]))
    J = probe.shape[1] if probe.ndim == 2 else None
    out = np.empty((times.size, x.shape[0]) + ((J,) if J else ()))
    per = max(1, int(chunk_bytes // (8 * max(n, J or 1) * x.shape[0] * gh.weights.size)))
    pref_x = np.exp(-np.sum(x * x, axis=1))
    for c in range(0, times.size, per):
        u = times[c:c + per]
        a = np.exp(-u)[:, None, None, None]
        b = -np.expm1(-2.0 * u)[:, None, None, None]
        y = a * x[None, :, None, :] + np.sqrt(b) * gh.nodes[None, None, :, :]
        F = factor(a[..., 0], b[..., 0], gh.nodes[None, None], x[None, :, None, :])
        WF = gh.weights * np.broadcast_to(F, y.shape[:-1])
        gv = np.asarray(g(y.reshape(-1, n)))
        pref = np.exp(-n * u)[:, None] * pref_x[None, :]
        if J:
            gv = gv.reshape(y.shape[:-1] + (J,))
            out[c:c + per] = pref[..., None] * np.einsum("mng,mngj->mnj", WF, gv)
        else:
            out[c:c + per] = pref * np.sum(WF * gv.reshape(y.shape[:-1]), axis=-1)
    return out


def _one(a, b, s, x):
    return 1.0


def _dx_factor(i):
    j = i - 1

    def f(a, b, s, x):
        return -2.0 * x[..., j] + 2.0 * a * s[..., j] / np.sqrt(b)
    return f


def heat_A_apply(t, g, x, gh_count: int = 40):
    """T_t^A f(x) for f(y) = e^{-|y|^2} g(y); returns shape (len(t), len(x))."""
    _check_t(t)
    return _mehler_average(t, g, x, _one, gh_count)


def heat_A_dx_apply(i: int, t, g, x, gh_count: int = 40):
    _check_t(t)
    return _mehler_average(t, g, x, _dx_factor(i), gh_count)


def poisson_A_apply(t: float, g, x, quad: QuadratureConfig = DEFAULT_QUAD, gh_count: int = 40):
    t = float(_check_t(t))
    u, w = half_line_rule(t / 2.0, quad)
    W = w * _poisson_u_weights(t, u)
    return np.tensordot(W, _mehler_average(u, g, x, _one, gh_count), axes=(0, 0))


def riesz_A_apply(i: int, g, x, quad: QuadratureConfig = DEFAULT_QUAD, gh_count: int = 40):
    u, w = half_line_rule(1.0, quad)
    W = w / np.sqrt(np.pi * u)
    return np.tensordot(W, _mehler_average(u, g, x, _dx_factor(i), gh_count), axes=(0, 0))


def conj_A_apply(i: int, t: float, g, x, quad: QuadratureConfig = DEFAULT_QUAD, gh_count: int = 40):
    t = float(_check_t(t))
    u, w = half_line_rule(min(t / 2.0, 1.0), quad)
    W = w * np.exp(-t * t / (4.0 * u)) / np.sqrt(np.pi * u)
    return np.tensordot(W, _mehler_average(u, g, x, _dx_factor(i), gh_count), axes=(0, 0))

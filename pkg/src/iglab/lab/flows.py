"""Trajectories t -> L_t f(x) for the corpus functions.

Random expansions use the exact multiplier action; Gaussian bumps use the
closed-form Gaussian convolutions, with time derivatives taken by Taylor
jets and fractional orders by Weyl quadrature.  Poisson-type and
conjugation flows of bumps are built by u-quadrature of the subordination
formulas; the truncated Riesz flow is built by direct kernel quadrature
over shells around each point.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gamma as gamma_fn

from ..frac import FracOrder, _poisson_sub_dt, spectral_frac_factor
from ..jets import Jet, jet_hermite
from ..kernels import KernelSpec, riesz_kernel
from ..quad import QuadratureConfig, endpoint_rule, gauss_legendre, half_line_rule
from ..spectral import SpectralFunction
from ..special import hermite_all
from .corpus import Bump

HEAT_FAMILIES = ("HeatA", "HeatEuclid")
POISSON_FAMILIES = ("PoissonA", "PoissonEuclid")


def _pts(x):
    x = np.asarray(x, dtype=float)
    return x[:, None] if x.ndim == 1 else x


def _htilde_table(f: SpectralFunction, x):
    """Array (K, N) of H~_k(x) and the coefficient/eigenvalue vectors."""
    x = _pts(x)
    ks = list(f.terms)
    deg = max(max(k) for k in ks)
    H = [hermite_all(deg, x[:, i]) for i in range(f.n)]
    gauss = np.exp(-np.sum(x * x, axis=1))
    rows = []
    for k in ks:
        r = gauss.copy()
        for i, ki in enumerate(k):
            r = r * H[i][ki]
        rows.append(r)
    cs = np.array([f.terms[k] for k in ks])
    lam = np.array([f.n + sum(k) for k in ks], dtype=float)
    return np.array(rows), cs, lam, ks


# --------------------------------------------------------- jets of heat flows

def _heat_jet(f, family: str, tj: Jet, x):
    """Jet (in t) of T_t f(x); tj has base shape (..., 1) broadcasting against x (N, n)."""
    x = _pts(x)
    n = x.shape[1]
    if isinstance(f, Bump):
        c = np.asarray(f.center)
        s2 = f.width ** 2
        out = None
        for i in range(n):
            xi = x[:, i]
            if family == "HeatA":
                a = (-tj).exp()
                D = 1.0 - a * a * (1.0 - s2)
                z = xi - a * c[i]
                psi = a * (D / s2) ** -0.5 * (-(z * z) / D).exp()
            else:
                D = tj * 2.0 + s2
                psi = (D / s2) ** -0.5 * (-((xi - c[i]) ** 2) / D).exp()
            out = psi if out is None else out * psi
        return out * f.amplitude
    if family == "HeatA":
        H, cs, lam, _ = _htilde_table(f, x)
        total = None
        for row, c, l in zip(H, cs, lam):
            term = (-tj * l).exp() * (c * row)
            total = term if total is None else total + term
        return total
    # Euclidean heat on H~_k: prod_i sigma^{-(k_i+1)/2} H_{k_i}(x_i/sqrt sigma) e^{-x_i^2/sigma}
    sigma = tj * 2.0 + 1.0
    rs = sigma ** -0.5
    total = None
    for k, c in f.terms.items():
        term = None
        for i, ki in enumerate(k):
            xi = x[:, i]
            fac = rs ** (ki + 1) * jet_hermite(ki, rs * xi) * (-(xi * xi) * (sigma ** -1.0)).exp()
            term = fac if term is None else term * fac
        term = term * c
        total = term if total is None else total + term
    return total


def heat_derivative(f, family: str, m: int, t, x):
    """d_t^m T_t f(x) for t of any shape; result shape t.shape + (N,)."""
    t = np.asarray(t, dtype=float)
    tj = Jet.variable(t[..., None], m)
    return _heat_jet(f, family, tj, x).derivative(m)


def heat_flow(f, family: str, times, x, alpha: float = 0.0,
              quad: QuadratureConfig | None = None):
    """t^alpha D^alpha T_t f(x), shape (len(times), N)."""
    quad = quad or QuadratureConfig(node_count=16)
    times = np.asarray(times, dtype=float)
    o = FracOrder(alpha)
    if isinstance(f, SpectralFunction) and family == "HeatA":
        H, cs, lam, _ = _htilde_table(f, x)
        fac = spectral_frac_factor(alpha, lam[None, :], times[:, None]) * np.exp(-times[:, None] * lam[None, :])
        return (fac * cs[None, :]) @ H
    if o.alpha == 0:
        return heat_derivative(f, family, 0, times, x)
    if o.is_integer:
        j = int(o.alpha)
        return times[:, None] ** j * heat_derivative(f, family, j, times, x)
    out = np.empty((times.size, _pts(x).shape[0]))
    for a, t in enumerate(times):
        s, w = endpoint_rule(o.gamma, min(t, 1.0), quad, tail=(family == "HeatEuclid"))
        g = heat_derivative(f, family, o.m, t + s, x)
        out[a] = t ** o.alpha * (w @ g) / gamma_fn(o.gamma)
    return out


def heat_dx(f, family: str, i: int, u, x):
    """d_{x_i} T_u f(x) (A setting only), shape (len(u), N)."""
    x = _pts(x)
    u = np.asarray(u, dtype=float)
    if family != "HeatA":
        raise ValueError("spatial derivatives are provided for HeatA only")
    if isinstance(f, SpectralFunction):
        from ..spectral import DxA, apply_spectral
        g = apply_spectral(DxA(i), f)
        H, _, _, ks = _htilde_table(g, x)
        lam_src = np.array([f.n + sum(k) - 1 for k in ks], dtype=float)
        cs = np.array([g.terms[k] for k in ks])
        return (np.exp(-u[:, None] * lam_src[None, :]) * cs[None, :]) @ H
    c = np.asarray(f.center)
    s2 = f.width ** 2
    a = np.exp(-u)[:, None]
    D = 1.0 - a * a * (1.0 - s2)
    val = heat_derivative(f, family, 0, u, x)
    return val * (-2.0 * (x[None, :, i - 1] - a * c[i - 1]) / D)


# ---------------------------------------------------------- subordinated flows

def _sub_weights(m_or_alpha, times, u, quad):
    """Array (T, U): t^alpha D^alpha_t of (t / 2 sqrt pi) e^{-t^2/4u} u^{-3/2}."""
    o = FracOrder(m_or_alpha)
    if o.alpha == 0:
        return _poisson_sub_dt(0, times[:, None], u[None, :])
    if o.is_integer:
        j = int(o.alpha)
        return times[:, None] ** j * _poisson_sub_dt(j, times[:, None], u[None, :])
    out = np.empty((times.size, u.size))
    for a, t in enumerate(times):
        s, w = endpoint_rule(o.gamma, min(t, 1.0), quad, tail=True)
        vals = _poisson_sub_dt(o.m, (t + s)[:, None], u[None, :])
        out[a] = t ** o.alpha * (w @ vals) / gamma_fn(o.gamma)
    return out


def poisson_flow(f, family: str, times, x, alpha: float = 0.0,
                 quad: QuadratureConfig | None = None):
    quad = quad or QuadratureConfig(node_count=16)
    times = np.asarray(times, dtype=float)
    if isinstance(f, SpectralFunction) and family == "PoissonA":
        H, cs, lam, _ = _htilde_table(f, x)
        r = np.sqrt(lam)
        fac = spectral_frac_factor(alpha, r[None, :], times[:, None]) * np.exp(-times[:, None] * r[None, :])
        return (fac * cs[None, :]) @ H
    heat = "HeatA" if family == "PoissonA" else "HeatEuclid"
    u, w = half_line_rule(float(times.min()) / 2.0, quad, tail=(heat == "HeatEuclid"))
    W = _sub_weights(alpha, times, u, quad) * w[None, :]
    return W @ heat_derivative(f, heat, 0, u, x)


def conj_flow(f, i: int, times, x, quad: QuadratureConfig | None = None):
    """C_{i,t}^A f(x), shape (len(times), N)."""
    quad = quad or QuadratureConfig(node_count=16)
    times = np.asarray(times, dtype=float)
    if isinstance(f, SpectralFunction):
        from ..spectral import RieszA, apply_spectral
        g = apply_spectral(RieszA(i), f)
        H, _, _, ks = _htilde_table(g, x)
        lam_src = np.array([f.n + sum(k) - 1 for k in ks], dtype=float)
        cs = np.array([g.terms[k] for k in ks])
        return (np.exp(-times[:, None] * np.sqrt(lam_src)[None, :]) * cs[None, :]) @ H
    u, w = half_line_rule(float(times.min()) / 2.0, quad)
    W = w[None, :] * np.exp(-times[:, None] ** 2 / (4.0 * u[None, :])) / np.sqrt(np.pi * u[None, :])
    return W @ heat_dx(f, "HeatA", i, u, x)


# ------------------------------------------------------------ truncated Riesz

class RieszShells:
    """Kernel quadrature for eps -> int_{|x-y|>eps} R_i^A(x, y) f(y) dy.

    For each x the outside of the smallest ball is covered by spherical shells
    whose radii include every truncation level, so each truncated integral is
    a tail sum over whole shells.  Supported for n = 1 and n = 2.
    """

    def __init__(self, x, eps, i: int = 1, r_max: float = 14.0, per_shell: int = 8,
                 angles: int = 32, quad: QuadratureConfig | None = None):
        self.x = _pts(x)
        n = self.x.shape[1]
        if n > 2:
            raise ValueError("truncated Riesz flows are implemented for n <= 2")
        self.eps = np.sort(np.asarray(eps, dtype=float))
        quad = quad or QuadratureConfig(node_count=16)
        edges = list(self.eps)
        r = self.eps[-1]
        while r < r_max:
            r = min(r * 1.5, r_max)
            edges.append(r)
        edges = np.array(edges)
        r_nodes, r_w, shell_id = [], [], []
        for j, (a, b) in enumerate(zip(edges[:-1], edges[1:])):
            rn, rw = gauss_legendre(a, b, per_shell)
            r_nodes.append(rn)
            r_w.append(rw)
            shell_id.append(np.full(per_shell, j))
        r_nodes = np.concatenate(r_nodes)
        r_w = np.concatenate(r_w)
        self.shell_id = np.concatenate(shell_id)
        self.n_shells = len(edges) - 1
        if n == 1:
            dirs = np.array([[1.0], [-1.0]])
            dw = np.array([1.0, 1.0])
        else:
            th = 2 * np.pi * (np.arange(angles) + 0.5) / angles
            dirs = np.stack([np.cos(th), np.sin(th)], axis=1)
            dw = np.full(angles, 2 * np.pi / angles)
        # offsets (R*D, n) and weights including the polar Jacobian r^{n-1}
        off = (r_nodes[:, None, None] * dirs[None, :, :]).reshape(-1, n)
        wts = (r_w[:, None] * r_nodes[:, None] ** (n - 1) * dw[None, :]).reshape(-1)
        self.offsets, self.weights = off, wts
        self.node_shell = np.repeat(self.shell_id, len(dw))
        spec = KernelSpec("RieszA", n, i)
        ys = self.x[:, None, :] + off[None, :, :]
        xs = np.broadcast_to(self.x[:, None, :], ys.shape)
        self.K = riesz_kernel(spec, xs.reshape(-1, n), ys.reshape(-1, n), quad).reshape(ys.shape[:2])
        self.ys = ys

    def flow(self, f_eval):
        """Array (len(eps), N) of truncated transforms of a function f_eval(points)."""
        n = self.x.shape[1]
        fy = np.asarray(f_eval(self.ys.reshape(-1, n))).reshape(self.ys.shape[:2])
        contrib = self.K * fy * self.weights[None, :]
        per_shell = np.zeros((self.x.shape[0], self.n_shells))
        for j in range(self.n_shells):
            per_shell[:, j] = contrib[:, self.node_shell == j].sum(axis=1)
        tails = np.cumsum(per_shell[:, ::-1], axis=1)[:, ::-1]  # tails[:, j] = sum over shells >= j
        return tails[:, : len(self.eps)].T

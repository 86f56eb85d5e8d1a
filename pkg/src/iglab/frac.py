"""Weyl fractional derivatives in time and their closed Euclidean profiles.

D^alpha g(t) = Gamma(m - alpha)^{-1} int_0^inf g^{(m)}(t + s) s^{m-alpha-1} ds,
m = floor(alpha) + 1.  Integer orders skip the integral and use g^{(alpha)}
directly; alpha = 0 is the identity.  With this convention
D^alpha e^{-ct} = (-1)^m c^alpha e^{-ct}; the sign (-1)^m matters for every
spectral comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma as gamma_fn

from . import kernels as K
from .kernels import Family, KernelSpec
from .quad import DEFAULT_QUAD, JACOBI, SUBSTITUTION, QuadratureConfig, endpoint_rule
from .special import DerivCoeffTable, heat_deriv_coeffs, poisson_deriv_coeffs

__all__ = [
    "FracOrder", "PsiProfile", "weyl_derivative", "psi_profile_eval",
    "frac_kernel_dt", "spectral_frac_factor", "kernel_time_derivative",
]


@dataclass(frozen=True)
class FracOrder:
    alpha: float
    m: int = field(init=False)

    def __post_init__(self):
        a = float(self.alpha)
        if not a >= 0:
            raise ValueError("fractional order must be >= 0")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "m", int(math.floor(a)) + 1 if a > 0 else 0)

    @property
    def is_integer(self) -> bool:
        return float(self.alpha).is_integer()

    @property
    def gamma(self) -> float:
        """m - alpha, the exponent of the endpoint weight (plus one)."""
        return self.m - self.alpha


def _order(order) -> FracOrder:
    return order if isinstance(order, FracOrder) else FracOrder(order)


def spectral_frac_factor(alpha: float, lam, t):
    """t^alpha D^alpha applied to e^{-t lam}, divided by e^{-t lam}."""
    o = _order(alpha)
    lam = np.asarray(lam, dtype=float)
    if o.alpha == 0:
        return np.ones(np.broadcast_shapes(lam.shape, np.shape(t)))
    if o.is_integer:
        return (-lam * t) ** int(o.alpha)
    return (-1.0) ** o.m * (lam * t) ** o.alpha


def weyl_derivative(g_m, order, t: float, quad: QuadratureConfig = DEFAULT_QUAD,
                    scale: float | None = None, tail: bool = True):
    """D^alpha g(t) from the caller-supplied m-th derivative g_m (vectorised in s).

    For integer alpha the function returns g_m(t), so callers pass the
    alpha-th derivative in that case.  `scale` is the time scale on which
    g_m(t + s) varies (defaults to min(t, 1)).
    """
    o = _order(order)
    if o.alpha == 0 or o.is_integer:
        return g_m(np.asarray(t, dtype=float))
    if not t > 0:
        raise ValueError("t must be positive")
    sc = min(t, 1.0) if scale is None else scale
    s, w = endpoint_rule(o.gamma, sc, quad, tail=tail)
    vals = np.asarray(g_m(t + s))
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("non-finite integrand in Weyl quadrature")
    # simple tail diagnostic: the last decade of nodes should carry negligible mass
    return np.tensordot(w, vals, axes=(0, 0)) / gamma_fn(o.gamma)


@dataclass(frozen=True)
class PsiProfile:
    """Psi_beta for the Euclidean heat kernel or the classical Poisson kernel.

    Heat:    t^beta d^beta T_t(z) = t^{-n/2} Psi_beta(|z| / sqrt t)
    Poisson: t^beta d^beta P_t(z) = t^{-n}   Psi_beta(|z| / t)
    (P_t the classical c_n t / (t^2+|z|^2)^{(n+1)/2}).
    """

    beta: float
    family: Family
    n: int

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.family not in (Family.HeatEuclid, Family.PoissonEuclid):
            raise ValueError("profiles exist for HeatEuclid and PoissonEuclid only")
        if not self.beta > 0:
            raise ValueError("beta must be positive")

    @property
    def order(self) -> FracOrder:
        return FracOrder(self.beta)

    @property
    def m(self) -> int:
        o = self.order
        return int(o.alpha) if o.is_integer else o.m

    @property
    def table(self) -> DerivCoeffTable:
        if self.family == Family.HeatEuclid:
            return heat_deriv_coeffs(self.m, self.n)
        return poisson_deriv_coeffs(self.m, self.n)

    def phi(self, u):
        """Phi_m(u): e^{-u^2} sum a_j u^{2j} (heat) or
        c_n (1+u^2)^{-(n+1)/2} N_m(u^2) / (1+u^2)^m (Poisson)."""
        u2 = np.asarray(u, dtype=float) ** 2
        tab = self.table
        if self.family == Family.HeatEuclid:
            return np.exp(-u2) * tab.polyval(u2)
        cn = K.riesz_constant(self.n)
        return cn * (1.0 + u2) ** (-(self.n + 1) / 2.0) * tab.factor(u2)


def psi_profile_eval(profile: PsiProfile, u, n: int | None = None,
                     quad: QuadratureConfig = DEFAULT_QUAD):
    """Psi_beta(u) by quadrature over v in (1, inf)."""
    if n is not None and n != profile.n:
        raise ValueError("dimension mismatch between profile and argument")
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise ValueError("u must be non-negative")
    o = profile.order
    nn = profile.n
    m = profile.m
    heat = profile.family == Family.HeatEuclid
    if o.is_integer:
        # t^m d^m at t = 1 directly
        return profile.phi(u / math.sqrt(2.0)) / (2 * math.pi) ** (nn / 2.0) if heat \
            else profile.phi(u)
    sig, w = endpoint_rule(o.gamma, 0.5, quad, tail=True)
    v = 1.0 + sig
    shape = (-1,) + (1,) * u.ndim
    v = v.reshape(shape)
    if heat:
        vals = profile.phi(u[None] / np.sqrt(2.0 * v)) * v ** (-m - nn / 2.0)
        norm = (2 * math.pi) ** (nn / 2.0) * gamma_fn(o.gamma)
    else:
        vals = profile.phi(u[None] / v) * v ** (-m - nn)
        norm = gamma_fn(o.gamma)
    return np.tensordot(w, vals, axes=(0, 0)) / norm


def _poisson_sub_dt(m, t, u):
    """d_t^m of (t / 2 sqrt pi) e^{-t^2/4u} u^{-3/2}."""
    tau = t / (2.0 * np.sqrt(u))
    from .special import hermite
    # d_t^m [t e^{-t^2/4u}] = (2 sqrt u)^{1-m} (-1)^m / 2 H_{m+1}(tau) e^{-tau^2}
    core = (2.0 * np.sqrt(u)) ** (1 - m) * (-1) ** m * 0.5 * hermite(m + 1, tau) * np.exp(-tau * tau)
    return core * u ** -1.5 / (2.0 * math.sqrt(math.pi))


def kernel_time_derivative(spec: KernelSpec, m: int, t, x, y,
                           quad: QuadratureConfig = DEFAULT_QUAD):
    """d_t^m K_t(x, y) for the heat and Poisson families (t may be an array)."""
    fam = spec.family
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if fam == Family.HeatA:
        return K.heat_A_dt(m, t, x, y)
    if fam == Family.HeatEuclid:
        z = x - y
        r2 = float(np.sum(z * z))
        tab = heat_deriv_coeffs(m, spec.n)
        return t ** (-m) * K.heat_kernel_euclid(t, z) * tab.polyval(r2 / (2.0 * t))
    if fam == Family.PoissonEuclid:
        z = x - y
        r2 = float(np.sum(z * z))
        tab = poisson_deriv_coeffs(m, spec.n)
        s = t / math.sqrt(2.0)
        # chain rule for P_t = P^cl_{t/sqrt 2}
        return 2.0 ** (-m / 2.0) * s ** (-m) * K.poisson_kernel_classical(s, z) \
            * tab.factor(r2 / (s * s))
    if fam == Family.PoissonA:
        from .quad import half_line_rule
        tt = np.atleast_1d(t)
        d = float(np.linalg.norm(x - y)) or 1.0
        u, w = half_line_rule(min(d, float(tt.min()) / 2.0), quad)
        Tu = K.heat_kernel_A(u, x, y)
        out = np.array([np.sum(w * _poisson_sub_dt(m, ti, u) * Tu) for ti in tt])
        return out.reshape(t.shape)
    raise ValueError(f"time derivatives are defined for heat/Poisson families, not {fam.value}")


def frac_kernel_dt(spec: KernelSpec, order, t: float, x, y,
                   quad: QuadratureConfig = DEFAULT_QUAD):
    """t^alpha d_t^alpha K_t(x, y) for a heat or Poisson family."""
    o = _order(order)
    fam = spec.family
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if o.alpha == 0:
        return float(kernel_time_derivative(spec, 0, t, x, y, quad))
    if o.is_integer:
        return float(t ** o.alpha * kernel_time_derivative(spec, int(o.alpha), t, x, y, quad))
    r = float(np.linalg.norm(x - y))
    n = spec.n
    if fam == Family.HeatEuclid:
        prof = PsiProfile(o.alpha, fam, n)
        return float(t ** (-n / 2.0) * psi_profile_eval(prof, r / math.sqrt(t), quad=quad))
    if fam == Family.PoissonEuclid:
        prof = PsiProfile(o.alpha, fam, n)
        s = t / math.sqrt(2.0)
        return float(s ** (-n) * psi_profile_eval(prof, r / s, quad=quad))
    g_m = (lambda tau: kernel_time_derivative(spec, o.m, tau, x, y, quad))
    return float(t ** o.alpha * weyl_derivative(g_m, o, t, quad))

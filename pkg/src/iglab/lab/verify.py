"""Verification suites: each check compares a library route with an
independent route (closed form, jets, adaptive quadrature or the exact
spectral action) and records the error against a tolerance."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import integrate

from .. import kernels as K
from ..frac import PsiProfile, frac_kernel_dt, kernel_time_derivative, weyl_derivative
from ..jets import Jet
from ..kernels import KernelSpec
from ..quad import QuadratureConfig
from ..spectral import (ConjA, HeatA, PoissonA, RieszA, SpectralFunction, apply_spectral,
                        evaluate, multi_indices)
from ..special import hermite_all
from .diag import conj_global_constant, riesz_local_constant

SUITES = ("Teuwen", "Eigen", "Subordination", "PsiClosedForm", "RieszClosedForm",
          "ConjLimit", "KernelBounds")

DEFAULT_TOLERANCES = {
    "Teuwen": 1e-5, "Eigen": 1e-6, "Subordination": 1e-7, "PsiClosedForm": 1e-5,
    "RieszClosedForm": 1e-8, "ConjLimit": 1e-3, "KernelBounds": 10.0,
}


@dataclass
class Check:
    suite: str
    check: str
    error: float
    tolerance: float
    passed: bool
    detail: str = ""

    def as_dict(self):
        return asdict(self)


def _check(suite, name, err, tol, detail=""):
    err = float(err)
    return Check(suite, name, err, tol, bool(np.isfinite(err) and err < tol), detail)


def _rel(a, b, floor=0.0):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), floor)))


# ---------------------------------------------------------------- Teuwen

def heat_A_jet(t0, x, y, order):
    """Taylor jet in t of the Mehler kernel at t0 (scalar t0, single point pair)."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    n = x.size
    tj = Jet.variable(t0, order)
    a = (-tj).exp()
    b = 1.0 - (tj * -2.0).exp()
    d2 = None
    for i in range(n):
        z = (a * -y[i]) + x[i]
        d2 = z * z if d2 is None else d2 + z * z
    return (tj * -float(n) - d2 / b).exp() * (b ** (-n / 2.0)) * math.pi ** (-n / 2.0)


def richardson_dt(fun, t, k, h=0.05, levels=4):
    """k-th derivative by central differences with Richardson extrapolation in h^2."""
    def central(hh):
        j = np.arange(k + 1)
        coeff = np.array([(-1) ** (k - jj) * math.comb(k, jj) for jj in j], dtype=float)
        pts = t + (j - k / 2.0) * hh
        return float(np.dot(coeff, [fun(p) for p in pts])) / hh ** k
    T = [[central(h / 2 ** i)] for i in range(levels)]
    for i in range(1, levels):
        for j in range(1, i + 1):
            T[i].append(T[i][j - 1] + (T[i][j - 1] - T[i - 1][j - 1]) / (4 ** j - 1))
    return T[-1][-1]


def suite_teuwen(tol, rng):
    out = []
    for n in (1, 2, 3):
        errs, errs_fd = [], []
        for _ in range(50):
            t = float(rng.uniform(0.2, 2.0))
            x, y = rng.uniform(-1.5, 1.5, n), rng.uniform(-1.5, 1.5, n)
            jet = heat_A_jet(t, x, y, 4)
            scale = float(K.heat_kernel_A(t, x, y))
            for k in range(0, 5):
                val = float(K.heat_A_dt(k, t, x, y))
                ref = float(jet.derivative(k))
                errs.append(abs(val - ref) / max(abs(ref), 1e-12 * scale))
            ref2 = richardson_dt(lambda s: float(K.heat_kernel_A(s, x, y)), t, 2)
            errs_fd.append(abs(float(K.heat_A_dt(2, t, x, y)) - ref2) / max(abs(ref2), 1e-8 * scale))
        out.append(_check("Teuwen", f"n={n} k<=4 vs Taylor jets", max(errs), tol))
        out.append(_check("Teuwen", f"n={n} k=2 vs Richardson differences", max(errs_fd), tol))
    # the kernel identity T^A(x,y) e^{-|y|^2} = T^A(y,x) e^{-|x|^2}
    x, y = rng.uniform(-2, 2, (50, 2)), rng.uniform(-2, 2, (50, 2))
    lhs = K.heat_kernel_A(0.7, x, y) * np.exp(-np.sum(y * y, 1))
    rhs = K.heat_kernel_A(0.7, y, x) * np.exp(-np.sum(x * x, 1))
    out.append(_check("Teuwen", "kernel symmetry in L2(gamma_-1)", _rel(lhs, rhs), 1e-12))
    return out


# ---------------------------------------------------------------- Eigen

def _basis_funcs(n, max_degree):
    # g_k = H_k so that f = e^{-|y|^2} g = H~_k
    idx = multi_indices(n, max_degree)

    def g(y):
        H = [hermite_all(max_degree, y[:, i]) for i in range(n)]
        cols = []
        for k in idx:
            c = np.ones(len(y))
            for i, ki in enumerate(k):
                c = c * H[i][ki]
            cols.append(c)
        return np.stack(cols, axis=1)
    return idx, g


def eigen_checks(tol, n_list=(1, 2), times=(0.1, 1.0, 5.0), node_count=40, gh_count=12, points=41):
    """Kernel-quadrature actions on H~_k, |k| <= 4, against the multipliers.

    In Mehler variables the y-integrand is a polynomial of degree <= 5 in the
    Gauss-Hermite variable, so gh_count = 12 is already exact; the error is
    that of the time quadrature.
    """
    quad = QuadratureConfig(node_count=node_count)
    out = []
    for n in n_list:
        idx, g = _basis_funcs(n, 4)
        if n == 1:
            x = np.linspace(-3, 3, points)[:, None]
        else:
            x = np.random.default_rng(1).uniform(-2.5, 2.5, (points, n))
        basis = [SpectralFunction.basis(k) for k in idx]

        def compare(name, got, op_of):
            ref = np.stack([evaluate(apply_spectral(op_of(), b), x) for b in basis], axis=1)
            err = np.max(np.abs(got - ref), axis=0) / np.max(np.abs(ref), axis=0)
            out.append(_check("Eigen", f"n={n} {name}", float(np.max(err)), tol,
                              "max over |k|<=4 of sup-norm relative error on the point set"))

        for t in times:
            compare(f"heat t={t}", K.heat_A_apply(np.array([t]), g, x, gh_count)[0], lambda: HeatA(t))
            compare(f"poisson t={t}", K.poisson_A_apply(t, g, x, quad, gh_count), lambda: PoissonA(t))
            for i in range(1, n + 1):
                compare(f"conj i={i} t={t}", K.conj_A_apply(i, t, g, x, quad, gh_count), lambda: ConjA(i, t))
        for i in range(1, n + 1):
            compare(f"riesz i={i}", K.riesz_A_apply(i, g, x, quad, gh_count), lambda: RieszA(i))
    return out


def suite_eigen(tol, rng):
    return eigen_checks(tol)


# --------------------------------------------------------- Subordination

def _adaptive_subordination(t, heat_of_u):
    f = lambda u: t / (2 * math.sqrt(math.pi)) * math.exp(-t * t / (4 * u)) * u ** -1.5 * heat_of_u(u)
    pieces = [0.0, t * t / 40, t * t / 4, t * t, 4 * t * t + 1, 50 * (t * t + 1), math.inf]
    total = 0.0
    for a, b in zip(pieces[:-1], pieces[1:]):
        val, _ = integrate.quad(f, a, b, epsabs=0.0, epsrel=1e-13, limit=400)
        total += val
    return total


def suite_subordination(tol, rng, count=20, n_list=(1, 2)):
    out = []
    quad = QuadratureConfig(node_count=40)
    for n in n_list:
        errs_a, errs_e, errs_v = [], [], []
        for _ in range(count):
            t = float(rng.uniform(0.1, 3.0))
            x, y = rng.uniform(-1.5, 1.5, n), rng.uniform(-1.5, 1.5, n)
            ref = _adaptive_subordination(t, lambda u: float(K.heat_kernel_A(u, x, y)))
            errs_a.append(abs(float(K.poisson_kernel_A(t, x, y, quad)) - ref) / abs(ref))
            errs_v.append(abs(float(K.poisson_kernel_A(t, x, y, quad, route="v")) - ref) / abs(ref))
            z = x - y
            ref_e = _adaptive_subordination(t, lambda u: float(K.heat_kernel_euclid(u, z)))
            closed = float(K.poisson_kernel_euclid(t, z))
            sub = float(K.poisson_subordinated_euclid(t, z, quad))
            errs_e.append(max(abs(closed - ref_e) / abs(ref_e), abs(sub - closed) / abs(closed)))
        out.append(_check("Subordination", f"n={n} PoissonA u-route vs adaptive", max(errs_a), tol))
        out.append(_check("Subordination", f"n={n} PoissonA v-route vs adaptive", max(errs_v), tol))
        out.append(_check("Subordination", f"n={n} PoissonEuclid closed form", max(errs_e), tol))
    return out


# ----------------------------------------------------------- Psi closed form

def suite_psi(tol, rng, betas=(0.5, 1.3, 2.7), n_list=(1, 2)):
    out = []
    quad = QuadratureConfig(node_count=40)
    for fam in ("HeatEuclid", "PoissonEuclid"):
        for n in n_list:
            spec = KernelSpec(fam, n)
            for beta in betas:
                errs = []
                for _ in range(10):
                    t = float(rng.uniform(0.2, 2.0))
                    x, y = rng.uniform(-1.0, 1.0, n), np.zeros(n)
                    closed = frac_kernel_dt(spec, beta, t, x, y, quad)
                    m = PsiProfile(beta, fam, n).m
                    weyl = t ** beta * float(weyl_derivative(
                        lambda s: kernel_time_derivative(spec, m, s, x, y, quad), beta, t, quad))
                    errs.append(abs(closed - weyl) / abs(weyl))
                out.append(_check("PsiClosedForm", f"{fam} n={n} beta={beta}", max(errs), tol))
    return out


# --------------------------------------------------------- Riesz closed form

def suite_riesz(tol, rng):
    out = []
    quad = QuadratureConfig(node_count=40)
    for n in (1, 2, 3):
        x, y = rng.uniform(-2, 2, (30, n)), rng.uniform(-2, 2, (30, n))
        for i in range(1, n + 1):
            spec = KernelSpec("RieszEuclid", n, i)
            out.append(_check("RieszClosedForm", f"RieszEuclid n={n} i={i}",
                              _rel(K.riesz_kernel(spec, x, y, quad), K.riesz_kernel_euclid_closed(i, x, y)), tol))
            cs = KernelSpec("ConjEuclid", n, i)
            out.append(_check("RieszClosedForm", f"ConjEuclid n={n} i={i} t=0.5",
                              _rel(K.conjugation_kernel(cs, 0.5, x, y, quad, closed=False),
                                   K.conj_kernel_euclid_closed(i, 0.5, x, y)), tol))
        spec = KernelSpec("RieszEuclid", n, 1)
        out.append(_check("RieszClosedForm", f"RieszEuclid n={n} antisymmetry",
                          _rel(K.riesz_kernel(spec, x, y, quad), -K.riesz_kernel(spec, y, x, quad)), tol))
    return out


# --------------------------------------------------------------- ConjLimit

def suite_conj_limit(tol, rng):
    out = []
    for n in (1, 2):
        coeffs = {k: float(rng.uniform(-1, 1)) / (1 + sum(k)) ** 2 for k in multi_indices(n, 6)}
        f = SpectralFunction(n, coeffs, 6)
        x = rng.uniform(-2, 2, (41, n))
        for i in range(1, n + 1):
            ref = evaluate(apply_spectral(RieszA(i), f), x)
            got = evaluate(apply_spectral(ConjA(i, 1e-4), f), x)
            out.append(_check("ConjLimit", f"spectral n={n} i={i} t=1e-4",
                              float(np.max(np.abs(got - ref)) / np.max(np.abs(ref))), tol))
    quad = QuadratureConfig(node_count=40)
    x, y = rng.uniform(-2, 2, (20, 1)), rng.uniform(-2, 2, (20, 1))
    keep = np.abs(x - y)[:, 0] > 0.2
    x, y = x[keep], y[keep]
    ra = K.riesz_kernel(KernelSpec("RieszA", 1, 1), x, y, quad)
    ca = K.conjugation_kernel(KernelSpec("ConjA", 1, 1), 1e-4, x, y, quad)
    out.append(_check("ConjLimit", "kernel n=1 t=1e-4", _rel(ca, ra), 1e-6))
    return out


# ------------------------------------------------------------ KernelBounds

def suite_kernel_bounds(tol, rng):
    out = []
    seed = int(rng.integers(1 << 30))
    for n in (1, 2):
        for fc in (riesz_local_constant(n=n, seed=seed), conj_global_constant(n=n, seed=seed)):
            out.append(_check("KernelBounds", f"{fc.name} n={n} fitted-constant spread",
                              fc.spread, tol, f"constants={[round(c, 6) for c in fc.constants]}"))
    return out


_RUNNERS = {"Teuwen": suite_teuwen, "Eigen": suite_eigen, "Subordination": suite_subordination,
            "PsiClosedForm": suite_psi, "RieszClosedForm": suite_riesz,
            "ConjLimit": suite_conj_limit, "KernelBounds": suite_kernel_bounds}


def run_verify(suite: str, tolerances: dict | None = None, seed: int = 0):
    """Run one suite; returns the list of Check records."""
    if suite not in _RUNNERS:
        raise KeyError(f"unknown suite {suite!r}; choose from {SUITES}")
    tol = (tolerances or {}).get(suite, DEFAULT_TOLERANCES[suite])
    return _RUNNERS[suite](tol, np.random.default_rng(seed))

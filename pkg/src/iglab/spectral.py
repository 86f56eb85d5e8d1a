"""Truncated expansions in the basis H~_k(x) = H_k(x) e^{-|x|^2} and exact
multiplier actions of the inverse-Gaussian operators on them."""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .frac import FracOrder
from .measure import GridFunction
from .special import MultiIndex, hermite_all

__all__ = [
    "SpectralFunction", "htilde", "htilde_norm_sq", "expand", "evaluate",
    "apply_spectral", "HeatA", "PoissonA", "RieszA", "ConjA", "FracHeatA",
    "FracPoissonA", "DxA", "multi_indices", "ExpansionError",
]


class ExpansionError(RuntimeError):
    pass


def multi_indices(n: int, max_degree: int):
    """All k in N^n with |k| <= max_degree, ordered by |k| then lexicographically."""
    out = []
    for total in range(max_degree + 1):
        for k in itertools.product(range(total + 1), repeat=n):
            if sum(k) == total:
                out.append(k)
    return out


@dataclass(frozen=True)
class SpectralFunction:
    n: int
    terms: dict
    max_degree: int

    def __post_init__(self):
        clean = {}
        for k, c in dict(self.terms).items():
            mi = MultiIndex.of(k)
            if mi.n != self.n:
                raise ValueError(f"index {mi.entries} does not match dimension {self.n}")
            if mi.order > self.max_degree:
                raise ValueError(f"index {mi.entries} exceeds max_degree {self.max_degree}")
            clean[mi.entries] = clean.get(mi.entries, 0.0) + float(c)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def basis(cls, k, max_degree: int | None = None) -> "SpectralFunction":
        mi = MultiIndex.of(k)
        return cls(mi.n, {mi.entries: 1.0}, mi.order if max_degree is None else max_degree)

    def coeff(self, k) -> float:
        return self.terms.get(MultiIndex.of(k).entries, 0.0)

    def __call__(self, x):
        return evaluate(self, x)

    def gaussian_factor(self, y):
        """g(y) = sum_k c_k H_k(y), i.e. f(y) e^{|y|^2}."""
        return _poly_eval(self, y)

    def l2_norm(self) -> float:
        return math.sqrt(sum(c * c * htilde_norm_sq(k) for k, c in self.terms.items()))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow([f"k_{i + 1}" for i in range(self.n)] + ["coeff"])
            for k in sorted(self.terms, key=lambda k: (sum(k), k)):
                wr.writerow(list(k) + [repr(self.terms[k])])

    @classmethod
    def from_csv(cls, path) -> "SpectralFunction":
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        n = len(rows[0]) - 1
        terms = {tuple(int(v) for v in r[:n]): float(r[n]) for r in rows[1:]}
        md = max((sum(k) for k in terms), default=0)
        return cls(n, terms, md)


def htilde_norm_sq(k) -> float:
    """||H~_k||^2 in L^2(gamma_{-1}) = pi^n prod 2^{k_i} k_i!."""
    mi = MultiIndex.of(k)
    out = math.pi ** mi.n
    for ki in mi:
        out *= 2.0 ** ki * math.factorial(ki)
    return out


def _poly_eval(f: SpectralFunction, x):
    x = np.asarray(x, dtype=float)
    if x.ndim == 1 and f.n > 1:
        x = x[None]
    if x.ndim == 1:
        x = x[:, None]
    if x.shape[-1] != f.n:
        raise ValueError("dimension mismatch")
    if not f.terms:
        return np.zeros(x.shape[:-1])
    deg = max(max(k) for k in f.terms)
    H = [hermite_all(deg, x[..., i]) for i in range(f.n)]
    total = np.zeros(x.shape[:-1])
    for k, c in f.terms.items():
        term = c
        for i, ki in enumerate(k):
            term = term * H[i][ki]
        total = total + term
    return total


def evaluate(f: SpectralFunction, x):
    """sum_k c_k H_k(x) e^{-|x|^2}; x of shape (n,), (N, n) or, for n = 1, (N,)."""
    x = np.asarray(x, dtype=float)
    pts = x[None] if (x.ndim == 1 and f.n > 1) else (x[:, None] if x.ndim == 1 else x)
    if x.ndim == 0:
        pts = x.reshape(1, 1)
    val = _poly_eval(f, pts) * np.exp(-np.sum(pts * pts, axis=-1))
    if x.ndim == 0 or (x.ndim == 1 and f.n > 1):
        return float(val[0])
    return val


def htilde(k, x):
    return evaluate(SpectralFunction.basis(k), x)


def expand(f: Union[GridFunction, Callable], n: int, max_degree: int = 12,
           nodes: int | None = None, check_tol: float | None = None) -> SpectralFunction:
    """Hermite coefficients c_k = ||H~_k||^{-2} pi^{n/2} int f(x) H_k(x) dx.

    A callable is integrated with tensor Gauss-Hermite nodes (2 max_degree + 16
    per axis) after absorbing e^{-|x|^2}; a GridFunction uses its own weights.
    With check_tol set, the reconstruction is compared with f at the
    quadrature nodes that carry the most weight and ExpansionError is raised
    when the relative residual exceeds it.
    """
    idx = multi_indices(n, max_degree)
    if isinstance(f, GridFunction):
        if f.n != n:
            raise ValueError("dimension mismatch")
        pts, vals, wts = f.points, np.asarray(f.values, dtype=float), f.weights
        H = [hermite_all(max_degree, pts[:, i]) for i in range(n)]
        coeffs = {}
        for k in idx:
            prod = np.ones(len(pts))
            for i, ki in enumerate(k):
                prod = prod * H[i][ki]
            coeffs[k] = float(np.sum(wts * vals * prod)) * math.pi ** (n / 2.0) / htilde_norm_sq(k)
        return SpectralFunction(n, coeffs, max_degree)
    N = nodes or (2 * max_degree + 16)
    s, w = np.polynomial.hermite.hermgauss(N)
    H1 = hermite_all(max_degree, s)  # (deg+1, N)
    grids = np.meshgrid(*([s] * n), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    vals = np.asarray(f(pts), dtype=float).reshape((N,) * n)
    # integrand f e^{|x|^2} H_k against the weight e^{-|x|^2}
    vals = vals * np.exp(np.sum(pts * pts, axis=-1)).reshape((N,) * n)
    A = vals
    for _ in range(n):
        # contract the leading node axis with (w * H_k), appending a degree axis
        A = np.tensordot(A, (H1 * w).T, axes=(0, 0))
    coeffs = {}
    for k in idx:
        coeffs[k] = float(A[k]) * math.pi ** (n / 2.0) / htilde_norm_sq(k)
    out = SpectralFunction(n, coeffs, max_degree)
    if check_tol is not None:
        big = np.argsort(-np.abs(vals.ravel()))[:32]
        ref = np.asarray(f(pts[big]), dtype=float)
        rec = evaluate(out, pts[big])
        res = np.max(np.abs(rec - ref)) / max(np.max(np.abs(ref)), 1e-300)
        if res > check_tol:
            raise ExpansionError(f"expansion residual {res:.3e} exceeds {check_tol:.1e}")
    return out


# ----------------------------------------------------------- operators

@dataclass(frozen=True)
class HeatA:
    t: float


@dataclass(frozen=True)
class PoissonA:
    t: float


@dataclass(frozen=True)
class RieszA:
    i: int  # 1-based axis


@dataclass(frozen=True)
class ConjA:
    i: int
    t: float


@dataclass(frozen=True)
class FracHeatA:
    alpha: float
    t: float


@dataclass(frozen=True)
class FracPoissonA:
    alpha: float
    t: float


@dataclass(frozen=True)
class DxA:
    """d/dx_i, acting by d_{x_i} H~_k = -H~_{k+e_i}."""
    i: int


def _frac(alpha, lam, t):
    o = FracOrder(alpha)
    if o.alpha == 0:
        return 1.0
    if o.is_integer:
        return (-lam * t) ** int(o.alpha)
    return (-1.0) ** o.m * (lam * t) ** o.alpha


def apply_spectral(op, f: SpectralFunction) -> SpectralFunction:
    n = f.n
    shift = isinstance(op, (RieszA, ConjA, DxA))
    if shift and not 1 <= op.i <= n:
        raise ValueError(f"axis index must lie in 1..{n}")
    if hasattr(op, "t") and not op.t > 0:
        raise ValueError("t must be positive")
    out = {}
    for k, c in f.terms.items():
        lam = n + sum(k)
        if isinstance(op, HeatA):
            out[k] = c * math.exp(-op.t * lam)
        elif isinstance(op, PoissonA):
            out[k] = c * math.exp(-op.t * math.sqrt(lam))
        elif isinstance(op, FracHeatA):
            out[k] = c * math.exp(-op.t * lam) * _frac(op.alpha, lam, op.t)
        elif isinstance(op, FracPoissonA):
            r = math.sqrt(lam)
            out[k] = c * math.exp(-op.t * r) * _frac(op.alpha, r, op.t)
        else:
            kk = list(k)
            kk[op.i - 1] += 1
            kk = tuple(kk)
            if isinstance(op, RieszA):
                val = -c / math.sqrt(lam)
            elif isinstance(op, ConjA):
                val = -c * math.exp(-op.t * math.sqrt(lam)) / math.sqrt(lam)
            else:
                val = -c
            out[kk] = out.get(kk, 0.0) + val
    return SpectralFunction(n, out, f.max_degree + (1 if shift else 0))

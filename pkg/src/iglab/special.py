"""Combinatorial and polynomial primitives.

Physicists' Hermite polynomials, Stirling numbers of the second kind,
multinomial coefficients and the coefficient tables that describe
t^k d^k/dt^k of the Euclidean heat and Poisson kernels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

__all__ = [
    "MultiIndex",
    "DerivCoeffTable",
    "hermite",
    "hermite_all",
    "hermite_tensor",
    "stirling2",
    "multinomial",
    "compositions",
    "log_gamma",
    "heat_deriv_coeffs",
    "poisson_deriv_coeffs",
]


@dataclass(frozen=True)
class MultiIndex:
    """Multi-index k = (k_1, ..., k_n) with non-negative entries."""

    entries: tuple

    def __post_init__(self):
        ent = tuple(int(e) for e in self.entries)
        if len(ent) < 1:
            raise ValueError("a multi-index needs at least one entry")
        if any(e < 0 for e in ent):
            raise ValueError(f"multi-index entries must be >= 0, got {ent}")
        object.__setattr__(self, "entries", ent)

    @classmethod
    def of(cls, k) -> "MultiIndex":
        if isinstance(k, MultiIndex):
            return k
        if np.isscalar(k):
            return cls((int(k),))
        return cls(tuple(k))

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def order(self) -> int:
        """|k| = sum of the entries."""
        return sum(self.entries)

    def shift(self, i: int, by: int = 1) -> "MultiIndex":
        """k + by * e_i, with i an axis index in 0..n-1."""
        ent = list(self.entries)
        ent[i] += by
        return MultiIndex(tuple(ent))

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]


def hermite_all(kmax: int, z):
    """Values H_0(z), ..., H_kmax(z) stacked along a new leading axis.

    Uses H_{m+1} = 2 z H_m - 2 m H_{m-1}.  Raises OverflowError when a finite
    input produces a non-finite value.
    """
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    z = np.asarray(z, dtype=float)
    out = np.empty((kmax + 1,) + z.shape)
    out[0] = 1.0
    if kmax >= 1:
        out[1] = 2.0 * z
    with np.errstate(over="ignore", invalid="ignore"):
        for m in range(1, kmax):
            out[m + 1] = 2.0 * z * out[m] - 2.0 * m * out[m - 1]
    if not np.all(np.isfinite(out[:, np.isfinite(z)])):
        raise OverflowError(f"Hermite values overflow for degree up to {kmax}")
    return out


def hermite(k: int, z):
    """Physicists' Hermite polynomial H_k evaluated at z (scalar or array)."""
    if k < 0:
        raise ValueError("degree must be non-negative")
    val = hermite_all(k, z)[k]
    return float(val) if val.ndim == 0 else val


def hermite_tensor(k, x):
    """prod_i H_{k_i}(x_i); x has shape (n,) or (..., n)."""
    k = MultiIndex.of(k)
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != k.n:
        raise ValueError(f"dimension mismatch: k has {k.n} entries, x has {x.shape[-1]}")
    val = np.ones(x.shape[:-1])
    for i, ki in enumerate(k):
        val = val * hermite(ki, x[..., i])
    return float(val) if np.ndim(val) == 0 else val


@lru_cache(maxsize=None)
def _stirling_row(N: int) -> tuple:
    if N == 0:
        return (1,)
    prev = _stirling_row(N - 1)
    row = [0] * (N + 1)
    for L in range(1, N + 1):
        left = prev[L - 1]
        right = prev[L] if L < N else 0
        row[L] = left + L * right
    return tuple(row)


def stirling2(N: int, L: int) -> int:
    """Stirling number of the second kind {N, L} as an exact integer.

    By convention the value is 0 when L > N.
    """
    if N < 0 or L < 0:
        raise ValueError("arguments must be non-negative")
    if L > N:
        return 0
    return _stirling_row(N)[L]


def multinomial(parts) -> int:
    """(sum parts)! / prod(parts_i!) in exact integer arithmetic."""
    total, out = 0, 1
    for p in parts:
        p = int(p)
        if p < 0:
            raise ValueError("parts must be non-negative")
        total += p
        out *= math.comb(total, p)
    return out


def compositions(k: int, n: int):
    """All tuples of n non-negative integers summing to k (lexicographic)."""
    if n == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in compositions(k - first, n - 1):
            yield (first,) + rest


def log_gamma(x):
    return gammaln(x)


@dataclass(frozen=True)
class DerivCoeffTable:
    """Coefficients a_0..a_k of a kernel time-derivative form.

    family "heat":    t^k d_t^k T_t(z) = T_t(z) * sum_j a_j w^j,  w = |z|^2 / 2t
    family "poisson": t^k d_t^k P_t(z) = P_t(z) * sum_j a_j q^j / (1+q)^k,  q = |z|^2 / t^2
    """

    order: int
    dimension: int
    coeffs: tuple
    family: str = "heat"

    def __post_init__(self):
        if len(self.coeffs) != self.order + 1:
            raise ValueError("table length must equal order + 1")

    def as_float(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs])

    def polyval(self, w):
        """sum_j a_j w^j by Horner's rule."""
        w = np.asarray(w, dtype=float)
        acc = np.zeros_like(w)
        for c in reversed(self.as_float()):
            acc = acc * w + c
        return acc

    def factor(self, w):
        """The multiplier of the kernel: the polynomial (heat) or the
        polynomial over (1+q)^k (Poisson)."""
        val = self.polyval(w)
        if self.family == "poisson":
            val = val / (1.0 + np.asarray(w, dtype=float)) ** self.order
        return val


@lru_cache(maxsize=None)
def _heat_table(order: int, n: int) -> tuple:
    # differentiating T*F_k(w) once more: F_{k+1} = (w - n/2 - k) F_k - w F_k'
    F = [Fraction(1)]
    half_n = Fraction(n, 2)
    for k in range(order):
        G = [Fraction(0)] * (len(F) + 1)
        for j, a in enumerate(F):
            G[j] += (-half_n - k - j) * a
            G[j + 1] += a
        F = G
    return tuple(F)


def heat_deriv_coeffs(order: int, n: int) -> DerivCoeffTable:
    if order < 0 or n < 1:
        raise ValueError("need order >= 0 and n >= 1")
    return DerivCoeffTable(order, n, _heat_table(order, n), "heat")


@lru_cache(maxsize=None)
def _poisson_table(order: int, n: int) -> tuple:
    # N_{m+1} = ((1-m)(1+q) - (n+1)) N_m - 2q(1+q) N_m' + 2 m q N_m
    N = [Fraction(1)]
    for m in range(order):
        G = [Fraction(0)] * (len(N) + 1)
        for j, a in enumerate(N):
            # ((1-m) - (n+1)) a q^j + (1-m) a q^{j+1}
            G[j] += (1 - m - (n + 1)) * a
            G[j + 1] += (1 - m) * a
            # -2 q (1+q) j a q^{j-1} = -2 j a q^j - 2 j a q^{j+1}
            G[j] += -2 * j * a
            G[j + 1] += -2 * j * a
            G[j + 1] += 2 * m * a
        N = G
    return tuple(N)


def poisson_deriv_coeffs(order: int, n: int) -> DerivCoeffTable:
    if order < 0 or n < 1:
        raise ValueError("need order >= 0 and n >= 1")
    return DerivCoeffTable(order, n, _poisson_table(order, n), "poisson")

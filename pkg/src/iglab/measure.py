"""The measure gamma_{-1}, discrete norms on it, and the local-region geometry."""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GridFunction",
    "RegionParams",
    "gamma_minus1_density",
    "lp_norm",
    "weak_l1_quasinorm",
    "in_local_region",
    "m_admissibility",
    "angle",
    "legendre_grid",
    "grid_function",
]


def _points(x):
    x = np.asarray(x, dtype=float)
    return x.reshape(1) if x.ndim == 0 else x


@dataclass(frozen=True)
class GridFunction:
    """Samples f(x_i) with Lebesgue quadrature weights w_i.

    points has shape (N, n); values has shape (N,) or (N, d).
    """

    points: np.ndarray
    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        vals = np.asarray(self.values)
        w = np.asarray(self.weights, dtype=float)
        if not (len(pts) == len(vals) == len(w)):
            raise ValueError("points, values and weights need equal lengths")
        if np.any(w <= 0):
            raise ValueError("quadrature weights must be positive")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.points.shape[1]

    def abs_values(self) -> np.ndarray:
        v = self.values
        return np.abs(v) if v.ndim == 1 else np.linalg.norm(v, axis=1)

    def masses(self) -> np.ndarray:
        """w_i times the gamma_{-1} density at x_i."""
        return self.weights * gamma_minus1_density(self.points)

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.points, values, self.weights)

    def to_csv(self, path) -> None:
        if self.values.ndim != 1:
            raise ValueError("CSV export supports scalar values only")
        header = [f"x_{i + 1}" for i in range(self.n)] + ["value", "weight"]
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(header)
            for p, v, w in zip(self.points, self.values, self.weights):
                wr.writerow([repr(float(c)) for c in p] + [repr(float(v)), repr(float(w))])

    @classmethod
    def from_csv(cls, path) -> "GridFunction":
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        header, body = rows[0], np.array(rows[1:], dtype=float)
        n = sum(h.startswith("x_") for h in header)
        if header[n:] != ["value", "weight"]:
            raise ValueError(f"unexpected header {header}")
        return cls(body[:, :n], body[:, n], body[:, n + 1])


@dataclass(frozen=True)
class RegionParams:
    delta: float
    n: int

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if self.n < 1:
            raise ValueError("dimension must be >= 1")


def gamma_minus1_density(x):
    """e^{|x|^2} pi^{n/2}; x has shape (n,) or (N, n)."""
    x = _points(x)
    n = x.shape[-1]
    r2 = np.sum(x * x, axis=-1)
    with np.errstate(over="ignore"):
        val = np.exp(r2) * np.pi ** (n / 2.0)
    if not np.all(np.isfinite(val)):
        raise OverflowError("gamma_{-1} density overflows at |x|^2 = "
                            f"{float(np.max(r2)):.1f}")
    return float(val) if np.ndim(val) == 0 else val


def lp_norm(f: GridFunction, p: float) -> float:
    if len(f.weights) == 0:
        raise ValueError("empty grid")
    if p < 1:
        raise ValueError("p must be >= 1")
    return float(np.sum(f.masses() * f.abs_values() ** p) ** (1.0 / p))


def weak_l1_quasinorm(f: GridFunction) -> float:
    """sup_lambda lambda * gamma_{-1}{|f| > lambda} for the sampled step function.

    The sup over lambda is approached from below each sampled level c, where
    the super-level set is {|f| >= c}; so the value is max_i |f_i| * mass{|f| >= |f_i|}.
    """
    a = f.abs_values()
    if a.size == 0:
        raise ValueError("empty grid")
    mass = f.masses()
    order = np.argsort(-a, kind="stable")
    a_sorted, m_sorted = a[order], mass[order]
    cum = np.cumsum(m_sorted)
    # for ties, the super-level set {|f| >= c} includes every tied sample
    last_of_tie = np.searchsorted(-a_sorted, -a_sorted, side="right") - 1
    return float(np.max(a_sorted * cum[last_of_tie]))


def in_local_region(x, y, params: RegionParams):
    """(x, y) in N_delta, i.e. |x - y| < n delta min(1, 1/|x|) (strict)."""
    x, y = _points(x), _points(y)
    if x.shape[-1] != y.shape[-1]:
        raise ValueError("dimension mismatch")
    n = params.n
    rx = np.linalg.norm(x, axis=-1)
    with np.errstate(divide="ignore"):
        lim = n * params.delta * np.minimum(1.0, 1.0 / rx)
    inside = np.linalg.norm(x - y, axis=-1) < lim
    return bool(inside) if np.ndim(inside) == 0 else inside


def m_admissibility(x):
    x = _points(x)
    r2 = np.sum(x * x, axis=-1)
    with np.errstate(divide="ignore"):
        val = np.minimum(1.0, 1.0 / r2)
    return float(val) if np.ndim(val) == 0 else val


def angle(x, y):
    """Angle between x and y; 0 when n = 1 or either point is the origin."""
    x, y = _points(x), _points(y)
    n = x.shape[-1]
    nx, ny = np.linalg.norm(x, axis=-1), np.linalg.norm(y, axis=-1)
    ok = (nx > 0) & (ny > 0) & (n > 1)
    with np.errstate(invalid="ignore", divide="ignore"):
        c = np.sum(x * y, axis=-1) / (nx * ny)
    th = np.where(ok, np.arccos(np.clip(c, -1.0, 1.0)), 0.0)
    return float(th) if np.ndim(th) == 0 else th


def legendre_grid(n: int, count: int, R: float = 6.0):
    """Tensor Gauss-Legendre nodes on [-R, R]^n and their weights."""
    x, w = np.polynomial.legendre.leggauss(count)
    x, w = R * x, R * w
    pts = np.array(list(itertools.product(x, repeat=n)))
    wts = np.prod(np.array(list(itertools.product(w, repeat=n))), axis=1)
    return pts, wts


def grid_function(fun, n: int, count: int, R: float = 6.0) -> GridFunction:
    pts, wts = legendre_grid(n, count, R)
    return GridFunction(pts, np.asarray(fun(pts)), wts)

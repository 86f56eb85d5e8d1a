"""Test functions: random truncated Hermite expansions and Gaussian bumps."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..spectral import SpectralFunction, evaluate, multi_indices


@dataclass(frozen=True)
class Bump:
    """amplitude * exp(-|y - center|^2 / width^2); width < 1 keeps it in every L^p(gamma_{-1})."""

    center: tuple
    width: float
    amplitude: float = 1.0

    def __post_init__(self):
        if not 0 < self.width < 1:
            raise ValueError("bump width must lie in (0, 1)")

    @property
    def n(self) -> int:
        return len(self.center)

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        c = np.asarray(self.center)
        return self.amplitude * np.exp(-np.sum((y - c) ** 2, axis=-1) / self.width ** 2)

    def gaussian_factor(self, y):
        """f(y) e^{|y|^2}."""
        y = np.asarray(y, dtype=float)
        c = np.asarray(self.center)
        e = np.sum(y * y, axis=-1) - np.sum((y - c) ** 2, axis=-1) / self.width ** 2
        return self.amplitude * np.exp(e)

    def l1_gamma(self) -> float:
        """int |f| e^{|y|^2} pi^{n/2} dy in closed form."""
        n = self.n
        s2 = self.width ** 2
        P = 1.0 / s2 - 1.0
        c2 = float(np.sum(np.asarray(self.center) ** 2))
        expo = c2 / (s2 * s2 * P) - c2 / s2
        return abs(self.amplitude) * math.pi ** (n / 2.0) * (math.pi / P) ** (n / 2.0) * math.exp(expo)

    def scaled(self, factor: float) -> "Bump":
        return Bump(self.center, self.width, self.amplitude * factor)


def evaluate_any(f, y):
    y = np.asarray(y, dtype=float)
    if isinstance(f, SpectralFunction):
        return evaluate(f, y if y.ndim == 2 else y[:, None])
    return f(y)


def random_expansion(rng, n: int, max_degree: int) -> SpectralFunction:
    terms = {}
    for k in multi_indices(n, max_degree):
        terms[k] = rng.uniform(-1.0, 1.0) * (1.0 + sum(k)) ** -2.0
    return SpectralFunction(n, terms, max_degree)


def random_bump(rng, n: int) -> Bump:
    c = tuple(rng.uniform(-1.5, 1.5, size=n))
    return Bump(c, float(rng.uniform(0.3, 0.8)), float(rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 1.5)))


def make_corpus(n: int, size: int, seed: int, max_degree: int = 6,
                bump_fraction: float = 0.2):
    """`size` functions: expansions first, then bumps, from one seeded generator."""
    rng = np.random.default_rng(seed)
    n_bumps = int(round(size * bump_fraction))
    out = [random_expansion(rng, n, max_degree) for _ in range(size - n_bumps)]
    out += [random_bump(rng, n) for _ in range(n_bumps)]
    return out


def shrinking_bumps(n: int, center, widths):
    """L^1(gamma_{-1})-normalised bumps of decreasing width."""
    out = []
    for w in widths:
        b = Bump(tuple(center), float(w))
        out.append(b.scaled(1.0 / b.l1_gamma()))
    return out

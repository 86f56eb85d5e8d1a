"""Truncated Taylor series in one variable, vectorised over numpy arrays.

A Jet holds c[0..K] with f(t0 + e) = sum_j c[j] e^j + O(e^{K+1}); the j-th
derivative at t0 is j! c[j].  Only the operations the closed-form trajectory
builders need are provided.
"""

from __future__ import annotations

import math

import numpy as np


class Jet:
    __slots__ = ("c",)
    __array_ufunc__ = None  # make ndarray (op) Jet defer to the Jet methods

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs, dtype=float)

    @property
    def order(self) -> int:
        return self.c.shape[0] - 1

    @classmethod
    def variable(cls, t0, order: int) -> "Jet":
        t0 = np.asarray(t0, dtype=float)
        c = np.zeros((order + 1,) + t0.shape)
        c[0] = t0
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def constant(cls, value, order: int) -> "Jet":
        value = np.asarray(value, dtype=float)
        c = np.zeros((order + 1,) + value.shape)
        c[0] = value
        return cls(c)

    def derivative(self, j: int) -> np.ndarray:
        return math.factorial(j) * self.c[j]

    def derivatives(self) -> np.ndarray:
        f = np.array([math.factorial(j) for j in range(self.order + 1)], dtype=float)
        return self.c * f.reshape((-1,) + (1,) * (self.c.ndim - 1))

    def _lift(self, other):
        if isinstance(other, Jet):
            return other.c
        return None

    def __add__(self, other):
        oc = self._lift(other)
        if oc is None:
            other = np.asarray(other, dtype=float)
            shape = np.broadcast_shapes(self.c.shape[1:], other.shape)
            c = np.broadcast_to(self.c, (self.order + 1,) + shape).copy()
            c[0] = c[0] + other
            return Jet(c)
        return Jet(self.c + oc)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        oc = self._lift(other)
        if oc is None:
            return Jet(self.c * other)
        K = self.order
        a, b = self.c, oc
        shape = np.broadcast_shapes(a.shape[1:], b.shape[1:])
        out = np.zeros((K + 1,) + shape)
        for k in range(K + 1):
            for j in range(k + 1):
                out[k] = out[k] + a[j] * b[k - j]
        return Jet(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other ** -1.0
        return Jet(self.c / other)

    def __rtruediv__(self, other):
        return (self ** -1.0) * other

    def __pow__(self, r: float):
        a = self.c
        K = self.order
        out = np.zeros_like(a)
        out[0] = a[0] ** r
        for k in range(1, K + 1):
            acc = np.zeros_like(a[0])
            for j in range(1, k + 1):
                acc = acc + ((r + 1.0) * j - k) * a[j] * out[k - j]
            out[k] = acc / (k * a[0])
        return Jet(out)

    def exp(self) -> "Jet":
        a = self.c
        K = self.order
        out = np.zeros_like(a)
        out[0] = np.exp(a[0])
        for k in range(1, K + 1):
            acc = np.zeros_like(a[0])
            for j in range(1, k + 1):
                acc = acc + j * a[j] * out[k - j]
            out[k] = acc / k
        return Jet(out)


def jet_hermite(k: int, z: Jet) -> Jet:
    """H_k(z) for a jet argument via the three-term recurrence."""
    h_prev = Jet.constant(np.ones_like(z.c[0]), z.order)
    if k == 0:
        return h_prev
    h = z * 2.0
    for m in range(1, k):
        h, h_prev = z * h * 2.0 - h_prev * (2.0 * m), h
    return h

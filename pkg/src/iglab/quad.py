"""Composite Gauss rules shared by the kernel and fractional-derivative code."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

SUBSTITUTION = "Substitution"
JACOBI = "JacobiWeighted"


@dataclass(frozen=True)
class QuadratureConfig:
    """Knobs for every 1-D integral in the package.

    node_count is the number of Gauss-Legendre nodes per panel; integrals over
    [1, truncation] use dyadic panels and the part near 0 uses the
    substitution t = s^2 on geometric panels.
    """

    node_count: int = 200
    truncation: float = 50.0
    singularity_exponent_handling: str = SUBSTITUTION

    def __post_init__(self):
        if self.node_count < 8:
            raise ValueError("node_count must be >= 8")
        if not self.truncation > 1.0:
            raise ValueError("truncation must exceed 1")
        if self.singularity_exponent_handling not in (SUBSTITUTION, JACOBI):
            raise ValueError("singularity_exponent_handling must be "
                             f"{SUBSTITUTION!r} or {JACOBI!r}")


DEFAULT_QUAD = QuadratureConfig()


@lru_cache(maxsize=64)
def _gl(count: int):
    x, w = np.polynomial.legendre.leggauss(count)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(a: float, b: float, count: int):
    """Gauss-Legendre nodes and weights on [a, b]."""
    x, w = _gl(count)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def panels(edges, count: int):
    """Concatenated Gauss-Legendre rules over consecutive edges."""
    xs, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        if b > a:
            x, w = gauss_legendre(a, b, count)
            xs.append(x)
            ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


def _geometric_edges(lo: float, hi: float, ratio: float = 2.0):
    k = max(1, int(np.ceil(np.log(hi / lo) / np.log(ratio) - 1e-12)))
    return np.geomspace(lo, hi, k + 1)


def half_line_rule(scale: float = 1.0, quad: QuadratureConfig = DEFAULT_QUAD,
                   tail: bool = False, tail_decades: int = 12):
    """Nodes/weights for integrals over (0, inf) (or (0, truncation]).

    The integrand may carry an integrable t^{-1/2} endpoint factor; it is
    absorbed by t = s^2 on (0, 1].  `scale` is the smallest time-like scale
    (in units of s = sqrt(t)) where the integrand changes; geometric panels
    reach down to scale/16.  With tail=True the rule adds [truncation, inf)
    through t = T / v^2, which is needed for algebraically decaying
    integrands.
    """
    q = quad.node_count
    T = quad.truncation
    s_lo = min(0.5, max(scale, 1e-12) / 16.0)
    s_edges = np.concatenate([[0.0], _geometric_edges(s_lo, 1.0)])
    s, ws = panels(s_edges, q)
    t_near, w_near = s * s, 2.0 * s * ws
    t_edges = [1.0]
    while t_edges[-1] * 2.0 < T:
        t_edges.append(t_edges[-1] * 2.0)
    t_edges.append(T)
    t_far, w_far = panels(np.array(t_edges), q)
    ts, ws_all = [t_near, t_far], [w_near, w_far]
    if tail:
        v_lo = 10.0 ** (-tail_decades / 2.0)
        v_edges = np.concatenate([[0.0], _geometric_edges(v_lo, 1.0)])
        v, wv = panels(v_edges, q)
        ts.append(T / (v * v))
        ws_all.append(2.0 * T * wv / v ** 3)
    return np.concatenate(ts), np.concatenate(ws_all)


def endpoint_rule(gamma: float, scale: float = 1.0,
                  quad: QuadratureConfig = DEFAULT_QUAD, tail: bool = True):
    """Rule for int_0^inf h(s) s^{gamma-1} ds with the weight folded in.

    Returns nodes s_j and weights W_j so that sum W_j h(s_j) approximates the
    integral.  Near 0 the singular weight is handled either by the
    substitution s = u^{1/gamma} or by a Gauss-Jacobi rule, as selected in
    `quad`; beyond `scale` the rule uses geometric panels up to the
    truncation and an algebraic tail map.
    """
    if not 0.0 < gamma:
        raise ValueError("gamma must be positive")
    q = quad.node_count
    T = max(quad.truncation, 2.0 * scale)
    s0 = scale
    if quad.singularity_exponent_handling == JACOBI:
        # weight s^{gamma-1} on [0, s0]: map s = s0 (1+x)/2
        x, w = roots_jacobi(q, 0.0, gamma - 1.0)
        s_head = 0.5 * s0 * (x + 1.0)
        w_head = w * (0.5 * s0) ** gamma
    else:
        u_edges = np.concatenate([[0.0], _geometric_edges(s0 ** gamma / 64.0, s0 ** gamma)])
        u, wu = panels(u_edges, q)
        s_head = u ** (1.0 / gamma)
        w_head = wu / gamma
    s_mid, w_mid = panels(_geometric_edges(s0, T), q)
    w_mid = w_mid * s_mid ** (gamma - 1.0)
    nodes, weights = [s_head, s_mid], [w_head, w_mid]
    if tail:
        v_edges = np.concatenate([[0.0], _geometric_edges(1e-6, 1.0)])
        v, wv = panels(v_edges, q)
        s_tail = T / (v * v)
        nodes.append(s_tail)
        weights.append(2.0 * T * wv / v ** 3 * s_tail ** (gamma - 1.0))
    return np.concatenate(nodes), np.concatenate(weights)

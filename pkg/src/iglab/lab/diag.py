"""Local/global splitting diagnostics and fitted-constant bound checks.

An operator with kernel K is applied on a Lebesgue y-grid; every term
K(x, y) f(y) w_y is assigned to the local region N_delta or to its complement,
so local + global reproduces the full sum term by term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..kernels import (KernelSpec, conj_kernel_euclid_closed, conjugation_kernel,
                       heat_kernel_A, poisson_kernel_A, riesz_kernel,
                       riesz_kernel_euclid_closed)
from ..measure import GridFunction, RegionParams, in_local_region, legendre_grid, lp_norm
from ..quad import QuadratureConfig
from .config import ExperimentConfig
from .corpus import evaluate_any, make_corpus


# -------------------------------------------------------------- operator matrix

def operator_matrix(cfg: ExperimentConfig, x, y, quad: QuadratureConfig):
    """K(x_a, y_b) for the diagnosed operator, shape (len(x), len(y)).

    heat -> T_t^A, poisson -> P_t^A and conj -> C_{i,t}^A at t = diag_param;
    truncriesz -> R_i^A with the pairs |x - y| <= eps = diag_param set to zero.
    """
    t = float(cfg.diag_param)
    X = np.repeat(x, len(y), axis=0)
    Y = np.tile(y, (len(x), 1))
    fam = cfg.family
    if fam == "heat":
        K = heat_kernel_A(t, X, Y)
    elif fam == "poisson":
        K = poisson_kernel_A(t, X, Y, quad)
    elif fam == "conj":
        K = conjugation_kernel(KernelSpec("ConjA", cfg.n, cfg.component), t, X, Y, quad)
    elif fam == "truncriesz":
        eps = t
        far = np.linalg.norm(X - Y, axis=1) > eps
        K = np.zeros(len(X))
        K[far] = riesz_kernel(KernelSpec("RieszA", cfg.n, cfg.component), X[far], Y[far], quad)
    else:
        raise ValueError(f"local/global diagnostics support heat, poisson, conj, truncriesz; got {fam}")
    return K.reshape(len(x), len(y))


@dataclass
class SplitRow:
    function_id: int
    input_norm: float
    full_norm: float
    local_norm: float
    global_norm: float
    max_partition_error: float  # |local + global - full| / sum |terms|, max over x


def split_apply(K, fy, wy, local_mask):
    terms = K * (fy * wy)[None, :]
    local = np.sum(np.where(local_mask, terms, 0.0), axis=1)
    glob = np.sum(np.where(local_mask, 0.0, terms), axis=1)
    full = np.sum(terms, axis=1)
    scale = np.sum(np.abs(terms), axis=1)
    err = np.abs(local + glob - full) / np.where(scale > 0, scale, 1.0)
    return full, local, glob, err


def run_localglobal_diag(cfg: ExperimentConfig, delta: float | None = None, corpus=None):
    """Per-function norms of the full, local and global parts plus the partition error."""
    delta = cfg.delta if delta is None else delta
    params = RegionParams(delta, cfg.n)
    quad = cfg.quadrature.build()
    x, wx = legendre_grid(cfg.n, cfg.grid.count, cfg.grid.extent)
    y, wy = legendre_grid(cfg.n, cfg.grid.count + 1, cfg.grid.extent)  # staggered: no x = y
    K = operator_matrix(cfg, x, y, quad)
    mask = in_local_region(np.repeat(x, len(y), axis=0), np.tile(y, (len(x), 1)), params).reshape(K.shape)
    corpus = corpus if corpus is not None else make_corpus(
        cfg.n, cfg.corpus.size, cfg.seed, cfg.corpus.max_degree, cfg.corpus.bump_fraction)
    rows = []
    for fid, f in enumerate(corpus):
        full, local, glob, err = split_apply(K, evaluate_any(f, y), wy, mask)
        nin = lp_norm(GridFunction(x, evaluate_any(f, x), wx), cfg.p)
        norms = [lp_norm(GridFunction(x, v, wx), cfg.p) for v in (full, local, glob)]
        rows.append(SplitRow(fid, nin, *norms, float(np.max(err))))
    return rows, float(np.mean(mask))


def global_fraction_vs_delta(cfg: ExperimentConfig, deltas, f=None):
    """||global part||_p / ||full||_p for increasing delta (region exhaustion)."""
    quad = cfg.quadrature.build()
    x, wx = legendre_grid(cfg.n, cfg.grid.count, cfg.grid.extent)
    y, wy = legendre_grid(cfg.n, cfg.grid.count + 1, cfg.grid.extent)
    K = operator_matrix(cfg, x, y, quad)
    f = f if f is not None else make_corpus(cfg.n, 2, cfg.seed, cfg.corpus.max_degree, 0.5)[-1]
    X = np.repeat(x, len(y), axis=0)
    Y = np.tile(y, (len(x), 1))
    out = []
    for d in deltas:
        mask = in_local_region(X, Y, RegionParams(float(d), cfg.n)).reshape(K.shape)
        full, _, glob, _ = split_apply(K, evaluate_any(f, y), wy, mask)
        nf = lp_norm(GridFunction(x, full, wx), cfg.p)
        out.append((float(d), lp_norm(GridFunction(x, glob, wx), cfg.p) / nf if nf > 0 else 0.0))
    return out


# ------------------------------------------------------------ fitted constants

@dataclass
class FittedConstant:
    name: str
    constants: list  # one fitted C per resample
    samples: int

    @property
    def spread(self) -> float:
        c = np.array(self.constants)
        return float(c.max() / c.min()) if np.all(c > 0) else math.inf

    def stable(self, factor: float = 10.0) -> bool:
        return bool(np.isfinite(self.spread) and self.spread < factor)


def _sample_local_pairs(rng, n, delta, count, box=4.0):
    """Pairs in N_delta with log-uniform separation down to 1e-3 of the admissible radius."""
    x = rng.uniform(-box, box, size=(count, n))
    rx = np.linalg.norm(x, axis=1)
    lim = n * delta * np.minimum(1.0, 1.0 / np.maximum(rx, 1e-300))
    r = lim * np.exp(rng.uniform(math.log(1e-3), math.log(0.999), size=count))
    d = rng.normal(size=(count, n))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    return x, x + r[:, None] * d


def riesz_local_constant(n: int = 1, delta: float = 1.0, samples: int = 200, resamples: int = 5,
                         seed: int = 0, component: int = 1,
                         quad: QuadratureConfig | None = None) -> FittedConstant:
    """C = max |R^A - R| |x-y|^{n-1/2} / (1+|x|)^{1/2} over sampled local pairs."""
    quad = quad or QuadratureConfig(node_count=24)
    rng = np.random.default_rng(seed)
    spec = KernelSpec("RieszA", n, component)
    cs = []
    for _ in range(resamples):
        x, y = _sample_local_pairs(rng, n, delta, samples)
        diff = np.abs(riesz_kernel(spec, x, y, quad) - riesz_kernel_euclid_closed(component, x, y))
        shape = (1 + np.linalg.norm(x, axis=1)) ** 0.5 / np.linalg.norm(x - y, axis=1) ** (n - 0.5)
        cs.append(float(np.max(diff / shape)))
    return FittedConstant("riesz_local_difference", cs, samples)


def conj_global_shape(x, y, eta: float = 0.75):
    n = x.shape[1]
    ip = np.sum(x * y, axis=1)
    rx2, ry2 = np.sum(x * x, axis=1), np.sum(y * y, axis=1)
    s = np.linalg.norm(x + y, axis=1)
    d = np.linalg.norm(x - y, axis=1)
    pos = s ** n * np.exp(-0.5 * eta * s * d - 0.5 * eta * (rx2 - ry2))
    return np.where(ip <= 0, np.exp(-eta * rx2), pos)


def conj_global_constant(n: int = 1, delta: float = 4.0 / 3.0, eta: float = 0.75,
                         samples: int = 200, resamples: int = 5, seed: int = 0,
                         component: int = 1, times=(1e-3, 1e-2, 0.1, 1.0, 10.0),
                         box: float = 3.0, quad: QuadratureConfig | None = None) -> FittedConstant:
    """C = max_t |C_{i,t}^A(x,y)| / shape(x,y) over sampled pairs outside N_delta."""
    quad = quad or QuadratureConfig(node_count=16)
    rng = np.random.default_rng(seed)
    spec = KernelSpec("ConjA", n, component)
    params = RegionParams(delta, n)
    cs = []
    for _ in range(resamples):
        xs, ys = [], []
        while sum(len(a) for a in xs) < samples:
            x = rng.uniform(-box, box, size=(4 * samples, n))
            y = rng.uniform(-box, box, size=(4 * samples, n))
            keep = ~in_local_region(x, y, params)
            xs.append(x[keep])
            ys.append(y[keep])
        x = np.concatenate(xs)[:samples]
        y = np.concatenate(ys)[:samples]
        shape = conj_global_shape(x, y, eta)
        best = 0.0
        for t in times:
            val = np.abs(conjugation_kernel(spec, t, x, y, quad))
            best = max(best, float(np.max(val / shape)))
        cs.append(best)
    return FittedConstant("conj_global_shape", cs, samples)


def conj_minus_q_local_constant(n: int = 1, delta: float = 4.0 / 3.0, samples: int = 200,
                                resamples: int = 5, seed: int = 0, component: int = 1,
                                times=(1e-3, 1e-2, 0.1, 1.0, 10.0),
                                quad: QuadratureConfig | None = None) -> FittedConstant:
    """Same fitted-constant check for |C_{i,t}^A - Q_{i,t}| on N_delta, uniformly in t."""
    quad = quad or QuadratureConfig(node_count=24)
    rng = np.random.default_rng(seed)
    spec = KernelSpec("ConjA", n, component)
    cs = []
    for _ in range(resamples):
        x, y = _sample_local_pairs(rng, n, delta, samples)
        shape = (1 + np.linalg.norm(x, axis=1)) ** 0.5 / np.linalg.norm(x - y, axis=1) ** (n - 0.5)
        best = 0.0
        for t in times:
            diff = np.abs(conjugation_kernel(spec, t, x, y, quad) - conj_kernel_euclid_closed(component, t, x, y))
            best = max(best, float(np.max(diff / shape)))
        cs.append(best)
    return FittedConstant("conj_local_difference", cs, samples)
